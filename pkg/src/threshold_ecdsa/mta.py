"""Multiplicative-to-additive share conversion over Paillier.

The initiator holds ``a`` and a Paillier key; the respondent holds ``b``.
After one exchange ``alpha + beta = a b mod q`` with ``alpha`` known only to
the initiator and ``beta`` only to the respondent.  The checked variant
additionally binds ``b`` to a public point ``b B``.

Range proofs are verified under the verifier's own auxiliary parameters: the
initiator proves to the respondent's ``(M, h1, h2)`` and vice versa.  This is
correct as long as ``a b + beta' < N``; ``beta'`` is uniform in ``Z_N`` so the
condition fails with probability about ``q^2 / N``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import SECP256K1, CurveConfig, Point
from .errors import AbortReason, ProtocolAbort
from .numtheory import RandomSource, rand_below, rand_unit
from .paillier import (
    PaillierError,
    PaillierPublicKey,
    PaillierSecretKey,
    add_ciphertexts,
    decrypt,
    encrypt,
    scalar_mul_ciphertext,
)
from .wire import tlv
from .zkp.range_proofs import (
    AuxRsaParams,
    RangeProofA,
    RangeProofB,
    range_prove_initiator,
    range_prove_respondent,
    range_verify_initiator,
    range_verify_respondent,
)


@dataclass(frozen=True)
class MtaInitMessage:
    c: int = tlv(1)
    proof: RangeProofA | None = tlv(2, "msg", cls=RangeProofA, optional=True)


@dataclass(frozen=True)
class MtaResponseMessage:
    c: int = tlv(1)
    proof: RangeProofB | None = tlv(2, "msg", cls=RangeProofB, optional=True)


@dataclass(frozen=True)
class MtaInitiatorState:
    a: int
    c: int
    pk: PaillierPublicKey


def mta_init(
    a: int,
    pk_a: PaillierPublicKey,
    aux_b: AuxRsaParams | None,
    context: bytes,
    rng: RandomSource,
    curve: CurveConfig = SECP256K1,
) -> tuple[MtaInitMessage, MtaInitiatorState]:
    """Encrypt ``a`` under the initiator's key; pass ``aux_b=None`` to skip the range proof."""
    r = rand_unit(rng, pk_a.n)
    c = encrypt(pk_a, a, r)
    proof = None
    if aux_b is not None:
        proof = range_prove_initiator(a, r, c, pk_a, aux_b, context, rng, curve)
    return MtaInitMessage(c, proof), MtaInitiatorState(a, c, pk_a)


def mta_respond(
    b: int,
    msg: MtaInitMessage,
    pk_a: PaillierPublicKey,
    own_aux: AuxRsaParams | None,
    aux_a: AuxRsaParams | None,
    context: bytes,
    rng: RandomSource,
    with_check: bool = False,
    b_point: Point | None = None,
    curve: CurveConfig = SECP256K1,
    beta_prime: int | None = None,
) -> tuple[MtaResponseMessage, int]:
    """Answer an init message; returns the response and ``beta``.

    Range proofs are checked and produced only when both auxiliary parameter
    sets are given.  ``beta_prime`` forces the mask (tests only).
    """
    proofs = own_aux is not None and aux_a is not None
    if not 0 < msg.c < pk_a.n2:
        raise ProtocolAbort(AbortReason.RANGE_PROOF_INITIATOR_INVALID, "ciphertext out of range")
    if proofs and (
        msg.proof is None
        or not range_verify_initiator(msg.proof, msg.c, pk_a, own_aux, context, curve)
    ):
        raise ProtocolAbort(AbortReason.RANGE_PROOF_INITIATOR_INVALID)
    if beta_prime is None:
        beta_prime = rand_below(rng, pk_a.n)
    r = rand_unit(rng, pk_a.n)
    c_b = add_ciphertexts(
        pk_a, scalar_mul_ciphertext(pk_a, b, msg.c), encrypt(pk_a, beta_prime, r)
    )
    proof = None
    if proofs:
        if with_check and b_point is None:
            b_point = curve.base_mul(b)
        proof = range_prove_respondent(
            b, beta_prime, r, msg.c, c_b, pk_a, aux_a, context, rng,
            with_check=with_check, b_point=b_point, curve=curve,
        )
    return MtaResponseMessage(c_b, proof), -beta_prime % curve.q


def mta_finalize(
    state: MtaInitiatorState,
    resp: MtaResponseMessage,
    sk_a: PaillierSecretKey,
    own_aux: AuxRsaParams | None,
    context: bytes,
    with_check: bool = False,
    b_point: Point | None = None,
    curve: CurveConfig = SECP256K1,
) -> int:
    """Check the response and return ``alpha``."""
    if own_aux is not None and (
        resp.proof is None
        or not range_verify_respondent(
            resp.proof, state.c, resp.c, state.pk, own_aux, context,
            with_check=with_check, b_point=b_point, curve=curve,
        )
    ):
        raise ProtocolAbort(AbortReason.RANGE_PROOF_RESPONDENT_INVALID)
    try:
        return decrypt(sk_a, resp.c) % curve.q
    except PaillierError:
        raise ProtocolAbort(AbortReason.RANGE_PROOF_RESPONDENT_INVALID, "undecryptable") from None
