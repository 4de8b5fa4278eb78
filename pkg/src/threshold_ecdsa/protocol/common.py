"""Helpers shared by the key generation, recovery and signing sessions."""

from __future__ import annotations

import struct

from ..algebra import CurveConfig, Point
from ..errors import AbortReason, ProtocolAbort
from ..numtheory import RandomSource
from ..paillier import PaillierError, PaillierPublicKey, PaillierSecretKey
from ..wire import encode
from ..zkp.commitment import Commitment, Decommitment, commit, verify_commitment
from ..zkp.factorization import FactorizationProof, factorization_prove, factorization_verify
from ..zkp.range_proofs import AuxRsaParams
from .config import ProtocolConfig


def context(session_id: bytes, purpose: bytes, party: int, *extra: bytes) -> bytes:
    """Domain string binding a proof or commitment to session, purpose and speaker."""
    parts = [session_id, purpose, bytes([party]), *extra]
    return b"".join(struct.pack(">I", len(p)) + p for p in parts)


def commit_points(
    points: list[Point], domain: bytes, rng: RandomSource, curve: CurveConfig
) -> tuple[Commitment, Decommitment]:
    return commit(b"".join(p.encode() for p in points), rng, domain, curve)


def open_points(
    com: Commitment, dec: Decommitment, domain: bytes, count: int, curve: CurveConfig
) -> list[Point]:
    payload = verify_commitment(com, dec, domain, curve)
    n = curve.point_bytes
    if payload is None or len(payload) != count * n:
        raise ProtocolAbort(AbortReason.DECOMMITMENT_INVALID)
    try:
        return [curve.decode_point(payload[i * n : (i + 1) * n]) for i in range(count)]
    except ValueError:
        raise ProtocolAbort(AbortReason.DECOMMITMENT_INVALID, "committed bytes are not points") from None


def _key_context(session_id: bytes, party: int, pk: PaillierPublicKey, aux: AuxRsaParams) -> bytes:
    return context(session_id, b"factorization", party, encode(pk), encode(aux))


def prove_own_keys(
    session_id: bytes,
    party: int,
    sk: PaillierSecretKey,
    aux: AuxRsaParams,
    rng: RandomSource,
    curve: CurveConfig,
) -> FactorizationProof:
    return factorization_prove(sk, _key_context(session_id, party, sk.public, aux), rng, curve=curve)


def check_peer_keys(
    pk: PaillierPublicKey, aux: AuxRsaParams, config: ProtocolConfig
) -> None:
    try:
        pk.validate(config.paillier_bits)
    except PaillierError as exc:
        raise ProtocolAbort(AbortReason.PAILLIER_KEY_INVALID, str(exc)) from None
    try:
        aux.validate(config.aux_bits)
    except ValueError as exc:
        raise ProtocolAbort(AbortReason.AUX_PARAMS_INVALID, str(exc)) from None


def check_peer_factorization(
    proof: FactorizationProof,
    session_id: bytes,
    party: int,
    pk: PaillierPublicKey,
    aux: AuxRsaParams,
    curve: CurveConfig,
) -> None:
    ctx = _key_context(session_id, party, pk, aux)
    if not factorization_verify(proof, pk.n, ctx, curve=curve):
        raise ProtocolAbort(AbortReason.FACTORIZATION_PROOF_INVALID)
