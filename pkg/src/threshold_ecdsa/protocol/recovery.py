"""Bringing P3 online to replace an unavailable signer.

The helper (P1 or P2) sends the public dealing data and both recovery blobs.
P3 opens the blobs, checks every recovered scalar against the public points,
rebuilds ``x_3 = F(1)`` and the common secret ``d``, and answers with a fresh
Paillier key and auxiliary parameters.  Both sides then prove knowledge of
their point shares, and each ends with a :class:`SigningShare` for the pairing.
"""

from __future__ import annotations

from ..algebra import EVALUATION_POINTS
from ..errors import AbortReason, ProtocolAbort
from ..numtheory import RandomSource
from ..paillier import keygen as paillier_keygen
from ..wire import encode
from ..zkp.range_proofs import generate_aux_params
from ..zkp.schnorr import schnorr_prove, schnorr_verify
from .common import check_peer_factorization, check_peer_keys, context, prove_own_keys
from .config import ProtocolConfig
from .derivation import common_secret_bytes
from .messages import Kind, RecoveryBundle, RecoveryHello, RecoveryProve
from .records import KeyShareRecord, RecoveryKeyPair, SigningShare
from .recovery_box import RecoveryBoxError, open_shares
from .runtime import PartyCoroutine, Recv, Send


def _ctx(sid: bytes, purpose: bytes, party: int, *extra: bytes) -> bytes:
    return context(sid, b"recovery/" + purpose, party, *extra)


def recover_point_share(
    keypair: RecoveryKeyPair, bundle: RecoveryBundle, curve
) -> tuple[int, bytes]:
    """Open both blobs, check them against the public data, return ``(x_3, d)``."""
    public = bundle.public
    if public.public_key() != bundle.public_key:
        raise ProtocolAbort(AbortReason.PUBLIC_KEY_MISMATCH)
    one = EVALUATION_POINTS[3]
    opened = {}
    for dealer, blob, c0, c1, s3 in (
        (1, bundle.rec_13, public.c0_1, public.c1_1, public.s3_1),
        (2, bundle.rec_23, public.c0_2, public.c1_2, public.s3_2),
    ):
        try:
            to_p3, virtual = open_shares(keypair.secret, blob, dealer, curve)
        except RecoveryBoxError as exc:
            raise ProtocolAbort(AbortReason.RECOVERY_DECRYPT_FAILED, str(exc)) from None
        if curve.base_mul(to_p3) != c0 + one * c1 or curve.base_mul(virtual) != s3:
            raise ProtocolAbort(AbortReason.RECOVERY_SHARE_MISMATCH, f"dealer {dealer}")
        opened[dealer] = (to_p3, virtual)
    (s13, s31), (s23, s32) = opened[1], opened[2]
    q = curve.q
    x3 = (s13 + 2 * s31 - s32 + s23) % q
    # sigma_{2,1} B is public (f_2 at P1's point); d needs sigma_{2,3} times it
    s21_point = public.c0_2 + EVALUATION_POINTS[1] * public.c1_2
    return x3, common_secret_bytes(s23 * s21_point)


class RecoveryHelper:
    """P1 or P2 side of the recovery handshake."""

    def __init__(
        self, record: KeyShareRecord, session_id: bytes, rng: RandomSource, config: ProtocolConfig
    ):
        self.record = record
        self.me = record.role
        self.sid = session_id
        self.rng = rng
        self.config = config
        self.curve = config.curve

    def bundle(self) -> RecoveryBundle:
        rec = self.record
        sk = rec.paillier_secret()
        self.paillier_sk = sk
        proof = prove_own_keys(self.sid, self.me, sk, rec.aux, self.rng, self.curve)
        self.sent = RecoveryBundle(
            rec.public_key, rec.public, rec.rec_13, rec.rec_23, rec.paillier, rec.aux, proof
        )
        return self.sent

    def prove(self, hello: RecoveryHello) -> RecoveryProve:
        check_peer_keys(hello.paillier, hello.aux, self.config)
        check_peer_factorization(hello.factorization, self.sid, 3, hello.paillier, hello.aux, self.curve)
        self.hello = hello
        x = self.record.secrets.x
        ctx = _ctx(self.sid, b"x", self.me, encode(self.sent, self.curve))
        return RecoveryProve(schnorr_prove(x, self.curve.base_mul(x), ctx, self.rng, self.curve))

    def finish(self, peer: RecoveryProve) -> SigningShare:
        public = self.record.public
        ctx = _ctx(self.sid, b"x", 3, encode(self.hello, self.curve))
        if not schnorr_verify(peer.schnorr, public.share_point(3), ctx, self.curve):
            raise ProtocolAbort(AbortReason.SCHNORR_PROOF_INVALID, "P3 share")
        return SigningShare.from_point_share(
            self.me,
            3,
            self.record.secrets.x,
            public,
            paillier_sk=self.paillier_sk,
            peer_paillier=self.hello.paillier,
            aux=self.record.aux,
            peer_aux=self.hello.aux,
            d=self.record.secrets.d,
            curve=self.curve,
        )

    def run(self) -> PartyCoroutine:
        yield Send(Kind.RECOVERY_BUNDLE, self.bundle())
        hello = yield Recv(Kind.RECOVERY_HELLO)
        yield Send(Kind.RECOVERY_PROVE, self.prove(hello))
        return self.finish((yield Recv(Kind.RECOVERY_PROVE)))


class RecoveryP3:
    """The returning party: needs only its recovery key pair."""

    def __init__(
        self,
        keypair: RecoveryKeyPair,
        helper: int,
        session_id: bytes,
        rng: RandomSource,
        config: ProtocolConfig,
    ):
        if helper not in (1, 2):
            raise ValueError("P3 recovers with P1 or P2")
        self.keypair = keypair
        self.helper = helper
        self.sid = session_id
        self.rng = rng
        self.config = config
        self.curve = config.curve

    def hello(self, bundle: RecoveryBundle) -> RecoveryHello:
        check_peer_keys(bundle.paillier, bundle.aux, self.config)
        check_peer_factorization(
            bundle.factorization, self.sid, self.helper, bundle.paillier, bundle.aux, self.curve
        )
        self.x3, self.d = recover_point_share(self.keypair, bundle, self.curve)
        self.bundle = bundle
        self.paillier, self.paillier_sk = paillier_keygen(
            self.config.paillier_bits, self.rng, allow_insecure=self.config.insecure
        )
        self.aux = generate_aux_params(self.config.aux_bits, self.rng)
        proof = prove_own_keys(self.sid, 3, self.paillier_sk, self.aux, self.rng, self.curve)
        self.sent = RecoveryHello(self.paillier, self.aux, proof)
        return self.sent

    def prove(self, peer: RecoveryProve) -> RecoveryProve:
        public = self.bundle.public
        ctx = _ctx(self.sid, b"x", self.helper, encode(self.bundle, self.curve))
        if not schnorr_verify(peer.schnorr, public.share_point(self.helper), ctx, self.curve):
            raise ProtocolAbort(AbortReason.SCHNORR_PROOF_INVALID, f"P{self.helper} share")
        x3_point = self.curve.base_mul(self.x3)
        ctx = _ctx(self.sid, b"x", 3, encode(self.sent, self.curve))
        return RecoveryProve(schnorr_prove(self.x3, x3_point, ctx, self.rng, self.curve))

    def signing_share(self) -> SigningShare:
        return SigningShare.from_point_share(
            3,
            self.helper,
            self.x3,
            self.bundle.public,
            paillier_sk=self.paillier_sk,
            peer_paillier=self.bundle.paillier,
            aux=self.aux,
            peer_aux=self.bundle.aux,
            d=self.d,
            curve=self.curve,
        )

    def run(self) -> PartyCoroutine:
        bundle = yield Recv(Kind.RECOVERY_BUNDLE)
        yield Send(Kind.RECOVERY_HELLO, self.hello(bundle))
        peer = yield Recv(Kind.RECOVERY_PROVE)
        yield Send(Kind.RECOVERY_PROVE, self.prove(peer))
        return self.signing_share()
