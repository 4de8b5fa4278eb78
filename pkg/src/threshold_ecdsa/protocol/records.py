"""Long-lived key material: public dealing data, per-party records, signing shares."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..algebra import EVALUATION_POINTS, SECP256K1, CurveConfig, Point, lagrange_weight
from ..paillier import PaillierPublicKey, PaillierSecretKey, keypair_from_primes
from ..wire import tlv
from ..zkp.range_proofs import AuxRsaParams
from .derivation import derivation_scalar


@dataclass(frozen=True)
class PublicShares:
    """Everything needed to compute each party's share point and the public key.

    ``c0_i, c1_i`` commit to dealer ``i``'s polynomial; ``s3_i`` is
    ``sigma_{3,i} B``, which fixes the virtual third dealer's polynomial.
    """

    c0_1: Point = tlv(1, "point")
    c1_1: Point = tlv(2, "point")
    c0_2: Point = tlv(3, "point")
    c1_2: Point = tlv(4, "point")
    s3_1: Point = tlv(5, "point")
    s3_2: Point = tlv(6, "point")

    def dealings(self) -> list[tuple[Point, Point]]:
        # virtual dealer: f3(2) = s3_1, f3(3) = s3_2, so f3(0) = 3 s3_1 - 2 s3_2
        virtual = (3 * self.s3_1 - 2 * self.s3_2, self.s3_2 - self.s3_1)
        return [(self.c0_1, self.c1_1), (self.c0_2, self.c1_2), virtual]

    def share_point(self, party: int) -> Point:
        """``x_party B``: sum of every dealer's polynomial at the party's point."""
        x = EVALUATION_POINTS[party]
        pts = [c0 + x * c1 for c0, c1 in self.dealings()]
        return pts[0] + pts[1] + pts[2]

    def public_key(self) -> Point:
        c = [c0 for c0, _ in self.dealings()]
        return c[0] + c[1] + c[2]


@dataclass(frozen=True)
class KeySecrets:
    x: int = tlv(1, "scalar")
    d: bytes = tlv(2, "bytes", size=32)
    paillier_p: int = tlv(3)
    paillier_q: int = tlv(4)


@dataclass(frozen=True, kw_only=True)
class KeyShareRecord:
    """Output of key generation for P1 or P2."""

    role: int = tlv(1, "u8")
    public: PublicShares = tlv(2, "msg", cls=PublicShares)
    paillier: PaillierPublicKey = tlv(3, "msg", cls=PaillierPublicKey)
    aux: AuxRsaParams = tlv(4, "msg", cls=AuxRsaParams)
    peer_paillier: PaillierPublicKey = tlv(5, "msg", cls=PaillierPublicKey)
    peer_aux: AuxRsaParams = tlv(6, "msg", cls=AuxRsaParams)
    rec_13: bytes = tlv(7, "bytes")
    rec_23: bytes = tlv(8, "bytes")
    recovery_key: Point = tlv(9, "point")
    secrets: KeySecrets | None = tlv(10, "msg", cls=KeySecrets, optional=True)

    @property
    def public_key(self) -> Point:
        return self.public.public_key()

    @property
    def peer(self) -> int:
        return 3 - self.role

    def paillier_secret(self) -> PaillierSecretKey:
        pk, sk = keypair_from_primes(self.secrets.paillier_p, self.secrets.paillier_q)
        if pk != self.paillier:
            raise ValueError("stored Paillier primes do not match the public key")
        return sk

    def public_only(self) -> KeyShareRecord:
        return replace(self, secrets=None)


@dataclass(frozen=True)
class RecoveryKeyPair:
    """P3's long-term encryption key for recovery material."""

    secret: int = tlv(1, "scalar")
    public: Point = tlv(2, "point")


def pair_weights(party: int, peer: int, q: int) -> tuple[int, int]:
    pair = (EVALUATION_POINTS[party], EVALUATION_POINTS[peer])
    return lagrange_weight(pair, 0, q), lagrange_weight(pair, 1, q)


@dataclass(frozen=True)
class SigningShare:
    """One party's view of a signing pairing: ``omega + peer_omega = u``."""

    party: int
    peer: int
    omega: int
    peer_omega_point: Point
    public_key: Point
    paillier_sk: PaillierSecretKey
    peer_paillier: PaillierPublicKey
    aux: AuxRsaParams
    peer_aux: AuxRsaParams
    d: bytes | None = None
    curve: CurveConfig = SECP256K1

    @classmethod
    def from_point_share(
        cls,
        party: int,
        peer: int,
        x: int,
        public: PublicShares,
        **keys,
    ) -> SigningShare:
        curve = keys.get("curve", SECP256K1)
        lam, lam_peer = pair_weights(party, peer, curve.q)
        return cls(
            party=party,
            peer=peer,
            omega=lam * x % curve.q,
            peer_omega_point=lam_peer * public.share_point(peer),
            public_key=public.public_key(),
            **keys,
        )

    @classmethod
    def for_ordinary(cls, record: KeyShareRecord, curve: CurveConfig = SECP256K1) -> SigningShare:
        return cls.from_point_share(
            record.role,
            record.peer,
            record.secrets.x,
            record.public,
            paillier_sk=record.paillier_secret(),
            peer_paillier=record.peer_paillier,
            aux=record.aux,
            peer_aux=record.peer_aux,
            d=record.secrets.d,
            curve=curve,
        )

    def derive(self, index: int) -> SigningShare:
        """Shares for child key ``Y + H(d || index) B``; the weights keep the sum exact."""
        if self.d is None:
            raise ValueError("derivation needs the common secret d")
        q = self.curve.q
        h = derivation_scalar(self.d, index, self.curve)
        lam, lam_peer = pair_weights(self.party, self.peer, q)
        return replace(
            self,
            omega=(self.omega + lam * h) % q,
            peer_omega_point=self.peer_omega_point + self.curve.base_mul(lam_peer * h),
            public_key=self.public_key + self.curve.base_mul(h),
        )

    def consistent(self) -> bool:
        return self.curve.base_mul(self.omega) + self.peer_omega_point == self.public_key
