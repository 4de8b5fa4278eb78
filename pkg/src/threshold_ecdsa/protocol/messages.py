"""Wire messages of key generation, recovery and signing, keyed by :class:`Kind`."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..algebra import Point
from ..mta import MtaInitMessage, MtaResponseMessage
from ..paillier import PaillierPublicKey
from ..wire import tlv
from ..zkp.commitment import Commitment, Decommitment
from ..zkp.factorization import FactorizationProof
from ..zkp.range_proofs import AuxRsaParams
from ..zkp.schnorr import LinearProof, SchnorrProof
from .records import PublicShares


class Kind(enum.IntEnum):
    KEYGEN_COMMIT = 0x0101
    KEYGEN_DEAL = 0x0102
    KEYGEN_PROVE = 0x0103
    RECOVERY_BUNDLE = 0x0201
    RECOVERY_HELLO = 0x0202
    RECOVERY_PROVE = 0x0203
    SIGN_COMMIT = 0x0301
    SIGN_MTA_INIT = 0x0302
    SIGN_MTA_RESPONSE = 0x0303
    SIGN_DELTA = 0x0304
    SIGN_REVEAL = 0x0305
    SIGN_WZ_COMMIT = 0x0306
    SIGN_WZ_OPEN = 0x0307
    SIGN_UT_COMMIT = 0x0308
    SIGN_UT_OPEN = 0x0309
    SIGN_SHARE = 0x030A

    @property
    def round(self) -> int:
        return self & 0xFF


@dataclass(frozen=True)
class KeygenCommit:
    kgc: Commitment = tlv(1, "msg", cls=Commitment)
    kgcs: Commitment = tlv(2, "msg", cls=Commitment)
    paillier: PaillierPublicKey = tlv(3, "msg", cls=PaillierPublicKey)
    aux: AuxRsaParams = tlv(4, "msg", cls=AuxRsaParams)


@dataclass(frozen=True)
class KeygenDeal:
    kgd: Decommitment = tlv(1, "msg", cls=Decommitment)
    kgds: Decommitment = tlv(2, "msg", cls=Decommitment)
    slope_point: Point = tlv(3, "point")
    share: int = tlv(4, "scalar")
    rec: bytes = tlv(5, "bytes")


@dataclass(frozen=True)
class KeygenProve:
    schnorr: SchnorrProof = tlv(1, "msg", cls=SchnorrProof)
    factorization: FactorizationProof = tlv(2, "msg", cls=FactorizationProof)


@dataclass(frozen=True)
class RecoveryBundle:
    public_key: Point = tlv(1, "point")
    public: PublicShares = tlv(2, "msg", cls=PublicShares)
    rec_13: bytes = tlv(3, "bytes")
    rec_23: bytes = tlv(4, "bytes")
    paillier: PaillierPublicKey = tlv(5, "msg", cls=PaillierPublicKey)
    aux: AuxRsaParams = tlv(6, "msg", cls=AuxRsaParams)
    factorization: FactorizationProof = tlv(7, "msg", cls=FactorizationProof)


@dataclass(frozen=True)
class RecoveryHello:
    paillier: PaillierPublicKey = tlv(1, "msg", cls=PaillierPublicKey)
    aux: AuxRsaParams = tlv(2, "msg", cls=AuxRsaParams)
    factorization: FactorizationProof = tlv(3, "msg", cls=FactorizationProof)


@dataclass(frozen=True)
class RecoveryProve:
    schnorr: SchnorrProof = tlv(1, "msg", cls=SchnorrProof)


@dataclass(frozen=True)
class SignCommit:
    com: Commitment = tlv(1, "msg", cls=Commitment)


@dataclass(frozen=True)
class SignMtaInit:
    gamma: MtaInitMessage = tlv(1, "msg", cls=MtaInitMessage)
    omega: MtaInitMessage = tlv(2, "msg", cls=MtaInitMessage)


@dataclass(frozen=True)
class SignMtaResponse:
    gamma: MtaResponseMessage = tlv(1, "msg", cls=MtaResponseMessage)
    omega: MtaResponseMessage = tlv(2, "msg", cls=MtaResponseMessage)


@dataclass(frozen=True)
class SignDelta:
    delta: int = tlv(1, "scalar")


@dataclass(frozen=True)
class SignReveal:
    dec: Decommitment = tlv(1, "msg", cls=Decommitment)
    proof: SchnorrProof = tlv(2, "msg", cls=SchnorrProof)


@dataclass(frozen=True)
class SignWZCommit:
    com: Commitment = tlv(1, "msg", cls=Commitment)


@dataclass(frozen=True)
class SignWZOpen:
    dec: Decommitment = tlv(1, "msg", cls=Decommitment)
    proof: LinearProof = tlv(2, "msg", cls=LinearProof)


@dataclass(frozen=True)
class SignUTCommit:
    com: Commitment = tlv(1, "msg", cls=Commitment)


@dataclass(frozen=True)
class SignUTOpen:
    dec: Decommitment = tlv(1, "msg", cls=Decommitment)


@dataclass(frozen=True)
class SignShare:
    s: int = tlv(1, "scalar")


KIND_SCHEMA: dict[Kind, type] = {
    Kind.KEYGEN_COMMIT: KeygenCommit,
    Kind.KEYGEN_DEAL: KeygenDeal,
    Kind.KEYGEN_PROVE: KeygenProve,
    Kind.RECOVERY_BUNDLE: RecoveryBundle,
    Kind.RECOVERY_HELLO: RecoveryHello,
    Kind.RECOVERY_PROVE: RecoveryProve,
    Kind.SIGN_COMMIT: SignCommit,
    Kind.SIGN_MTA_INIT: SignMtaInit,
    Kind.SIGN_MTA_RESPONSE: SignMtaResponse,
    Kind.SIGN_DELTA: SignDelta,
    Kind.SIGN_REVEAL: SignReveal,
    Kind.SIGN_WZ_COMMIT: SignWZCommit,
    Kind.SIGN_WZ_OPEN: SignWZOpen,
    Kind.SIGN_UT_COMMIT: SignUTCommit,
    Kind.SIGN_UT_OPEN: SignUTOpen,
    Kind.SIGN_SHARE: SignShare,
}
