"""Party state machines for key generation, recovery and signing."""

from .config import PAIRINGS, PRODUCTION, TEST, ProtocolConfig, normalize_pairing
from .derivation import derivation_scalar, derive_public_key
from .keygen import KeygenSession
from .messages import KIND_SCHEMA, Kind
from .records import KeySecrets, KeyShareRecord, PublicShares, RecoveryKeyPair, SigningShare
from .recovery import RecoveryHelper, RecoveryP3, recover_point_share
from .recovery_box import setup_p3
from .runtime import Recv, Send
from .signing import SignSession

__all__ = [
    "KIND_SCHEMA",
    "PAIRINGS",
    "PRODUCTION",
    "TEST",
    "KeySecrets",
    "KeyShareRecord",
    "KeygenSession",
    "Kind",
    "ProtocolConfig",
    "PublicShares",
    "Recv",
    "RecoveryHelper",
    "RecoveryKeyPair",
    "RecoveryP3",
    "Send",
    "SignSession",
    "SigningShare",
    "derivation_scalar",
    "derive_public_key",
    "normalize_pairing",
    "recover_point_share",
    "setup_p3",
]
