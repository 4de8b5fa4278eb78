"""(2,3)-threshold ECDSA with an offline recovery party.

P1 and P2 generate a shared key and sign together; P3 holds only a long-term
encryption key and can replace either of them through the sealed recovery
material created at key generation.  Signatures are ordinary ECDSA.
"""

from .algebra import SECP256K1, CurveConfig, Point, Signature, ecdsa_sign, ecdsa_verify
from .errors import AbortReason, ProtocolAbort

__version__ = "0.1.0"

__all__ = [
    "SECP256K1",
    "AbortReason",
    "CurveConfig",
    "Point",
    "ProtocolAbort",
    "Signature",
    "ecdsa_sign",
    "ecdsa_verify",
]
