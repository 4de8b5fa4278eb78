"""Hash commitments: ``H(domain | payload | nonce)`` with a fresh 32-byte nonce."""

from __future__ import annotations

import hmac
import struct
from dataclasses import dataclass

from ..algebra import SECP256K1, CurveConfig
from ..numtheory import RandomSource, rand_bytes
from ..wire import tlv

NONCE_BYTES = 32


@dataclass(frozen=True)
class Commitment:
    digest: bytes = tlv(1, "bytes", size=32)


@dataclass(frozen=True)
class Decommitment:
    payload: bytes = tlv(1, "bytes")
    nonce: bytes = tlv(2, "bytes", size=NONCE_BYTES)


def _digest(curve: CurveConfig, domain: bytes, payload: bytes, nonce: bytes) -> bytes:
    return curve.hash(
        struct.pack(">I", len(domain)) + domain
        + struct.pack(">I", len(payload)) + payload
        + nonce
    )


def commit(
    payload: bytes,
    rng: RandomSource,
    domain: bytes = b"",
    curve: CurveConfig = SECP256K1,
) -> tuple[Commitment, Decommitment]:
    nonce = rand_bytes(rng, NONCE_BYTES)
    return Commitment(_digest(curve, domain, payload, nonce)), Decommitment(payload, nonce)


def verify_commitment(
    com: Commitment,
    dec: Decommitment,
    domain: bytes = b"",
    curve: CurveConfig = SECP256K1,
) -> bytes | None:
    """Return the committed payload, or ``None`` if the opening does not match."""
    if len(dec.nonce) != NONCE_BYTES:
        return None
    expected = _digest(curve, domain, dec.payload, dec.nonce)
    return dec.payload if hmac.compare_digest(expected, com.digest) else None
