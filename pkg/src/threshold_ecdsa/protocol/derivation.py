"""Deterministic child keys ``Y^i = Y + H(d || i) B``."""

from __future__ import annotations

import struct

from ..algebra import SECP256K1, CurveConfig, Point

_TAG = b"tecdsa/derive/v1"
MAX_INDEX = 2**32 - 1


def derivation_scalar(d: bytes, index: int, curve: CurveConfig = SECP256K1) -> int:
    if len(d) != 32:
        raise ValueError("d must be a 32-byte x-coordinate")
    if not 0 <= index <= MAX_INDEX:
        raise ValueError("derivation index must fit in 32 bits")
    return curve.hash_to_scalar(_TAG + d + struct.pack(">I", index))


def derive_public_key(public_key: Point, d: bytes, index: int) -> Point:
    curve = public_key.curve
    return public_key + curve.base_mul(derivation_scalar(d, index, curve))


def common_secret_bytes(point: Point) -> bytes:
    """``d`` is the x-coordinate of ``sigma_{2,1} sigma_{2,3} B`` as 32 bytes."""
    return point.x.to_bytes(point.curve.scalar_bytes, "big")
