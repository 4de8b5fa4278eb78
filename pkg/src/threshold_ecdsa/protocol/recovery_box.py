"""Hybrid encryption of recovery material to P3's long-term key.

An ephemeral Diffie-Hellman on the protocol curve gives a shared point; the
AES-256-GCM key is the curve hash of a domain tag, the ephemeral point and the
shared x-coordinate.  The blob is ``E (33) | nonce (12) | ciphertext``; the
dealer index is authenticated as associated data so blobs cannot be swapped.
"""

from __future__ import annotations

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from ..algebra import SECP256K1, CurveConfig, Point
from ..numtheory import RandomSource, rand_bytes
from .records import RecoveryKeyPair

_TAG = b"tecdsa/recovery-box/v1"
_NONCE = 12


class RecoveryBoxError(ValueError):
    pass


def setup_p3(rng: RandomSource, curve: CurveConfig = SECP256K1) -> RecoveryKeyPair:
    sk = curve.random_scalar(rng)
    return RecoveryKeyPair(sk, curve.base_mul(sk))


def _key(curve: CurveConfig, eph: Point, shared: Point) -> bytes:
    return curve.hash(_TAG + eph.encode() + shared.encode())


def _aad(dealer: int) -> bytes:
    return b"rec" + bytes([dealer])


def seal(pk: Point, payload: bytes, dealer: int, rng: RandomSource) -> bytes:
    curve = pk.curve
    e = curve.random_scalar(rng)
    eph = curve.base_mul(e)
    nonce = rand_bytes(rng, _NONCE)
    ct = AESGCM(_key(curve, eph, e * pk)).encrypt(nonce, payload, _aad(dealer))
    return eph.encode() + nonce + ct


def open_box(
    sk: int, blob: bytes, dealer: int, curve: CurveConfig = SECP256K1
) -> bytes:
    head = curve.point_bytes
    if len(blob) < head + _NONCE + 16:
        raise RecoveryBoxError("recovery blob too short")
    try:
        eph = curve.decode_point(blob[:head])
    except ValueError:
        raise RecoveryBoxError("bad ephemeral point") from None
    if eph.is_identity:
        raise RecoveryBoxError("bad ephemeral point")
    nonce, ct = blob[head : head + _NONCE], blob[head + _NONCE :]
    try:
        return AESGCM(_key(curve, eph, sk * eph)).decrypt(nonce, ct, _aad(dealer))
    except InvalidTag:
        raise RecoveryBoxError("recovery blob failed authentication") from None


def seal_shares(
    pk: Point, to_p3: int, virtual: int, dealer: int, rng: RandomSource
) -> bytes:
    """Seal ``(sigma_{i,3}, sigma_{3,i})`` from dealer ``i``."""
    c = pk.curve
    return seal(pk, c.encode_scalar(to_p3) + c.encode_scalar(virtual), dealer, rng)


def open_shares(
    sk: int, blob: bytes, dealer: int, curve: CurveConfig = SECP256K1
) -> tuple[int, int]:
    payload = open_box(sk, blob, dealer, curve)
    n = curve.scalar_bytes
    if len(payload) != 2 * n:
        raise RecoveryBoxError("unexpected payload size")
    try:
        return curve.decode_scalar(payload[:n]), curve.decode_scalar(payload[n:])
    except ValueError:
        raise RecoveryBoxError("payload is not two scalars") from None
