"""Schnorr proof of knowledge of a discrete logarithm, plus a two-base variant.

The interactive moves (:func:`schnorr_commit`, :func:`schnorr_respond`,
:func:`schnorr_check`) are exposed so tests can run the protocol with
verifier-chosen challenges and exercise witness extraction.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import SECP256K1, CurveConfig, Point
from ..numtheory import RandomSource
from ..wire import tlv
from . import transcript

_DOMAIN = b"tecdsa/schnorr/v1"
_DOMAIN_LINEAR = b"tecdsa/wz-proof/v1"


@dataclass(frozen=True)
class SchnorrProof:
    u: Point = tlv(1, "point")
    c: int = tlv(2, "scalar")
    z: int = tlv(3, "scalar")


def schnorr_commit(rng: RandomSource, curve: CurveConfig = SECP256K1) -> tuple[int, Point]:
    r = curve.random_scalar(rng)
    return r, curve.base_mul(r)


def schnorr_respond(x: int, r: int, c: int, curve: CurveConfig = SECP256K1) -> int:
    return (r + c * x) % curve.q


def schnorr_check(u: Point, c: int, z: int, X: Point, curve: CurveConfig = SECP256K1) -> bool:
    return curve.base_mul(z) == u + c * X


def _challenge(curve: CurveConfig, X: Point, u: Point, context: bytes) -> int:
    return transcript.challenge(
        curve, _DOMAIN, [context, curve.generator, X, u], curve.q
    )


def schnorr_prove(
    x: int, X: Point, context: bytes, rng: RandomSource, curve: CurveConfig = SECP256K1
) -> SchnorrProof:
    r, u = schnorr_commit(rng, curve)
    c = _challenge(curve, X, u, context)
    return SchnorrProof(u, c, schnorr_respond(x, r, c, curve))


def schnorr_verify(
    proof: SchnorrProof, X: Point, context: bytes, curve: CurveConfig = SECP256K1
) -> bool:
    try:
        if proof.c != _challenge(curve, X, proof.u, context):
            return False
        return schnorr_check(proof.u, proof.c, proof.z, X, curve)
    except (AttributeError, TypeError, ValueError):
        return False


@dataclass(frozen=True)
class LinearProof:
    """Knowledge of ``(s, l, rho)`` with ``W = s R + l B`` and ``Z = rho B``."""

    a_w: Point = tlv(1, "point")
    a_z: Point = tlv(2, "point")
    c: int = tlv(3, "scalar")
    z_s: int = tlv(4, "scalar")
    z_l: int = tlv(5, "scalar")
    z_rho: int = tlv(6, "scalar")


def _linear_challenge(curve, R, W, Z, a_w, a_z, context) -> int:
    return transcript.challenge(
        curve, _DOMAIN_LINEAR, [context, curve.generator, R, W, Z, a_w, a_z], curve.q
    )


def linear_prove(
    s: int,
    l: int,
    rho: int,
    R: Point,
    W: Point,
    Z: Point,
    context: bytes,
    rng: RandomSource,
    curve: CurveConfig = SECP256K1,
) -> LinearProof:
    q = curve.q
    a, b, c0 = (curve.random_scalar(rng) for _ in range(3))
    a_w = a * R + curve.base_mul(b)
    a_z = curve.base_mul(c0)
    c = _linear_challenge(curve, R, W, Z, a_w, a_z, context)
    return LinearProof(a_w, a_z, c, (a + c * s) % q, (b + c * l) % q, (c0 + c * rho) % q)


def linear_verify(
    proof: LinearProof,
    R: Point,
    W: Point,
    Z: Point,
    context: bytes,
    curve: CurveConfig = SECP256K1,
) -> bool:
    try:
        if proof.c != _linear_challenge(curve, R, W, Z, proof.a_w, proof.a_z, context):
            return False
        lhs_w = proof.z_s * R + curve.base_mul(proof.z_l)
        if lhs_w != proof.a_w + proof.c * W:
            return False
        return curve.base_mul(proof.z_rho) == proof.a_z + proof.c * Z
    except (AttributeError, TypeError, ValueError):
        return False
