"""Feldman verifiable secret sharing for degree-1 polynomials.

A dealing of ``f(X) = s + m X`` publishes ``c0 = s B`` and ``c1 = m B``; a share
``f(X)`` is checked with ``f(X) B == c0 + X c1``.  Shares are dealt at the
fixed evaluation points of the three parties (P1 at 2, P2 at 3, P3 at 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import EVALUATION_POINTS, SECP256K1, CurveConfig, Point
from .numtheory import RandomSource


@dataclass(frozen=True)
class VssShare:
    point: int
    value: int


@dataclass(frozen=True)
class VssDealing:
    c0: Point
    c1: Point
    shares: dict[int, int] = field(default_factory=dict)

    def share_for(self, party: int) -> VssShare:
        point = EVALUATION_POINTS[party]
        return VssShare(point, self.shares[point])


def evaluate(secret: int, slope: int, point: int, q: int) -> int:
    return (secret + slope * point) % q


def deal(
    secret: int,
    rng: RandomSource,
    curve: CurveConfig = SECP256K1,
    slope: int | None = None,
) -> tuple[VssDealing, int]:
    """Deal ``secret``; returns the dealing and the slope ``m`` (kept by the dealer).

    ``slope`` may be forced for tests.
    """
    q = curve.q
    m = curve.random_scalar(rng) if slope is None else slope % q
    shares = {pt: evaluate(secret, m, pt, q) for pt in sorted(EVALUATION_POINTS.values())}
    return VssDealing(curve.base_mul(secret), curve.base_mul(m), shares), m


def public_share_point(c0: Point, c1: Point, point: int) -> Point:
    """``f(point) B`` from the coefficient commitments alone."""
    return c0 + point * c1


def verify_share(share: VssShare, c0: Point, c1: Point) -> bool:
    curve = c0.curve
    if not 0 <= share.value < curve.q:
        return False
    return curve.base_mul(share.value) == public_share_point(c0, c1, share.point)
