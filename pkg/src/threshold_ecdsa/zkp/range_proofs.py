"""Range proofs attached to the MtA messages, over an auxiliary RSA modulus.

The verifier's own ``(M, h1, h2)`` is used in both directions: whoever checks
a proof supplies the auxiliary parameters it generated.  Both proofs convince
the verifier that the hidden multiplier lies in ``[-q^3, q^3]``; the
respondent proof can additionally link the multiplier to a public point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..algebra import SECP256K1, CurveConfig, Point
from ..numtheory import (
    RandomSource,
    invert,
    powmod,
    rand_below,
    rand_unit,
    random_safe_prime,
)
from ..paillier import PaillierPublicKey
from ..wire import tlv
from . import transcript

_DOMAIN_A = b"tecdsa/range-initiator/v1"
_DOMAIN_B = b"tecdsa/range-respondent/v1"


@dataclass(frozen=True)
class AuxRsaParams:
    m: int = tlv(1)
    h1: int = tlv(2)
    h2: int = tlv(3)

    def validate(self, min_bits: int = 0) -> None:
        m = self.m
        if m.bit_length() < min_bits or m % 2 == 0:
            raise ValueError("auxiliary modulus too small or even")
        for h in (self.h1, self.h2):
            if not 1 < h < m or math.gcd(h, m) != 1:
                raise ValueError("auxiliary generators must be units other than 1")
        if self.h1 == self.h2:
            raise ValueError("auxiliary generators must differ")


def generate_aux_params(bits: int, rng: RandomSource) -> AuxRsaParams:
    """``M`` = product of two safe primes; ``h2 = h1^a`` for a discarded secret ``a``."""
    while True:
        p = random_safe_prime(bits // 2, rng)
        q = random_safe_prime(bits // 2, rng)
        if p != q:
            break
    m = p * q
    order = (p - 1) // 2 * ((q - 1) // 2)
    while True:
        h1 = powmod(rand_unit(rng, m), 2, m)
        if h1 != 1:
            break
    while True:
        h2 = powmod(h1, 1 + rand_below(rng, order - 1), m)
        if h2 not in (1, h1):
            return AuxRsaParams(m, h1, h2)


@dataclass(frozen=True)
class RangeProofA:
    z: int = tlv(1)
    u: int = tlv(2)
    w: int = tlv(3)
    e: int = tlv(4)
    s: int = tlv(5)
    s1: int = tlv(6)
    s2: int = tlv(7)


@dataclass(frozen=True, kw_only=True)
class RangeProofB:
    z: int = tlv(1)
    z_prime: int = tlv(2)
    t: int = tlv(3)
    v: int = tlv(4)
    w: int = tlv(5)
    u: Point | None = tlv(6, "point", optional=True)
    e: int = tlv(7)
    s: int = tlv(8)
    s1: int = tlv(9)
    s2: int = tlv(10)
    t1: int = tlv(11)
    t2: int = tlv(12)


def _ped(aux: AuxRsaParams, a: int, b: int) -> int:
    return powmod(aux.h1, a, aux.m) * powmod(aux.h2, b, aux.m) % aux.m


def _challenge_a(curve, context, pk, c, aux, z, u, w) -> int:
    items = [context, pk.n, pk.g, c, aux.m, aux.h1, aux.h2, z, u, w]
    return transcript.challenge(curve, _DOMAIN_A, items, curve.q)


def range_prove_initiator(
    m: int,
    r: int,
    c: int,
    pk: PaillierPublicKey,
    aux: AuxRsaParams,
    context: bytes,
    rng: RandomSource,
    curve: CurveConfig = SECP256K1,
) -> RangeProofA:
    """Prove ``c = Gamma^m r^N mod N^2`` for a small ``m``."""
    q = curve.q
    q3 = q**3
    n, n2 = pk.n, pk.n2
    alpha = rand_below(rng, q3)
    beta = rand_unit(rng, n)
    gamma = rand_below(rng, q3 * aux.m)
    rho = rand_below(rng, q * aux.m)
    z = _ped(aux, m, rho)
    u = powmod(pk.g, alpha, n2) * powmod(beta, n, n2) % n2
    w = _ped(aux, alpha, gamma)
    e = _challenge_a(curve, context, pk, c, aux, z, u, w)
    return RangeProofA(
        z=z,
        u=u,
        w=w,
        e=e,
        s=powmod(r, e, n) * beta % n,
        s1=e * m + alpha,
        s2=e * rho + gamma,
    )


def range_verify_initiator(
    proof: RangeProofA,
    c: int,
    pk: PaillierPublicKey,
    aux: AuxRsaParams,
    context: bytes,
    curve: CurveConfig = SECP256K1,
) -> bool:
    try:
        n, n2, mm = pk.n, pk.n2, aux.m
        p = proof
        if not (0 < p.z < mm and 0 < p.w < mm and 0 < p.u < n2 and 0 < p.s < n and 0 < c < n2):
            return False
        if p.e != _challenge_a(curve, context, pk, c, aux, p.z, p.u, p.w):
            return False
        if p.s1 > curve.q**3:
            return False
        rhs = powmod(pk.g, p.s1, n2) * powmod(p.s, n, n2) * powmod(invert(c, n2), p.e, n2) % n2
        if p.u != rhs:
            return False
        return _ped(aux, p.s1, p.s2) == powmod(p.z, p.e, mm) * p.w % mm
    except (AttributeError, TypeError, ValueError, ZeroDivisionError):
        return False


def _challenge_b(curve, context, pk, c1, c2, aux, with_check, b_point, p_items) -> int:
    items = [context, pk.n, pk.g, c1, c2, aux.m, aux.h1, aux.h2, with_check]
    if with_check:
        items.append(b_point)
    items.extend(p_items)
    return transcript.challenge(curve, _DOMAIN_B, items, curve.q)


def range_prove_respondent(
    b: int,
    y: int,
    r: int,
    c1: int,
    c2: int,
    pk: PaillierPublicKey,
    aux: AuxRsaParams,
    context: bytes,
    rng: RandomSource,
    with_check: bool = False,
    b_point: Point | None = None,
    curve: CurveConfig = SECP256K1,
) -> RangeProofB:
    """Prove ``c2 = c1^b Gamma^y r^N mod N^2`` for small ``b`` (and ``b B = b_point``)."""
    if with_check and b_point is None:
        raise ValueError("with_check requires the public point b*B")
    q = curve.q
    q3 = q**3
    n, n2, mm = pk.n, pk.n2, aux.m
    alpha = rand_below(rng, q3)
    rho, sigma, tau = (rand_below(rng, q * mm) for _ in range(3))
    rho_p = rand_below(rng, q3 * mm)
    beta = rand_unit(rng, n)
    gamma = rand_unit(rng, n)
    z = _ped(aux, b, rho)
    z_prime = _ped(aux, alpha, rho_p)
    t = _ped(aux, y, sigma)
    u = curve.base_mul(alpha) if with_check else None
    v = powmod(c1, alpha, n2) * powmod(pk.g, gamma, n2) * powmod(beta, n, n2) % n2
    w = _ped(aux, gamma, tau)
    e = _challenge_b(
        curve, context, pk, c1, c2, aux, with_check, b_point,
        [z, z_prime, t, v, w] + ([u] if with_check else []),
    )
    return RangeProofB(
        z=z,
        z_prime=z_prime,
        t=t,
        v=v,
        w=w,
        u=u,
        e=e,
        s=powmod(r, e, n) * beta % n,
        s1=e * b + alpha,
        s2=e * rho + rho_p,
        t1=e * y + gamma,
        t2=e * sigma + tau,
    )


def range_verify_respondent(
    proof: RangeProofB,
    c1: int,
    c2: int,
    pk: PaillierPublicKey,
    aux: AuxRsaParams,
    context: bytes,
    with_check: bool = False,
    b_point: Point | None = None,
    curve: CurveConfig = SECP256K1,
) -> bool:
    try:
        n, n2, mm = pk.n, pk.n2, aux.m
        p = proof
        if with_check != (p.u is not None) or (with_check and b_point is None):
            return False
        if not all(0 < x < mm for x in (p.z, p.z_prime, p.t, p.w)):
            return False
        if not (0 < p.v < n2 and 0 < p.s < n and 0 < c1 < n2 and 0 < c2 < n2):
            return False
        e = _challenge_b(
            curve, context, pk, c1, c2, aux, with_check, b_point,
            [p.z, p.z_prime, p.t, p.v, p.w] + ([p.u] if with_check else []),
        )
        if p.e != e:
            return False
        if p.s1 > curve.q**3:
            return False
        if with_check and curve.base_mul(p.s1) != e * b_point + p.u:
            return False
        if _ped(aux, p.s1, p.s2) != powmod(p.z, e, mm) * p.z_prime % mm:
            return False
        if _ped(aux, p.t1, p.t2) != p.w * powmod(p.t, e, mm) % mm:
            return False
        lhs = powmod(c1, p.s1, n2) * powmod(p.s, n, n2) * powmod(pk.g, p.t1, n2) % n2
        return lhs == powmod(c2, e, n2) * p.v % n2
    except (AttributeError, TypeError, ValueError, ZeroDivisionError):
        return False
