"""Proof of knowledge of the factorization of a Paillier modulus.

Each of ``l`` rounds commits to ``x_i = z_i^r mod N`` over ``k`` bases, receives
``e < B`` and answers ``y = r + e (N - phi(N))``; the verifier checks
``0 <= y < A`` and ``z_i^(y - N e) = x_i``.  Challenges come from hashing all
commitments, bases are hashed from the context and ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..algebra import SECP256K1, CurveConfig
from ..numtheory import RandomSource, powmod, rand_below
from ..paillier import PaillierSecretKey
from ..wire import tlv
from . import transcript

_DOMAIN = b"tecdsa/factorization/v1"
_BASES = b"tecdsa/factorization-bases/v1"


@dataclass(frozen=True)
class FactorizationParams:
    a: int
    b: int
    rounds: int
    bases: int

    @classmethod
    def for_modulus(cls, n: int, security: int = 128) -> FactorizationParams:
        b_bits = 16
        return cls(
            a=1 << (n.bit_length() - 1),
            b=1 << b_bits,
            rounds=-(-security // b_bits),
            bases=16,
        )

    def check(self, n: int) -> None:
        # N - phi(N) = p + q - 1 < 3 * 2^(bits/2 + 1) for balanced factors
        phi_gap_bound = 3 << (n.bit_length() // 2 + 1)
        if not phi_gap_bound * self.rounds * self.b < self.a < n:
            raise ValueError("factorization proof parameters violate (N-phi)lB < A < N")


@dataclass(frozen=True)
class FactorizationRound:
    x: tuple[int, ...] = tlv(1, "list", item="uint")
    e: int = tlv(2)
    y: int = tlv(3)


@dataclass(frozen=True)
class FactorizationProof:
    rounds: tuple[FactorizationRound, ...] = tlv(1, "list", item="msg", cls=FactorizationRound)


def derive_bases(n: int, count: int, context: bytes, curve: CurveConfig = SECP256K1) -> list[int]:
    bases: list[int] = []
    i = 0
    while len(bases) < count:
        z = transcript.challenge(curve, _BASES, [context, n, i], n)
        i += 1
        if z > 1 and math.gcd(z, n) == 1:
            bases.append(z)
    return bases


def factorization_commit(
    n: int, bases: list[int], a: int, rng: RandomSource
) -> tuple[int, tuple[int, ...]]:
    r = rand_below(rng, a)
    return r, tuple(powmod(z, r, n) for z in bases)


def factorization_respond(sk: PaillierSecretKey, r: int, e: int) -> int:
    n = sk.public.n
    return r + e * (n - sk.phi)


def factorization_check_round(
    n: int, bases: list[int], xs: tuple[int, ...], e: int, y: int, a: int
) -> bool:
    if not 0 <= y < a or len(xs) != len(bases):
        return False
    exp = y - n * e
    try:
        return all(0 < x < n and powmod(z, exp, n) == x for z, x in zip(bases, xs))
    except ZeroDivisionError:
        return False


def _challenges(curve, context, n, params, xs_rows) -> list[int]:
    items: list = [context, n, params.a, params.b]
    for row in xs_rows:
        items.extend(row)
    return transcript.challenges(curve, _DOMAIN, items, params.b, params.rounds)


def factorization_prove(
    sk: PaillierSecretKey,
    context: bytes,
    rng: RandomSource,
    params: FactorizationParams | None = None,
    curve: CurveConfig = SECP256K1,
) -> FactorizationProof:
    n = sk.public.n
    params = params or FactorizationParams.for_modulus(n)
    params.check(n)
    bases = derive_bases(n, params.bases, context, curve)
    while True:
        committed = [factorization_commit(n, bases, params.a, rng) for _ in range(params.rounds)]
        es = _challenges(curve, context, n, params, [xs for _, xs in committed])
        ys = [factorization_respond(sk, r, e) for (r, _), e in zip(committed, es)]
        if all(y < params.a for y in ys):
            return FactorizationProof(
                tuple(FactorizationRound(xs, e, y) for (_, xs), e, y in zip(committed, es, ys))
            )
        # y >= A leaks nothing but cannot verify; start over with fresh r


def factorization_verify(
    proof: FactorizationProof,
    n: int,
    context: bytes,
    params: FactorizationParams | None = None,
    curve: CurveConfig = SECP256K1,
) -> bool:
    try:
        params = params or FactorizationParams.for_modulus(n)
        params.check(n)
        if len(proof.rounds) != params.rounds:
            return False
        bases = derive_bases(n, params.bases, context, curve)
        es = _challenges(curve, context, n, params, [rd.x for rd in proof.rounds])
        return all(
            rd.e == e and factorization_check_round(n, bases, rd.x, rd.e, rd.y, params.a)
            for rd, e in zip(proof.rounds, es)
        )
    except (AttributeError, TypeError, ValueError):
        return False
