"""Randomness and prime-generation helpers shared by the Paillier and proof code.

Every routine takes an explicit ``rng`` (anything with ``getrandbits``), so a
seeded :class:`random.Random` gives reproducible keys and transcripts in tests
while production callers pass :func:`system_rng`.
"""

from __future__ import annotations

import math
import random
import secrets
from functools import lru_cache
from typing import Protocol

import gmpy2


class RandomSource(Protocol):
    def getrandbits(self, k: int) -> int: ...


def system_rng() -> RandomSource:
    return secrets.SystemRandom()


def seeded_rng(seed: int | bytes | str) -> random.Random:
    """Deterministic source for tests and reproducible simulator runs. Insecure."""
    return random.Random(seed)


def rand_below(rng: RandomSource, n: int) -> int:
    """Uniform integer in ``[0, n)`` by rejection sampling on ``getrandbits``."""
    if n <= 0:
        raise ValueError("upper bound must be positive")
    k = n.bit_length()
    while True:
        v = rng.getrandbits(k)
        if v < n:
            return v


def rand_range(rng: RandomSource, lo: int, hi: int) -> int:
    return lo + rand_below(rng, hi - lo)


def rand_unit(rng: RandomSource, n: int) -> int:
    """Uniform element of the multiplicative group modulo ``n``."""
    while True:
        v = rand_range(rng, 1, n)
        if math.gcd(v, n) == 1:
            return v


def rand_bytes(rng: RandomSource, n: int) -> bytes:
    return rng.getrandbits(8 * n).to_bytes(n, "big")


def is_probable_prime(n: int) -> bool:
    return n > 1 and bool(gmpy2.is_prime(n, 40))


@lru_cache(maxsize=1)
def _small_primes(limit: int = 1 << 15) -> tuple[int, ...]:
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, limit, i)))
    return tuple(i for i in range(3, limit) if sieve[i])


def _top_bits_candidate(rng: RandomSource, bits: int) -> int:
    # top two bits set so that a product of two such primes has exactly 2*bits bits
    return rng.getrandbits(bits) | (3 << (bits - 2)) | 1


def random_prime(bits: int, rng: RandomSource) -> int:
    if bits < 16:
        raise ValueError("prime size too small")
    while True:
        p = int(gmpy2.next_prime(_top_bits_candidate(rng, bits)))
        if p.bit_length() == bits and is_probable_prime(p):
            return p


_WINDOW = 1 << 14


def random_safe_prime(bits: int, rng: RandomSource) -> int:
    """Return ``p = 2p' + 1`` with both ``p`` and ``p'`` prime and ``p`` of ``bits`` bits.

    Candidates for ``p'`` are taken from a window of consecutive odd numbers
    sieved against small primes for both ``p'`` and ``2p' + 1``.
    """
    if bits < 16:
        raise ValueError("prime size too small")
    small = _small_primes()
    while True:
        base = _top_bits_candidate(rng, bits - 1)
        alive = bytearray([1]) * _WINDOW
        for s in small:
            if s >= base:
                break
            r = base % s
            half = (s + 1) // 2  # inverse of 2 mod s
            # base + 2i == 0 (mod s)  and  2(base + 2i) + 1 == 0 (mod s)
            for target in (0, (s - 1) // 2):
                start = ((target - r) * half) % s
                alive[start::s] = bytes(len(range(start, _WINDOW, s)))
        for i in range(_WINDOW):
            if not alive[i]:
                continue
            q = base + 2 * i
            p = 2 * q + 1
            if p.bit_length() != bits:
                break
            if gmpy2.powmod(2, p - 1, p) != 1:
                continue
            if gmpy2.is_prime(q, 40) and gmpy2.is_prime(p, 40):
                return p


def invert(a: int, n: int) -> int:
    """Modular inverse; raises ``ZeroDivisionError`` when ``a`` is not a unit."""
    return pow(a, -1, n)


def powmod(base: int, exp: int, mod: int) -> int:
    return int(gmpy2.powmod(base, exp, mod))


def lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b
