"""Paillier cryptosystem with the two homomorphic operators used by MtA.

The generator defaults to ``N + 1``; a uniformly random generator can be
requested and is accepted once ``mu`` exists, i.e. once ``N`` divides its
order.  Decryption is the textbook ``L(c^lambda mod N^2) * mu mod N`` without
CRT acceleration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .numtheory import (
    RandomSource,
    lcm,
    powmod,
    rand_unit,
    random_prime,
)
from .wire import tlv

DEFAULT_BITS = 2048
MIN_SECURE_BITS = 1024


class PaillierError(ValueError):
    pass


@dataclass(frozen=True)
class PaillierPublicKey:
    n: int = tlv(1)
    g: int = tlv(2)

    @property
    def n2(self) -> int:
        return self.n * self.n

    def validate(self, min_bits: int = 0) -> None:
        if self.n.bit_length() < min_bits:
            raise PaillierError(f"modulus shorter than {min_bits} bits")
        if self.n < 3 or self.n % 2 == 0:
            raise PaillierError("modulus must be odd")
        if not 0 < self.g < self.n2 or math.gcd(self.g, self.n) != 1:
            raise PaillierError("generator is not a unit mod N^2")


@dataclass(frozen=True)
class PaillierSecretKey:
    public: PaillierPublicKey
    p: int
    q: int

    @property
    def phi(self) -> int:
        return (self.p - 1) * (self.q - 1)

    @cached_property
    def lam(self) -> int:
        return lcm(self.p - 1, self.q - 1)

    @cached_property
    def mu(self) -> int:
        return _mu(self.public, self.lam)


def _L(x: int, n: int) -> int:
    if (x - 1) % n:
        raise PaillierError("L() input is not 1 mod N")
    return (x - 1) // n


def _mu(pk: PaillierPublicKey, lam: int) -> int:
    try:
        return pow(_L(powmod(pk.g, lam, pk.n2), pk.n), -1, pk.n)
    except (ValueError, PaillierError):
        raise PaillierError("N does not divide the order of the generator") from None


def keypair_from_primes(
    p: int, q: int, g: int | None = None
) -> tuple[PaillierPublicKey, PaillierSecretKey]:
    """Build a key pair from known primes; used for tests and keystore loading."""
    n = p * q
    if p == q or math.gcd(n, (p - 1) * (q - 1)) != 1:
        raise PaillierError("gcd(pq, (p-1)(q-1)) must be 1")
    pk = PaillierPublicKey(n, n + 1 if g is None else g)
    sk = PaillierSecretKey(pk, p, q)
    sk.mu  # raises if the generator is unusable
    return pk, sk


def keygen(
    bits: int,
    rng: RandomSource,
    *,
    random_generator: bool = False,
    allow_insecure: bool = False,
) -> tuple[PaillierPublicKey, PaillierSecretKey]:
    if bits < MIN_SECURE_BITS and not allow_insecure:
        raise PaillierError(f"{bits}-bit modulus is insecure; pass allow_insecure=True")
    if bits % 2:
        raise PaillierError("modulus size must be even")
    while True:
        p = random_prime(bits // 2, rng)
        q = random_prime(bits // 2, rng)
        n = p * q
        if p == q or math.gcd(n, (p - 1) * (q - 1)) != 1:
            continue
        if not random_generator:
            return keypair_from_primes(p, q)
        lam = lcm(p - 1, q - 1)
        while True:
            g = rand_unit(rng, n * n)
            try:
                _mu(PaillierPublicKey(n, g), lam)
            except PaillierError:
                continue
            return keypair_from_primes(p, q, g)


def encrypt(
    pk: PaillierPublicKey, m: int, r: int | None = None, rng: RandomSource | None = None
) -> int:
    """``Gamma^m * r^N mod N^2``; ``r`` is drawn from ``rng`` when omitted."""
    if not 0 <= m < pk.n:
        raise PaillierError("plaintext out of range [0, N)")
    if r is None:
        if rng is None:
            raise PaillierError("need either r or rng")
        r = rand_unit(rng, pk.n)
    elif not 0 < r < pk.n or math.gcd(r, pk.n) != 1:
        raise PaillierError("randomness must be a unit mod N")
    n2 = pk.n2
    if pk.g == pk.n + 1:
        gm = (1 + m * pk.n) % n2
    else:
        gm = powmod(pk.g, m, n2)
    return gm * powmod(r, pk.n, n2) % n2


def decrypt(sk: PaillierSecretKey, c: int) -> int:
    pk = sk.public
    if not 0 < c < pk.n2 or math.gcd(c, pk.n) != 1:
        raise PaillierError("ciphertext is not a unit mod N^2")
    return _L(powmod(c, sk.lam, pk.n2), pk.n) * sk.mu % pk.n


def add_ciphertexts(pk: PaillierPublicKey, c1: int, c2: int) -> int:
    """Homomorphic sum; both inputs must be under ``pk`` (not detectable here)."""
    return c1 * c2 % pk.n2


def scalar_mul_ciphertext(pk: PaillierPublicKey, a: int, c: int) -> int:
    if not 0 <= a < pk.n:
        raise PaillierError("multiplier out of range [0, N)")
    return powmod(c, a, pk.n2)
