"""Curve group, scalar field, hashing, Lagrange weights and centralized ECDSA.

Scalars are plain ``int`` values reduced modulo the group order ``q``.  Points
wrap :mod:`ecdsa`'s Jacobian arithmetic behind :class:`Point`, which adds an
explicit identity and fixed-width SEC1 encodings.

The signing convention used throughout the package is the one the threshold
protocol produces: ``R = k^{-1} B`` and ``s = k (e + r d)``.  This is ordinary
ECDSA with nonce ``k' = k^{-1}``, so any standard verifier accepts the output.
"""

from __future__ import annotations

import hashlib
import operator
from dataclasses import dataclass
from typing import ClassVar

import ecdsa
from cryptography.hazmat.primitives.asymmetric.utils import (
    decode_dss_signature,
    encode_dss_signature,
)
from ecdsa.ellipticcurve import PointJacobi

from .numtheory import RandomSource, rand_range

#: Evaluation points of the degree-1 sharing polynomial per party.
EVALUATION_POINTS = {1: 2, 2: 3, 3: 1}


class CurveConfig:
    """A prime-order curve together with the hash used for ``H``."""

    _curves: ClassVar[dict[str, ecdsa.curves.Curve]] = {
        "secp256k1": ecdsa.SECP256k1,
        "P-256": ecdsa.NIST256p,
    }

    def __init__(self, name: str = "secp256k1", hash_name: str = "sha256"):
        try:
            self._ec = self._curves[name]
        except KeyError:
            raise ValueError(f"unsupported curve {name!r}") from None
        hashlib.new(hash_name)  # fail early on unknown hash
        self.name = name
        self.hash_name = hash_name
        self.q: int = int(self._ec.order)
        self.p: int = int(self._ec.curve.p())
        self.scalar_bytes: int = self._ec.baselen
        self.point_bytes: int = self.scalar_bytes + 1
        self.generator = Point(self, self._ec.generator)
        self.identity = Point(self, None)

    def __repr__(self) -> str:
        return f"CurveConfig({self.name!r}, {self.hash_name!r})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CurveConfig)
            and (self.name, self.hash_name) == (other.name, other.hash_name)
        )

    def __hash__(self) -> int:
        return hash((self.name, self.hash_name))

    def __reduce__(self):
        return (CurveConfig, (self.name, self.hash_name))

    # hashing

    def hash(self, data: bytes) -> bytes:
        return hashlib.new(self.hash_name, data).digest()

    def hash_to_scalar(self, data: bytes) -> int:
        return int.from_bytes(self.hash(data), "big") % self.q

    # scalars

    def random_scalar(self, rng: RandomSource) -> int:
        """Uniform scalar in ``[1, q)``."""
        return rand_range(rng, 1, self.q)

    def encode_scalar(self, x: int) -> bytes:
        if not 0 <= x < self.q:
            raise ValueError("scalar out of range")
        return x.to_bytes(self.scalar_bytes, "big")

    def decode_scalar(self, data: bytes) -> int:
        if len(data) != self.scalar_bytes:
            raise ValueError("bad scalar length")
        x = int.from_bytes(data, "big")
        if x >= self.q:
            raise ValueError("scalar not reduced")
        return x

    # points

    def base_mul(self, k: int) -> Point:
        return k * self.generator

    def decode_point(self, data: bytes) -> Point:
        if len(data) != self.point_bytes:
            raise ValueError("bad point length")
        if data == bytes(self.point_bytes):
            return self.identity
        if data[0] not in (2, 3):
            raise ValueError("point must be SEC1 compressed")
        if int.from_bytes(data[1:], "big") >= self.p:
            raise ValueError("x-coordinate not reduced")
        try:
            jac = PointJacobi.from_bytes(
                self._ec.curve, data, valid_encodings=("compressed",), order=self.q
            )
        except (ecdsa.errors.MalformedPointError, AssertionError) as exc:
            raise ValueError(f"invalid point: {exc}") from None
        return Point(self, jac)


class Point:
    """Curve point or identity; immutable, supports ``+``, ``-`` and ``int * P``."""

    __slots__ = ("curve", "_jac", "_affine")

    def __init__(self, curve: CurveConfig, jac):
        self.curve = curve
        self._jac = jac
        self._affine: tuple[int, int] | None = None

    @property
    def is_identity(self) -> bool:
        return self._jac is None

    def _wrap(self, jac) -> Point:
        if jac is None or jac == ecdsa.ellipticcurve.INFINITY:
            return self.curve.identity
        return Point(self.curve, jac)

    def affine(self) -> tuple[int, int]:
        if self._jac is None:
            raise ValueError("identity has no affine coordinates")
        if self._affine is None:
            self._affine = (int(self._jac.x()), int(self._jac.y()))
        return self._affine

    @property
    def x(self) -> int:
        return self.affine()[0]

    def __add__(self, other: Point) -> Point:
        if not isinstance(other, Point):
            return NotImplemented
        if self._jac is None:
            return other
        if other._jac is None:
            return self
        return self._wrap(self._jac + other._jac)

    def __neg__(self) -> Point:
        if self._jac is None:
            return self
        return Point(self.curve, -self._jac)

    def __sub__(self, other: Point) -> Point:
        return self + (-other)

    def __rmul__(self, k: int) -> Point:
        try:
            k = operator.index(k) % self.curve.q
        except TypeError:
            return NotImplemented
        if k == 0 or self._jac is None:
            return self.curve.identity
        return self._wrap(self._jac * k)

    __mul__ = __rmul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Point):
            return NotImplemented
        if self._jac is None or other._jac is None:
            return self._jac is None and other._jac is None
        return self.affine() == other.affine()

    def __hash__(self) -> int:
        return hash(self.encode())

    def encode(self) -> bytes:
        """33-byte compressed SEC1; the identity is 33 zero bytes."""
        if self._jac is None:
            return bytes(self.curve.point_bytes)
        x, y = self.affine()
        return bytes([2 | (y & 1)]) + x.to_bytes(self.curve.scalar_bytes, "big")

    def __repr__(self) -> str:
        return "Point(identity)" if self._jac is None else f"Point({self.encode().hex()})"

    def __reduce__(self):
        return (_decode_point, (self.curve, self.encode()))


def _decode_point(curve: CurveConfig, data: bytes) -> Point:
    return curve.decode_point(data)


SECP256K1 = CurveConfig("secp256k1")


def hash_to_scalar(data: bytes, curve: CurveConfig = SECP256K1) -> int:
    return curve.hash_to_scalar(data)


def lagrange_weight(pair: tuple[int, int], which: int, q: int = SECP256K1.q) -> int:
    """Weight at zero of ``pair[which]`` for interpolation through the two points."""
    a, b = pair
    if a % q == b % q:
        raise ValueError("evaluation points must be distinct")
    mine, other = (a, b) if which == 0 else (b, a)
    return other * pow(other - mine, -1, q) % q


@dataclass(frozen=True)
class Signature:
    r: int
    s: int

    def to_bytes(self, size: int = 32) -> bytes:
        return self.r.to_bytes(size, "big") + self.s.to_bytes(size, "big")

    @classmethod
    def from_bytes(cls, data: bytes) -> Signature:
        if len(data) % 2:
            raise ValueError("raw signature must have even length")
        half = len(data) // 2
        return cls(int.from_bytes(data[:half], "big"), int.from_bytes(data[half:], "big"))

    def to_der(self) -> bytes:
        return encode_dss_signature(self.r, self.s)

    @classmethod
    def from_der(cls, data: bytes) -> Signature:
        return cls(*decode_dss_signature(data))

    def normalized(self, q: int = SECP256K1.q) -> Signature:
        """Low-s form; both forms verify, some chains only accept this one."""
        return self if self.s <= q // 2 else Signature(self.r, q - self.s)


class SigningError(ValueError):
    """The supplied nonce yields ``r = 0`` or ``s = 0``; pick a fresh one."""


def ecdsa_sign(d: int, msg: bytes, k: int, curve: CurveConfig = SECP256K1) -> Signature:
    q = curve.q
    if not (0 < d < q and 0 < k < q):
        raise ValueError("key and nonce must lie in [1, q-1]")
    e = curve.hash_to_scalar(msg)
    r = curve.base_mul(pow(k, -1, q)).x % q
    s = k * (e + r * d) % q
    if r == 0 or s == 0:
        raise SigningError("degenerate signature for this nonce")
    return Signature(r, s)


def ecdsa_verify(
    public_key: Point, msg: bytes, sig: Signature, curve: CurveConfig = SECP256K1
) -> bool:
    q = curve.q
    try:
        r, s = int(sig.r), int(sig.s)
    except (AttributeError, TypeError, ValueError):
        return False
    if not (0 < r < q and 0 < s < q) or public_key.is_identity:
        return False
    e = curve.hash_to_scalar(msg)
    w = pow(s, -1, q)
    u = curve.base_mul(e * w) + (r * w) * public_key
    if u.is_identity:
        return False
    return u.x % q == r
