"""Fiat-Shamir challenge derivation.

Every item is framed with a 4-byte length so distinct item lists never hash to
the same input.  Challenges wider than the hash output are produced by
counter-mode expansion of the seed, with 128 extra bits before reduction to
keep the modular bias negligible.
"""

from __future__ import annotations

import struct
from typing import Iterable, Union

from ..algebra import CurveConfig, Point

Item = Union[bytes, int, Point, str]


def _frame(item: Item) -> bytes:
    if isinstance(item, Point):
        b = item.encode()
    elif isinstance(item, bool):
        b = bytes([int(item)])
    elif isinstance(item, int):
        if item < 0:
            b = b"-" + (-item).to_bytes(((-item).bit_length() + 7) // 8 or 1, "big")
        else:
            b = item.to_bytes((item.bit_length() + 7) // 8 or 1, "big")
    elif isinstance(item, str):
        b = item.encode()
    else:
        b = bytes(item)
    return struct.pack(">I", len(b)) + b


def seed(curve: CurveConfig, domain: bytes, items: Iterable[Item]) -> bytes:
    return curve.hash(_frame(domain) + b"".join(_frame(i) for i in items))


def expand(curve: CurveConfig, seed_bytes: bytes, nbits: int) -> int:
    out = bytearray()
    ctr = 0
    while len(out) * 8 < nbits:
        out += curve.hash(seed_bytes + struct.pack(">I", ctr))
        ctr += 1
    return int.from_bytes(out, "big") >> (len(out) * 8 - nbits)


def challenge(curve: CurveConfig, domain: bytes, items: Iterable[Item], modulus: int) -> int:
    """Hash ``items`` under ``domain`` to an integer in ``[0, modulus)``."""
    s = seed(curve, domain, items)
    return expand(curve, s, modulus.bit_length() + 128) % modulus


def challenges(
    curve: CurveConfig, domain: bytes, items: Iterable[Item], modulus: int, count: int
) -> list[int]:
    s = seed(curve, domain, items)
    return [
        expand(curve, s + struct.pack(">I", i), modulus.bit_length() + 128) % modulus
        for i in range(count)
    ]
