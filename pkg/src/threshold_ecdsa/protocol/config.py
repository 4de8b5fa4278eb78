"""Size profiles and the shared run configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import SECP256K1, CurveConfig

PAIRINGS = ((1, 2), (1, 3), (2, 3))


def normalize_pairing(pair: tuple[int, int]) -> tuple[int, int]:
    a, b = sorted(pair)
    if (a, b) not in PAIRINGS:
        raise ValueError(f"unknown pairing {pair}")
    return a, b


@dataclass(frozen=True)
class ProtocolConfig:
    curve: CurveConfig = field(default=SECP256K1)
    paillier_bits: int = 2048
    aux_bits: int = 2048
    range_proofs: bool = True
    insecure: bool = False

    def __post_init__(self) -> None:
        if self.paillier_bits < 4 * self.curve.q.bit_length():
            # MtA plaintexts reach q^3 inside the range proofs
            raise ValueError("Paillier modulus must be at least four times the curve order size")
        weak = self.paillier_bits < 2048 or self.aux_bits < 2048 or not self.range_proofs
        if weak and not self.insecure:
            raise ValueError("sizes below 2048 bits or disabled range proofs need insecure=True")


PRODUCTION = ProtocolConfig()
TEST = ProtocolConfig(paillier_bits=1024, aux_bits=1024, insecure=True)
