"""Commitments and Fiat-Shamir sigma protocols."""

from .commitment import Commitment, Decommitment, commit, verify_commitment
from .factorization import (
    FactorizationParams,
    FactorizationProof,
    FactorizationRound,
    factorization_prove,
    factorization_verify,
)
from .range_proofs import (
    AuxRsaParams,
    RangeProofA,
    RangeProofB,
    generate_aux_params,
    range_prove_initiator,
    range_prove_respondent,
    range_verify_initiator,
    range_verify_respondent,
)
from .schnorr import (
    LinearProof,
    SchnorrProof,
    linear_prove,
    linear_verify,
    schnorr_prove,
    schnorr_verify,
)

__all__ = [
    "AuxRsaParams",
    "Commitment",
    "Decommitment",
    "FactorizationParams",
    "FactorizationProof",
    "FactorizationRound",
    "LinearProof",
    "RangeProofA",
    "RangeProofB",
    "SchnorrProof",
    "commit",
    "factorization_prove",
    "factorization_verify",
    "generate_aux_params",
    "linear_prove",
    "linear_verify",
    "range_prove_initiator",
    "range_prove_respondent",
    "range_verify_initiator",
    "range_verify_respondent",
    "schnorr_prove",
    "schnorr_verify",
    "verify_commitment",
]
