"""Machine-readable abort reasons shared by every protocol layer."""

from __future__ import annotations

import enum


class AbortReason(enum.Enum):
    MALFORMED_MESSAGE = "malformed-message"
    UNEXPECTED_MESSAGE = "unexpected-message"
    DECOMMITMENT_INVALID = "decommitment-invalid"
    VSS_SHARE_INVALID = "vss-share-invalid"
    SCHNORR_PROOF_INVALID = "schnorr-proof-invalid"
    FACTORIZATION_PROOF_INVALID = "factorization-proof-invalid"
    PAILLIER_KEY_INVALID = "paillier-key-invalid"
    AUX_PARAMS_INVALID = "aux-params-invalid"
    RANGE_PROOF_INITIATOR_INVALID = "range-proof-initiator-invalid"
    RANGE_PROOF_RESPONDENT_INVALID = "range-proof-respondent-invalid"
    DELTA_ZERO = "delta-zero"
    R_ZERO = "r-zero"
    S_ZERO = "s-zero"
    PEER_KEY_MISMATCH = "peer-key-mismatch"
    WZ_PROOF_INVALID = "wz-proof-invalid"
    CHECK_MISMATCH = "check-mismatch"
    SIGNATURE_INVALID = "signature-invalid"
    RECOVERY_DECRYPT_FAILED = "recovery-decrypt-failed"
    RECOVERY_SHARE_MISMATCH = "recovery-share-mismatch"
    PUBLIC_KEY_MISMATCH = "public-key-mismatch"
    TIMEOUT = "timeout"
    DISCONNECTED = "disconnected"


class ProtocolAbort(Exception):
    """Terminal failure of a protocol session; ``reason`` names the failed check."""

    def __init__(self, reason: AbortReason, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason.value}: {detail}" if detail else reason.value)
