"""The routed unit: a TLV envelope around one encoded protocol message."""

from __future__ import annotations

from dataclasses import dataclass

from ..wire import tlv

BROADCAST = 0
SESSION_ID_BYTES = 16


@dataclass(frozen=True)
class Envelope:
    session_id: bytes = tlv(1, "bytes", size=SESSION_ID_BYTES)
    sender: int = tlv(2, "u8")
    recipient: int = tlv(3, "u8")
    round: int = tlv(4, "u8")
    kind: int = tlv(5, "u16")
    payload: bytes = tlv(6, "bytes")
