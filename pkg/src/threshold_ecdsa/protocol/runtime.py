"""Primitives a party coroutine yields to its driver.

Protocol sessions are generators: ``yield Send(kind, msg)`` hands a message
to the transport and ``msg = yield Recv(kind)`` blocks until the peer's
message of that kind arrives, already decoded.  The same coroutine runs under
the in-process simulator and over sockets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Generator

from ..errors import AbortReason, ProtocolAbort
from ..wire import DecodeError, decode
from .messages import KIND_SCHEMA, Kind


@dataclass(frozen=True)
class Send:
    kind: Kind
    msg: Any


@dataclass(frozen=True)
class Recv:
    kind: Kind


PartyCoroutine = Generator["Send | Recv", Any, Any]


def decode_payload(kind: int, expected: Kind, payload: bytes, curve) -> Any:
    """Decode an inbound payload or abort with the matching reason."""
    if kind != expected:
        raise ProtocolAbort(
            AbortReason.UNEXPECTED_MESSAGE, f"wanted {expected.name}, got kind {kind:#06x}"
        )
    try:
        return decode(KIND_SCHEMA[expected], payload, curve)
    except DecodeError as exc:
        raise ProtocolAbort(AbortReason.MALFORMED_MESSAGE, f"{expected.name}: {exc}") from None
