"""Deterministic in-process router with tamper hooks.

Parties are protocol coroutines.  The loop steps them in ascending id order;
a party runs until it waits for a message that has not arrived.  Each
``Recv(kind)`` takes the oldest queued envelope of that kind, so a dropped
message leaves the receiver waiting, which the loop reports as a timeout once
no party can make progress.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable

from ..algebra import SECP256K1, CurveConfig
from ..errors import AbortReason, ProtocolAbort
from ..protocol.runtime import PartyCoroutine, Recv, Send, decode_payload
from ..wire import encode
from .envelope import BROADCAST, Envelope


@dataclass
class TamperRule:
    """Rewrite the ``occurrence``-th envelope matching sender/kind/round.

    ``action`` is ``drop``, ``replace`` (payload becomes ``payload``) or
    ``flip`` (XOR ``mask`` into payload byte ``offset``).
    """

    action: str
    sender: int | None = None
    kind: int | None = None
    round: int | None = None
    payload: bytes | None = None
    offset: int = 0
    mask: int = 0x01
    occurrence: int = 0
    seen: int = field(default=0, init=False)
    fired: bool = field(default=False, init=False)

    def matches(self, env: Envelope) -> bool:
        return (
            (self.sender is None or env.sender == self.sender)
            and (self.kind is None or env.kind == self.kind)
            and (self.round is None or env.round == self.round)
        )

    def apply(self, env: Envelope) -> Envelope | None:
        if self.action == "drop":
            return None
        if self.action == "replace":
            return replace(env, payload=self.payload)
        if self.action == "flip":
            data = bytearray(env.payload)
            data[self.offset] ^= self.mask
            return replace(env, payload=bytes(data))
        raise ValueError(f"unknown tamper action {self.action!r}")


class SessionRouter:
    def __init__(self, session_id: bytes, rules: list[TamperRule] | None = None):
        self.session_id = session_id
        self.rules = list(rules or [])
        self.parties: list[int] = []
        self.queues: dict[int, deque[Envelope]] = {}
        self.transcript: list[Envelope] = []
        self._lock = threading.Lock()

    def register(self, party: int) -> None:
        with self._lock:
            self.parties.append(party)
            self.queues[party] = deque()

    def _tamper(self, env: Envelope) -> Envelope | None:
        for rule in self.rules:
            if rule.fired or not rule.matches(env):
                continue
            if rule.seen == rule.occurrence:
                rule.fired = True
                return rule.apply(env)
            rule.seen += 1
        return env

    def route(self, env: Envelope) -> list[Envelope]:
        """Deliver ``env`` (after tamper rules); returns the delivered copies."""
        with self._lock:
            if env.session_id != self.session_id:
                raise ValueError("envelope for another session")
            if env.sender not in self.queues:
                raise ValueError(f"unknown sender {env.sender}")
            if env.recipient == BROADCAST:
                targets = [p for p in self.parties if p != env.sender]
            elif env.recipient in self.queues:
                targets = [env.recipient]
            else:
                raise ValueError(f"unknown recipient {env.recipient}")
            env = self._tamper(env)
            if env is None:
                return []
            delivered = []
            for t in targets:
                copy = replace(env, recipient=t)
                self.queues[t].append(copy)
                self.transcript.append(copy)
                delivered.append(copy)
            return delivered

    def take(self, party: int, kind: int) -> Envelope | None:
        with self._lock:
            q = self.queues[party]
            for i, env in enumerate(q):
                if env.kind == kind:
                    del q[i]
                    return env
            return None


@dataclass
class SessionOutcome:
    results: dict[int, object]
    aborts: dict[int, ProtocolAbort]
    transcript: list[Envelope]
    abort_order: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.aborts

    @property
    def reason(self) -> AbortReason | None:
        """First abort that is not a mere consequence of waiting on an aborted peer."""
        for p in self.abort_order:
            if self.aborts[p].reason != AbortReason.TIMEOUT:
                return self.aborts[p].reason
        return self.aborts[self.abort_order[0]].reason if self.abort_order else None


@dataclass
class _Party:
    pid: int
    coro: PartyCoroutine
    waiting: Recv | None = None
    pending: object = None
    done: bool = False


def run_session(
    parties: dict[int, PartyCoroutine],
    session_id: bytes,
    rules: list[TamperRule] | None = None,
    curve: CurveConfig = SECP256K1,
    observer: Callable[[Envelope], None] | None = None,
) -> SessionOutcome:
    router = SessionRouter(session_id, rules)
    state = {}
    for pid in sorted(parties):
        router.register(pid)
        state[pid] = _Party(pid, parties[pid])
    results: dict[int, object] = {}
    aborts: dict[int, ProtocolAbort] = {}
    order: list[int] = []

    def fail(p: _Party, exc: ProtocolAbort) -> None:
        p.done = True
        p.coro.close()
        aborts[p.pid] = exc
        order.append(p.pid)

    def step(p: _Party) -> bool:
        progressed = False
        while not p.done:
            if p.waiting is not None:
                env = router.take(p.pid, p.waiting.kind)
                if env is None:
                    return progressed
                try:
                    value = decode_payload(env.kind, p.waiting.kind, env.payload, curve)
                except ProtocolAbort as exc:
                    fail(p, exc)
                    return True
                p.waiting = None
                p.pending = value
            try:
                op = p.coro.send(p.pending)
            except StopIteration as stop:
                p.done = True
                results[p.pid] = stop.value
                return True
            except ProtocolAbort as exc:
                fail(p, exc)
                return True
            progressed = True
            p.pending = None
            if isinstance(op, Send):
                env = Envelope(
                    session_id, p.pid, BROADCAST, op.kind.round, int(op.kind), encode(op.msg, curve)
                )
                for delivered in router.route(env):
                    if observer:
                        observer(delivered)
            elif isinstance(op, Recv):
                p.waiting = op
            else:
                raise TypeError(f"party {p.pid} yielded {op!r}")
        return progressed

    while True:
        progressed = False
        for pid in sorted(state):
            progressed |= step(state[pid])
        if all(p.done for p in state.values()):
            break
        if not progressed:
            for p in state.values():
                if not p.done:
                    fail(p, ProtocolAbort(AbortReason.TIMEOUT, f"waiting for {p.waiting.kind.name}"))
            break
    return SessionOutcome(results, aborts, router.transcript, order)
