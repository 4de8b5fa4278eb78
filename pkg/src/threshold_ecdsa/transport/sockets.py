"""Running one party coroutine over TCP.

Frames are ``length (4 bytes, big-endian) | Envelope``; frames above 16 MiB
are refused.  The channel is not encrypted: deployments must supply a private
channel (the key generation shares travel point-to-point).
"""

from __future__ import annotations

import socket
import struct
import time
from typing import Any

from ..algebra import SECP256K1, CurveConfig
from ..errors import AbortReason, ProtocolAbort
from ..protocol.runtime import PartyCoroutine, Recv, Send, decode_payload
from ..wire import DecodeError, decode, encode
from .envelope import Envelope

MAX_FRAME = 16 * 1024 * 1024
DEFAULT_TIMEOUT = 30.0


class FrameError(ValueError):
    pass


def parse_address(text: str) -> tuple[str, int]:
    host, _, port = text.rpartition(":")
    return host or "127.0.0.1", int(port)


def send_frame(sock: socket.socket, data: bytes) -> None:
    if len(data) > MAX_FRAME:
        raise FrameError("frame exceeds 16 MiB")
    sock.sendall(struct.pack(">I", len(data)) + data)


def _read_exact(sock: socket.socket, n: int) -> bytes:
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            raise ConnectionError("peer closed the connection")
        buf += chunk
    return bytes(buf)


def recv_frame(sock: socket.socket) -> bytes:
    (n,) = struct.unpack(">I", _read_exact(sock, 4))
    if n > MAX_FRAME:
        raise FrameError("frame exceeds 16 MiB")
    return _read_exact(sock, n)


def socket_serve(address: tuple[str, int], timeout: float = DEFAULT_TIMEOUT) -> socket.socket:
    """Accept a single peer connection on ``address``."""
    with socket.create_server(address) as server:
        server.settimeout(timeout)
        conn, _ = server.accept()
    conn.settimeout(timeout)
    return conn


def socket_connect(address: tuple[str, int], timeout: float = DEFAULT_TIMEOUT) -> socket.socket:
    deadline = time.monotonic() + timeout
    while True:
        try:
            conn = socket.create_connection(address, timeout=timeout)
            conn.settimeout(timeout)
            return conn
        except ConnectionRefusedError:
            # the listener may not be up yet
            if time.monotonic() > deadline:
                raise
            time.sleep(0.05)


class SocketChannel:
    def __init__(
        self,
        sock: socket.socket,
        me: int,
        peer: int,
        session_id: bytes,
        curve: CurveConfig = SECP256K1,
    ):
        self.sock = sock
        self.me = me
        self.peer = peer
        self.session_id = session_id
        self.curve = curve
        self._held: list[Envelope] = []

    def send(self, op: Send) -> None:
        env = Envelope(
            self.session_id, self.me, self.peer, op.kind.round, int(op.kind), encode(op.msg, self.curve)
        )
        try:
            send_frame(self.sock, encode(env))
        except OSError as exc:
            raise ProtocolAbort(AbortReason.DISCONNECTED, str(exc)) from None

    def receive(self, op: Recv) -> Any:
        for i, env in enumerate(self._held):
            if env.kind == op.kind:
                del self._held[i]
                return decode_payload(env.kind, op.kind, env.payload, self.curve)
        while True:
            try:
                frame = recv_frame(self.sock)
            except socket.timeout:
                raise ProtocolAbort(AbortReason.TIMEOUT, f"waiting for {op.kind.name}") from None
            except FrameError as exc:
                raise ProtocolAbort(AbortReason.MALFORMED_MESSAGE, str(exc)) from None
            except OSError as exc:
                raise ProtocolAbort(AbortReason.DISCONNECTED, str(exc)) from None
            try:
                env = decode(Envelope, frame)
            except DecodeError as exc:
                raise ProtocolAbort(AbortReason.MALFORMED_MESSAGE, f"envelope: {exc}") from None
            if env.session_id != self.session_id or env.sender != self.peer:
                raise ProtocolAbort(AbortReason.UNEXPECTED_MESSAGE, "foreign session or sender")
            if env.kind == op.kind:
                return decode_payload(env.kind, op.kind, env.payload, self.curve)
            self._held.append(env)

    def close(self) -> None:
        try:
            self.sock.close()
        except OSError:
            pass


def run_over_socket(coro: PartyCoroutine, channel: SocketChannel) -> Any:
    """Drive ``coro`` to completion; the channel is closed on abort."""
    value = None
    try:
        while True:
            try:
                op = coro.send(value)
            except StopIteration as stop:
                return stop.value
            value = None
            if isinstance(op, Send):
                channel.send(op)
            else:
                value = channel.receive(op)
    except ProtocolAbort:
        coro.close()
        channel.close()
        raise
