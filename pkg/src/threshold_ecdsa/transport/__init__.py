"""Message routing: the in-process simulator and the TCP runner."""

from .envelope import BROADCAST, Envelope
from .simulator import SessionOutcome, SessionRouter, TamperRule, run_session
from .sockets import (
    MAX_FRAME,
    SocketChannel,
    recv_frame,
    run_over_socket,
    send_frame,
    socket_connect,
    socket_serve,
)

__all__ = [
    "BROADCAST",
    "MAX_FRAME",
    "Envelope",
    "SessionOutcome",
    "SessionRouter",
    "SocketChannel",
    "TamperRule",
    "recv_frame",
    "run_over_socket",
    "run_session",
    "send_frame",
    "socket_connect",
    "socket_serve",
]
