"""Two-party signing for any pairing.

Phases, each a method that consumes the peer's previous message and returns
the next outbound one:

1. commit to ``G_i = gamma_i B``;
2. four MtA instances turn ``k gamma`` and ``k omega`` into additive shares
   ``delta_i`` and ``sigma_i``; the ``delta_i`` are exchanged;
3. open ``G_i`` with a proof of ``gamma_i``, giving ``R = delta^{-1} (G_A + G_B)``;
4. the ``W``/``Z`` then ``U``/``T`` commit-and-open check, after which the
   ``s_i`` are released one at a time and the result is verified.

The honest party never sends ``s_i`` before the check passes, and the party
revealing second verifies the combined signature before it reveals.
"""

from __future__ import annotations

from ..algebra import Signature, ecdsa_verify
from ..errors import AbortReason, ProtocolAbort
from ..mta import mta_finalize, mta_init, mta_respond
from ..numtheory import RandomSource
from ..zkp.schnorr import linear_prove, linear_verify, schnorr_prove, schnorr_verify
from .common import commit_points, context, open_points
from .config import ProtocolConfig
from .messages import (
    Kind,
    SignCommit,
    SignDelta,
    SignMtaInit,
    SignMtaResponse,
    SignReveal,
    SignShare,
    SignUTCommit,
    SignUTOpen,
    SignWZCommit,
    SignWZOpen,
)
from .records import SigningShare
from .runtime import PartyCoroutine, Recv, Send

MAX_ATTEMPTS = 4


class Restart(Exception):
    """Degenerate ``delta``, ``r`` or ``s``: both parties start over with fresh nonces."""

    def __init__(self, reason: AbortReason):
        self.reason = reason


class SignSession:
    def __init__(
        self,
        share: SigningShare,
        message: bytes,
        session_id: bytes,
        rng: RandomSource,
        config: ProtocolConfig,
        first_revealer: int | None = None,
    ):
        if not share.consistent():
            raise ProtocolAbort(AbortReason.PEER_KEY_MISMATCH, "shares do not sum to the public key")
        self.share = share
        self.me = share.party
        self.peer = share.peer
        self.message = message
        self.sid = session_id
        self.rng = rng
        self.config = config
        self.curve = config.curve
        self.first_revealer = min(self.me, self.peer) if first_revealer is None else first_revealer
        self.attempt = 0
        self.s_i: int | None = None

    def _ctx(self, purpose: bytes, party: int) -> bytes:
        return context(self.sid, b"sign/" + purpose, party, bytes([self.attempt]))

    @property
    def _proof_aux(self):
        # (own aux, peer aux) or (None, None) when range proofs are off
        if self.config.range_proofs:
            return self.share.aux, self.share.peer_aux
        return None, None

    # phase 1

    def commit_gamma(self) -> SignCommit:
        curve = self.curve
        self.k = curve.random_scalar(self.rng)
        self.gamma = curve.random_scalar(self.rng)
        self.G = curve.base_mul(self.gamma)
        self.g_com, self.g_dec = commit_points([self.G], self._ctx(b"G", self.me), self.rng, curve)
        return SignCommit(self.g_com)

    # phase 2

    def mta_start(self, peer: SignCommit) -> SignMtaInit:
        self.peer_g_com = peer.com
        _, peer_aux = self._proof_aux
        pk = self.share.paillier_sk.public
        gamma_msg, self.mta_gamma = mta_init(
            self.k, pk, peer_aux, self._ctx(b"mta-gamma", self.me), self.rng, self.curve
        )
        omega_msg, self.mta_omega = mta_init(
            self.k, pk, peer_aux, self._ctx(b"mta-omega", self.me), self.rng, self.curve
        )
        return SignMtaInit(gamma_msg, omega_msg)

    def mta_answer(self, peer: SignMtaInit) -> SignMtaResponse:
        own_aux, peer_aux = self._proof_aux
        pk = self.share.peer_paillier
        gamma_resp, self.beta = mta_respond(
            self.gamma, peer.gamma, pk, own_aux, peer_aux,
            self._ctx(b"mta-gamma", self.peer), self.rng, curve=self.curve,
        )
        omega_resp, self.nu = mta_respond(
            self.share.omega, peer.omega, pk, own_aux, peer_aux,
            self._ctx(b"mta-omega", self.peer), self.rng,
            with_check=True, b_point=self.curve.base_mul(self.share.omega), curve=self.curve,
        )
        return SignMtaResponse(gamma_resp, omega_resp)

    def mta_finish(self, peer: SignMtaResponse) -> SignDelta:
        own_aux, _ = self._proof_aux
        q = self.curve.q
        alpha = mta_finalize(
            self.mta_gamma, peer.gamma, self.share.paillier_sk, own_aux,
            self._ctx(b"mta-gamma", self.me), curve=self.curve,
        )
        mu = mta_finalize(
            self.mta_omega, peer.omega, self.share.paillier_sk, own_aux,
            self._ctx(b"mta-omega", self.me),
            with_check=True, b_point=self.share.peer_omega_point, curve=self.curve,
        )
        self.delta_i = (self.k * self.gamma + alpha + self.beta) % q
        self.sigma_i = (self.k * self.share.omega + mu + self.nu) % q
        return SignDelta(self.delta_i)

    # phase 3

    def reveal_gamma(self, peer: SignDelta) -> SignReveal:
        self.delta = (self.delta_i + peer.delta) % self.curve.q
        if self.delta == 0:
            raise Restart(AbortReason.DELTA_ZERO)
        proof = schnorr_prove(self.gamma, self.G, self._ctx(b"gamma-proof", self.me), self.rng, self.curve)
        return SignReveal(self.g_dec, proof)

    def _s_share(self) -> int:
        return (self.e * self.k + self.r * self.sigma_i) % self.curve.q

    def commit_wz(self, peer: SignReveal) -> SignWZCommit:
        curve = self.curve
        q = curve.q
        (g_peer,) = open_points(self.peer_g_com, peer.dec, self._ctx(b"G", self.peer), 1, curve)
        if not schnorr_verify(peer.proof, g_peer, self._ctx(b"gamma-proof", self.peer), curve):
            raise ProtocolAbort(AbortReason.SCHNORR_PROOF_INVALID, "proof of gamma")
        self.R = pow(self.delta, -1, q) * (self.G + g_peer)
        if self.R.is_identity or self.R.x % q == 0:
            raise Restart(AbortReason.R_ZERO)
        self.r = self.R.x % q
        self.e = curve.hash_to_scalar(self.message)
        # phase 4
        self.s_i = self._s_share()
        self.l_i = curve.random_scalar(self.rng)
        self.rho_i = curve.random_scalar(self.rng)
        self.W_i = self.s_i * self.R + curve.base_mul(self.l_i)
        self.Z_i = curve.base_mul(self.rho_i)
        self.wz_com, self.wz_dec = commit_points(
            [self.W_i, self.Z_i], self._ctx(b"WZ", self.me), self.rng, curve
        )
        return SignWZCommit(self.wz_com)

    # phase 4

    def open_wz(self, peer: SignWZCommit) -> SignWZOpen:
        self.peer_wz_com = peer.com
        proof = linear_prove(
            self.s_i, self.l_i, self.rho_i, self.R, self.W_i, self.Z_i,
            self._ctx(b"wz-proof", self.me), self.rng, self.curve,
        )
        return SignWZOpen(self.wz_dec, proof)

    def commit_ut(self, peer: SignWZOpen) -> SignUTCommit:
        curve = self.curve
        w_peer, z_peer = open_points(self.peer_wz_com, peer.dec, self._ctx(b"WZ", self.peer), 2, curve)
        if not linear_verify(peer.proof, self.R, w_peer, z_peer, self._ctx(b"wz-proof", self.peer), curve):
            raise ProtocolAbort(AbortReason.WZ_PROOF_INVALID)
        W = (
            -curve.base_mul(self.e)
            - self.r * self.share.public_key
            + self.W_i
            + w_peer
        )
        Z = self.Z_i + z_peer
        self.U_i = self.rho_i * W
        self.T_i = self.l_i * Z
        self.ut_com, self.ut_dec = commit_points(
            [self.U_i, self.T_i], self._ctx(b"UT", self.me), self.rng, curve
        )
        return SignUTCommit(self.ut_com)

    def open_ut(self, peer: SignUTCommit) -> SignUTOpen:
        self.peer_ut_com = peer.com
        return SignUTOpen(self.ut_dec)

    def check_ut(self, peer: SignUTOpen) -> None:
        u_peer, t_peer = open_points(self.peer_ut_com, peer.dec, self._ctx(b"UT", self.peer), 2, self.curve)
        if self.T_i + t_peer != self.U_i + u_peer:
            raise ProtocolAbort(AbortReason.CHECK_MISMATCH)

    def combine(self, peer: SignShare) -> Signature:
        s = (self.s_i + peer.s) % self.curve.q
        if s == 0:
            # the check passed, so this is the honest degenerate case
            raise Restart(AbortReason.S_ZERO)
        sig = Signature(self.r, s)
        if not ecdsa_verify(self.share.public_key, self.message, sig, self.curve):
            raise ProtocolAbort(AbortReason.SIGNATURE_INVALID)
        return sig

    # driver

    def _attempt(self) -> PartyCoroutine:
        steps = [
            (Kind.SIGN_COMMIT, self.mta_start, Kind.SIGN_MTA_INIT),
            (Kind.SIGN_MTA_INIT, self.mta_answer, Kind.SIGN_MTA_RESPONSE),
            (Kind.SIGN_MTA_RESPONSE, self.mta_finish, Kind.SIGN_DELTA),
            (Kind.SIGN_DELTA, self.reveal_gamma, Kind.SIGN_REVEAL),
            (Kind.SIGN_REVEAL, self.commit_wz, Kind.SIGN_WZ_COMMIT),
            (Kind.SIGN_WZ_COMMIT, self.open_wz, Kind.SIGN_WZ_OPEN),
            (Kind.SIGN_WZ_OPEN, self.commit_ut, Kind.SIGN_UT_COMMIT),
            (Kind.SIGN_UT_COMMIT, self.open_ut, Kind.SIGN_UT_OPEN),
        ]
        yield Send(Kind.SIGN_COMMIT, self.commit_gamma())
        for inbound, step, outbound in steps:
            peer = yield Recv(inbound)
            yield Send(outbound, step(peer))
        self.check_ut((yield Recv(Kind.SIGN_UT_OPEN)))
        own = SignShare(self.s_i)
        if self.me == self.first_revealer:
            yield Send(Kind.SIGN_SHARE, own)
            return self.combine((yield Recv(Kind.SIGN_SHARE)))
        peer = yield Recv(Kind.SIGN_SHARE)
        try:
            sig = self.combine(peer)
        except Restart:
            # s = 0 means our share is minus the leader's, so sending it reveals
            # nothing new, and the leader needs it to restart too
            yield Send(Kind.SIGN_SHARE, own)
            raise
        yield Send(Kind.SIGN_SHARE, own)
        return sig

    def run(self) -> PartyCoroutine:
        while True:
            try:
                return (yield from self._attempt())
            except Restart as exc:
                self.attempt += 1
                if self.attempt >= MAX_ATTEMPTS:
                    raise ProtocolAbort(exc.reason, "repeated degenerate nonces") from None
