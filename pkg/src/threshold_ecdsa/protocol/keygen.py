"""Two-party key generation with P3 as a virtual third dealer.

Each of P1 and P2 picks ``u_i`` (its contribution to the secret key) and
``sigma_{3,i}`` (the share P3's polynomial would have given it).  Round one
commits to ``u_i B`` and ``sigma_{3,i} B`` and publishes Paillier and auxiliary
RSA keys; round two opens the commitments, deals ``f_i(X) = u_i + m_i X`` and
seals P3's material; round three proves knowledge of the resulting point
share and of the Paillier factorization.  P2 speaks first in round one.
"""

from __future__ import annotations

from ..algebra import EVALUATION_POINTS, Point
from ..errors import AbortReason, ProtocolAbort
from ..numtheory import RandomSource
from ..paillier import keygen as paillier_keygen
from ..vss import VssShare, deal, verify_share
from ..wire import encode
from ..zkp.range_proofs import generate_aux_params
from ..zkp.schnorr import schnorr_prove, schnorr_verify
from . import recovery_box
from .common import (
    check_peer_factorization,
    check_peer_keys,
    commit_points,
    context,
    open_points,
    prove_own_keys,
)
from .config import ProtocolConfig
from .derivation import common_secret_bytes
from .messages import Kind, KeygenCommit, KeygenDeal, KeygenProve
from .records import KeySecrets, KeyShareRecord, PublicShares
from .runtime import PartyCoroutine, Recv, Send


class KeygenSession:
    def __init__(
        self,
        role: int,
        recovery_key: Point,
        session_id: bytes,
        rng: RandomSource,
        config: ProtocolConfig,
    ):
        if role not in (1, 2):
            raise ValueError("key generation runs between P1 and P2")
        self.role = role
        self.peer = 3 - role
        self.recovery_key = recovery_key
        self.sid = session_id
        self.rng = rng
        self.config = config
        self.curve = config.curve

    def _ctx(self, purpose: bytes, party: int, *extra: bytes) -> bytes:
        return context(self.sid, b"keygen/" + purpose, party, *extra)

    # round 1

    def commit(self) -> KeygenCommit:
        curve, rng = self.curve, self.rng
        self.u = curve.random_scalar(rng)
        self.sigma3 = curve.random_scalar(rng)
        self.paillier, self.paillier_sk = paillier_keygen(
            self.config.paillier_bits, rng, allow_insecure=self.config.insecure
        )
        self.aux = generate_aux_params(self.config.aux_bits, rng)
        self.kgc, self.kgd = commit_points(
            [curve.base_mul(self.u)], self._ctx(b"u", self.role), rng, curve
        )
        self.kgcs, self.kgds = commit_points(
            [curve.base_mul(self.sigma3)], self._ctx(b"sigma3", self.role), rng, curve
        )
        return KeygenCommit(self.kgc, self.kgcs, self.paillier, self.aux)

    # round 2

    def deal(self, peer: KeygenCommit) -> KeygenDeal:
        check_peer_keys(peer.paillier, peer.aux, self.config)
        self.peer_commit = peer
        dealing, _ = deal(self.u, self.rng, self.curve)
        self.dealing = dealing
        self.rec = recovery_box.seal_shares(
            self.recovery_key,
            dealing.share_for(3).value,
            self.sigma3,
            self.role,
            self.rng,
        )
        self.sent_deal = KeygenDeal(
            self.kgd, self.kgds, dealing.c1, dealing.share_for(self.peer).value, self.rec
        )
        return self.sent_deal

    # round 3

    def _proof_context(self, party: int, msg: KeygenDeal) -> bytes:
        # binds the dealing as sent, so in-transit tampering breaks the proof
        return self._ctx(b"x", party, encode(msg, self.curve))

    def prove(self, peer: KeygenDeal) -> KeygenProve:
        curve = self.curve
        (u_peer,) = open_points(
            self.peer_commit.kgc, peer.kgd, self._ctx(b"u", self.peer), 1, curve
        )
        (s3_peer,) = open_points(
            self.peer_commit.kgcs, peer.kgds, self._ctx(b"sigma3", self.peer), 1, curve
        )
        mine = EVALUATION_POINTS[self.role]
        if not verify_share(VssShare(mine, peer.share), u_peer, peer.slope_point):
            raise ProtocolAbort(AbortReason.VSS_SHARE_INVALID)
        self.peer_deal = peer
        own = (self.dealing.c0, self.dealing.c1)
        theirs = (u_peer, peer.slope_point)
        s3_own = curve.base_mul(self.sigma3)
        d1, d2 = (own, theirs) if self.role == 1 else (theirs, own)
        s31, s32 = (s3_own, s3_peer) if self.role == 1 else (s3_peer, s3_own)
        self.public = PublicShares(d1[0], d1[1], d2[0], d2[1], s31, s32)
        self.x = (self.dealing.shares[mine] + peer.share + self.sigma3) % curve.q
        x_point = curve.base_mul(self.x)
        assert x_point == self.public.share_point(self.role)
        return KeygenProve(
            schnorr_prove(
                self.x, x_point, self._proof_context(self.role, self.sent_deal), self.rng, curve
            ),
            prove_own_keys(self.sid, self.role, self.paillier_sk, self.aux, self.rng, curve),
        )

    # finish

    def finish(self, peer: KeygenProve) -> KeyShareRecord:
        curve = self.curve
        pc = self.peer_commit
        check_peer_factorization(
            peer.factorization, self.sid, self.peer, pc.paillier, pc.aux, curve
        )
        x_peer = self.public.share_point(self.peer)
        if not schnorr_verify(
            peer.schnorr, x_peer, self._proof_context(self.peer, self.peer_deal), curve
        ):
            raise ProtocolAbort(AbortReason.SCHNORR_PROOF_INVALID)
        # d = (sigma_{2,1} sigma_{2,3} B)_x; P2 knows both factors, P1 only sigma_{2,1}
        if self.role == 1:
            c0, c1 = self.public.c0_2, self.public.c1_2
            d_point = self.peer_deal.share * (c0 + EVALUATION_POINTS[3] * c1)
        else:
            q = curve.q
            d_point = curve.base_mul(
                self.dealing.shares[EVALUATION_POINTS[1]] * self.dealing.shares[EVALUATION_POINTS[3]] % q
            )
        rec_mine, rec_peer = self.rec, self.peer_deal.rec
        rec_13, rec_23 = (rec_mine, rec_peer) if self.role == 1 else (rec_peer, rec_mine)
        return KeyShareRecord(
            role=self.role,
            public=self.public,
            paillier=self.paillier,
            aux=self.aux,
            peer_paillier=pc.paillier,
            peer_aux=pc.aux,
            rec_13=rec_13,
            rec_23=rec_23,
            recovery_key=self.recovery_key,
            secrets=KeySecrets(
                self.x,
                common_secret_bytes(d_point),
                self.paillier_sk.p,
                self.paillier_sk.q,
            ),
        )

    def run(self) -> PartyCoroutine:
        if self.role == 1:
            peer = yield Recv(Kind.KEYGEN_COMMIT)
            yield Send(Kind.KEYGEN_COMMIT, self.commit())
        else:
            yield Send(Kind.KEYGEN_COMMIT, self.commit())
            peer = yield Recv(Kind.KEYGEN_COMMIT)
        yield Send(Kind.KEYGEN_DEAL, self.deal(peer))
        peer = yield Recv(Kind.KEYGEN_DEAL)
        yield Send(Kind.KEYGEN_PROVE, self.prove(peer))
        peer = yield Recv(Kind.KEYGEN_PROVE)
        return self.finish(peer)
