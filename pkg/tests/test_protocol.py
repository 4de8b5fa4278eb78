import dataclasses

import pytest

from threshold_ecdsa.algebra import SECP256K1, Signature, ecdsa_verify
from threshold_ecdsa.errors import AbortReason, ProtocolAbort
from threshold_ecdsa.numtheory import seeded_rng
from threshold_ecdsa.protocol import (
    TEST,
    SignSession,
    SigningShare,
    derivation_scalar,
    derive_public_key,
    recover_point_share,
    setup_p3,
)
from threshold_ecdsa.protocol.messages import RecoveryBundle, SignDelta, SignShare
from threshold_ecdsa.protocol.records import pair_weights
from threshold_ecdsa.protocol.recovery_box import RecoveryBoxError, open_shares, seal_shares
from threshold_ecdsa.protocol.signing import Restart
from threshold_ecdsa.transport.simulator import run_session
from threshold_ecdsa.wire import encode

from helpers import (
    SID,
    cheating_trials,
    run_keygen,
    run_recovery,
    run_sign,
    to_reveal,
)

C = SECP256K1
Q = C.q


@pytest.fixture(scope="module")
def ordinary(keyset):
    _, rec1, rec2 = keyset
    return SigningShare.for_ordinary(rec1), SigningShare.for_ordinary(rec2)


@pytest.fixture(scope="module")
def recovered(keyset):
    """Signing shares for both recovery pairings, keyed by helper id."""
    pair, rec1, rec2 = keyset
    return {h.role: run_recovery(pair, h, TEST, seed=f"rc{h.role}") for h in (rec1, rec2)}


def test_keygen_agrees_on_public_data(keyset):
    _, rec1, rec2 = keyset
    assert rec1.public == rec2.public
    assert rec1.public_key == rec2.public_key
    assert rec1.secrets.d == rec2.secrets.d
    assert (rec1.rec_13, rec1.rec_23) == (rec2.rec_13, rec2.rec_23)
    assert rec1.peer_paillier == rec2.paillier and rec2.peer_paillier == rec1.paillier
    for rec in (rec1, rec2):
        assert C.base_mul(rec.secrets.x) == rec.public.share_point(rec.role)


def test_key_shares_interpolate_to_the_secret(keyset):
    _, rec1, rec2 = keyset
    u = (3 * rec1.secrets.x - 2 * rec2.secrets.x) % Q
    assert C.base_mul(u) == rec1.public_key


def test_ordinary_signature_verifies(ordinary):
    out = run_sign(*ordinary, b"hello", TEST)
    assert out.ok, out.aborts
    sig = out.results[1]
    assert sig == out.results[2]
    assert ecdsa_verify(ordinary[0].public_key, b"hello", sig)


def test_joint_identities_after_mta(ordinary):
    a = SignSession(ordinary[0], b"m", SID, seeded_rng("j1"), TEST)
    b = SignSession(ordinary[1], b"m", SID, seeded_rng("j2"), TEST)
    to_reveal(a, b)
    k, gamma = a.k + b.k, a.gamma + b.gamma
    u = a.share.omega + b.share.omega
    assert C.base_mul(u) == a.share.public_key
    assert (a.delta_i + b.delta_i) % Q == k * gamma % Q
    assert (a.sigma_i + b.sigma_i) % Q == k * u % Q
    # R = k^{-1} B
    a_rev, b_rev = to_reveal(
        SignSession(ordinary[0], b"m", SID, seeded_rng("j1"), TEST),
        SignSession(ordinary[1], b"m", SID, seeded_rng("j2"), TEST),
    )
    a.commit_wz(b_rev)
    assert a.R == C.base_mul(pow(k, -1, Q))


def test_recovery_yields_the_same_key(keyset, recovered):
    _, rec1, _ = keyset
    x3 = []
    for helper, (h_share, p3_share) in recovered.items():
        assert p3_share.public_key == rec1.public_key
        assert C.base_mul(h_share.omega + p3_share.omega) == rec1.public_key
        assert p3_share.d == rec1.secrets.d
        weight, _ = pair_weights(3, helper, Q)
        x3.append(p3_share.omega * pow(weight, -1, Q) % Q)
    assert x3[0] == x3[1]
    assert C.base_mul(x3[0]) == rec1.public.share_point(3)


@pytest.mark.parametrize("helper", [1, 2])
def test_recovery_pairing_signs(recovered, helper):
    h_share, p3_share = recovered[helper]
    out = run_sign(h_share, p3_share, b"recovered", TEST, seed=f"rs{helper}")
    assert out.ok, out.aborts
    assert ecdsa_verify(h_share.public_key, b"recovered", out.results[3])


def test_derived_keys_match_across_pairings(keyset, ordinary, recovered):
    _, rec1, _ = keyset
    d = rec1.secrets.d
    pairs = [ordinary, recovered[1], recovered[2]]
    for index in (0, 7, 2**31):
        expected = derive_public_key(rec1.public_key, d, index)
        assert expected == rec1.public_key + C.base_mul(derivation_scalar(d, index))
        for a, b in pairs:
            da, db = a.derive(index), b.derive(index)
            assert da.public_key == db.public_key == expected
            assert da.consistent() and db.consistent()
    a, b = recovered[2]
    out = run_sign(a.derive(7), b.derive(7), b"child", TEST, seed="child")
    assert out.ok and ecdsa_verify(derive_public_key(rec1.public_key, d, 7), b"child", out.results[2])


def test_derivation_scalar_by_hand():
    import hashlib
    import struct

    d = bytes(range(32))
    raw = hashlib.sha256(b"tecdsa/derive/v1" + d + struct.pack(">I", 5)).digest()
    assert derivation_scalar(d, 5) == int.from_bytes(raw, "big") % Q
    with pytest.raises(ValueError):
        derivation_scalar(d, 2**32)
    with pytest.raises(ValueError):
        derivation_scalar(d[:31], 0)


def test_inconsistent_share_is_refused(ordinary):
    bad = dataclasses.replace(ordinary[0], omega=(ordinary[0].omega + 1) % Q)
    with pytest.raises(ProtocolAbort) as exc:
        SignSession(bad, b"m", SID, seeded_rng(1), TEST)
    assert exc.value.reason == AbortReason.PEER_KEY_MISMATCH


def test_zero_delta_restarts(ordinary):
    class ForcedZero(SignSession):
        def reveal_gamma(self, peer):
            if self.attempt == 0:
                peer = SignDelta(-self.delta_i % Q)
            return super().reveal_gamma(peer)

    objs = {
        s.party: ForcedZero(s, b"again", SID, seeded_rng(f"z{s.party}"), TEST) for s in ordinary
    }
    out = run_session({p: o.run() for p, o in objs.items()}, SID)
    assert out.ok, out.aborts
    assert all(o.attempt == 1 for o in objs.values())
    assert ecdsa_verify(ordinary[0].public_key, b"again", out.results[1])


def test_restart_limit_aborts(ordinary):
    class AlwaysZero(SignSession):
        def reveal_gamma(self, peer):
            raise Restart(AbortReason.DELTA_ZERO)

    objs = {s.party: AlwaysZero(s, b"m", SID, seeded_rng(s.party), TEST) for s in ordinary}
    out = run_session({p: o.run() for p, o in objs.items()}, SID)
    assert out.reason == AbortReason.DELTA_ZERO


def test_cheating_peer_is_caught_before_release(ordinary):
    for reason, honest in cheating_trials(*ordinary, trials=100):
        assert reason == AbortReason.CHECK_MISMATCH
        assert honest.s_i is not None  # computed, but check_ut refused to continue


def test_seeded_runs_are_reproducible(ordinary):
    first = run_sign(*ordinary, b"same", TEST, seed="det")
    second = run_sign(*ordinary, b"same", TEST, seed="det")
    assert [encode(e) for e in first.transcript] == [encode(e) for e in second.transcript]
    third = run_sign(*ordinary, b"same", TEST, seed="other")
    assert first.results[1] != third.results[1]


def test_recovery_box_roundtrip_and_binding():
    rng = seeded_rng("box")
    pair = setup_p3(rng)
    other = setup_p3(rng)
    blob = seal_shares(pair.public, 11, 22, 1, rng)
    assert open_shares(pair.secret, blob, 1) == (11, 22)
    for sk, dealer, data in (
        (other.secret, 1, blob),
        (pair.secret, 2, blob),
        (pair.secret, 1, blob[:-1] + bytes([blob[-1] ^ 1])),
        (pair.secret, 1, blob[:20]),
    ):
        with pytest.raises(RecoveryBoxError):
            open_shares(sk, data, dealer)


def _bundle(record):
    return RecoveryBundle(
        record.public_key, record.public, record.rec_13, record.rec_23,
        record.paillier, record.aux, None,
    )


def test_recovery_rejects_bad_bundles(keyset):
    pair, rec1, _ = keyset
    good = _bundle(rec1)
    x3, d = recover_point_share(pair, good, C)
    assert C.base_mul(x3) == rec1.public.share_point(3) and d == rec1.secrets.d
    cases = [
        (dataclasses.replace(good, public_key=good.public_key + C.generator), AbortReason.PUBLIC_KEY_MISMATCH),
        (dataclasses.replace(good, rec_13=good.rec_23), AbortReason.RECOVERY_DECRYPT_FAILED),
        (
            dataclasses.replace(
                good,
                public=dataclasses.replace(good.public, s3_1=good.public.s3_1 + C.generator),
                public_key=good.public_key + 3 * C.generator,
            ),
            AbortReason.RECOVERY_SHARE_MISMATCH,
        ),
    ]
    for bundle, reason in cases:
        with pytest.raises(ProtocolAbort) as exc:
            recover_point_share(pair, bundle, C)
        assert exc.value.reason == reason
    wrong = setup_p3(seeded_rng("wrong"))
    with pytest.raises(ProtocolAbort) as exc:
        recover_point_share(wrong, good, C)
    assert exc.value.reason == AbortReason.RECOVERY_DECRYPT_FAILED


def test_keygen_records_differ_per_seed(config, recovery_pair):
    r1, _ = run_keygen(recovery_pair, config, seed="fresh")
    assert r1.public_key != run_keygen(recovery_pair, config, seed="fresh2")[0].public_key


def test_signature_type_roundtrip(ordinary):
    out = run_sign(*ordinary, b"x", TEST, seed="der")
    sig = out.results[1]
    assert Signature.from_der(sig.to_der()) == sig


def test_zero_s_restarts_both_parties(ordinary):
    class ZeroSum(SignSession):
        def combine(self, peer):
            if self.attempt == 0:
                peer = SignShare(-self.s_i % Q)
            return super().combine(peer)

    objs = {s.party: ZeroSum(s, b"zero s", SID, seeded_rng(f"s{s.party}"), TEST) for s in ordinary}
    out = run_session({p: o.run() for p, o in objs.items()}, SID)
    assert out.ok, out.aborts
    assert all(o.attempt == 1 for o in objs.values())
    assert ecdsa_verify(ordinary[0].public_key, b"zero s", out.results[2])
