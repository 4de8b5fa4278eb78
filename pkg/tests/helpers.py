"""Shared drivers and tamper tooling for the test suite."""

from __future__ import annotations

import dataclasses
import re

from threshold_ecdsa.algebra import Point
from threshold_ecdsa.numtheory import seeded_rng, system_rng
from threshold_ecdsa.protocol import (
    KIND_SCHEMA,
    KeygenSession,
    Kind,
    RecoveryHelper,
    RecoveryP3,
    SignSession,
    SigningShare,
)
from threshold_ecdsa.transport.simulator import run_session
from threshold_ecdsa.wire import decode

SID = bytes(range(16))

# filled by the acceptance suite, printed by conftest at the end of the run
ACCEPTANCE: list[str] = []


def rng_for(seed, label):
    """Seeded randomness for reproducible tests; ``seed=None`` uses the system source."""
    return system_rng() if seed is None else seeded_rng(f"{seed}/{label}")


def run_keygen(pair, config, seed="kg", sid=SID, rules=None, raw=False, sessions=None):
    objs = {r: KeygenSession(r, pair.public, sid, rng_for(seed, r), config) for r in (1, 2)}
    if sessions is not None:
        sessions.update(objs)
    out = run_session({r: o.run() for r, o in objs.items()}, sid, rules, config.curve)
    if raw:
        return out
    assert out.ok, out.aborts
    return out.results[1], out.results[2]


def run_recovery(pair, record, config, seed="rc", sid=SID):
    h = record.role
    out = run_session(
        {
            h: RecoveryHelper(record, sid, rng_for(seed, h), config).run(),
            3: RecoveryP3(pair, h, sid, rng_for(seed, 3), config).run(),
        },
        sid,
        curve=config.curve,
    )
    assert out.ok, out.aborts
    return out.results[h], out.results[3]


def run_sign(share_a: SigningShare, share_b: SigningShare, msg: bytes, config, seed="sg",
             sid=SID, rules=None, first_revealer=None, sessions=None):
    """Run a signing session; ``sessions`` (a dict) receives the session objects."""
    objs = {
        s.party: SignSession(s, msg, sid, rng_for(seed, s.party), config, first_revealer)
        for s in (share_a, share_b)
    }
    if sessions is not None:
        sessions.update(objs)
    return run_session({p: o.run() for p, o in objs.items()}, sid, rules, config.curve)


def decode_envelope(env, curve):
    return decode(KIND_SCHEMA[Kind(env.kind)], env.payload, curve)


# semantic perturbation of one field, addressed by the dotted path used in
# ``wire.field_spans`` (e.g. ``gamma.proof.s1`` or ``factorization.rounds[2].x``)

_STEP = re.compile(r"([a-z_0-9]+)(?:\[(\d+)\])?")


def _bump(value, spec_kind, curve):
    if isinstance(value, Point):
        return value + curve.generator
    if isinstance(value, bytes):
        return bytes([value[0] ^ 0x01]) + value[1:]
    if isinstance(value, tuple):
        return (_bump(value[0], spec_kind, curve),) + value[1:]
    if isinstance(value, int):
        if spec_kind == "scalar":
            return (value + 1) % curve.q
        return value + 1
    raise TypeError(f"cannot perturb {type(value)}")


def perturb(obj, path: str, curve):
    head, _, rest = path.partition(".")
    m = _STEP.fullmatch(head)
    name, idx = m.group(1), m.group(2)
    field = next(f for f in dataclasses.fields(obj) if f.name == name)
    value = getattr(obj, name)
    if idx is not None:
        items = list(value)
        items[int(idx)] = perturb(items[int(idx)], rest, curve)
        return dataclasses.replace(obj, **{name: tuple(items)})
    if rest:
        return dataclasses.replace(obj, **{name: perturb(value, rest, curve)})
    return dataclasses.replace(obj, **{name: _bump(value, field.metadata["tlv"].kind, curve)})


# one fresh proof of each type together with a verifier closure, for the
# completeness and perturbation suites

PROOF_TYPES = ("schnorr", "linear", "factorization", "range_initiator", "range_respondent",
               "range_respondent_check")


def make_proof(kind, rng, paillier, aux, curve):
    """Return ``(proof, verify)`` where ``verify(proof) -> bool``."""
    from threshold_ecdsa.numtheory import rand_below, rand_unit
    from threshold_ecdsa.paillier import add_ciphertexts, encrypt, scalar_mul_ciphertext
    from threshold_ecdsa.zkp import (
        factorization_prove,
        factorization_verify,
        linear_prove,
        linear_verify,
        range_prove_initiator,
        range_prove_respondent,
        range_verify_initiator,
        range_verify_respondent,
        schnorr_prove,
        schnorr_verify,
    )

    pk, sk = paillier
    ctx = b"ctx/" + kind.encode()
    q = curve.q
    if kind == "schnorr":
        x = curve.random_scalar(rng)
        X = curve.base_mul(x)
        return schnorr_prove(x, X, ctx, rng, curve), lambda p: schnorr_verify(p, X, ctx, curve)
    if kind == "linear":
        s, l, rho = (curve.random_scalar(rng) for _ in range(3))
        R = curve.base_mul(curve.random_scalar(rng))
        W, Z = s * R + curve.base_mul(l), curve.base_mul(rho)
        proof = linear_prove(s, l, rho, R, W, Z, ctx, rng, curve)
        return proof, lambda p: linear_verify(p, R, W, Z, ctx, curve)
    if kind == "factorization":
        proof = factorization_prove(sk, ctx, rng, curve=curve)
        return proof, lambda p: factorization_verify(p, pk.n, ctx, curve=curve)
    if kind == "range_initiator":
        m = rand_below(rng, q)
        r = rand_unit(rng, pk.n)
        c = encrypt(pk, m, r)
        proof = range_prove_initiator(m, r, c, pk, aux, ctx, rng, curve)
        return proof, lambda p: range_verify_initiator(p, c, pk, aux, ctx, curve)
    with_check = kind == "range_respondent_check"
    b = rand_below(rng, q)
    y = rand_below(rng, pk.n)
    r = rand_unit(rng, pk.n)
    c1 = encrypt(pk, rand_below(rng, q), rng=rng)
    c2 = add_ciphertexts(pk, scalar_mul_ciphertext(pk, b, c1), encrypt(pk, y, r))
    b_point = curve.base_mul(b) if with_check else None
    proof = range_prove_respondent(
        b, y, r, c1, c2, pk, aux, ctx, rng, with_check=with_check, b_point=b_point, curve=curve
    )
    return proof, lambda p: range_verify_respondent(
        p, c1, c2, pk, aux, ctx, with_check=with_check, b_point=b_point, curve=curve
    )


def field_paths(obj, curve):
    from threshold_ecdsa.wire import encode, field_spans

    return [name for name, _, _ in field_spans(type(obj), encode(obj, curve))]


def to_reveal(a: SignSession, b: SignSession):
    """Drive two sessions by hand through phase 3; returns their reveal messages."""
    ca, cb = a.commit_gamma(), b.commit_gamma()
    ia, ib = a.mta_start(cb), b.mta_start(ca)
    ra, rb = a.mta_answer(ib), b.mta_answer(ia)
    da, db = a.mta_finish(rb), b.mta_finish(ra)
    return a.reveal_gamma(db), b.reveal_gamma(da)


def phase_four(a: SignSession, b: SignSession, va, vb):
    """Run the W/Z and U/T exchange; raises the first ProtocolAbort (checker ``a`` first)."""
    wa, wb = a.commit_wz(vb), b.commit_wz(va)
    oa, ob = a.open_wz(wb), b.open_wz(wa)
    ua, ub = a.commit_ut(ob), b.commit_ut(oa)
    pa, pb = a.open_ut(ub), b.open_ut(ua)
    a.check_ut(pb)
    b.check_ut(pa)


def cheating_trials(share_a, share_b, trials: int, seed: str = "cheat"):
    """Peer ``b`` shifts its ``s_i`` by a random nonzero error in phase four.

    Yields ``(abort_reason_or_None, honest_session)`` per trial.
    """
    import copy

    from threshold_ecdsa.errors import ProtocolAbort
    from threshold_ecdsa.protocol import TEST

    config = TEST
    q = config.curve.q
    a = SignSession(share_a, b"cheat", SID, seeded_rng(f"{seed}/a"), config)
    b = SignSession(share_b, b"cheat", SID, seeded_rng(f"{seed}/b"), config)
    va, vb = to_reveal(a, b)
    err_rng = seeded_rng(f"{seed}/err")
    for t in range(trials):
        honest, adv = copy.deepcopy(a), copy.deepcopy(b)
        honest.rng, adv.rng = seeded_rng(f"{seed}/h{t}"), seeded_rng(f"{seed}/a{t}")
        err = config.curve.random_scalar(err_rng)
        true_share = adv._s_share
        adv._s_share = lambda f=true_share, e=err: (f() + e) % q
        try:
            phase_four(honest, adv, va, vb)
            yield None, honest
        except ProtocolAbort as exc:
            yield exc.reason, honest


# exhaustive tamper sweep

def _reasons():
    from threshold_ecdsa.errors import AbortReason as A

    dec = {A.DECOMMITMENT_INVALID}
    return {
        Kind.KEYGEN_COMMIT: {
            "kgc": dec,
            "kgcs": dec,
            # key tampering either fails validation or the factorization proof bound to it
            "paillier": {A.PAILLIER_KEY_INVALID, A.FACTORIZATION_PROOF_INVALID},
            "aux": {A.AUX_PARAMS_INVALID, A.FACTORIZATION_PROOF_INVALID},
        },
        Kind.KEYGEN_DEAL: {
            "kgd": dec,
            "kgds": dec,
            "slope_point": {A.VSS_SHARE_INVALID},
            "share": {A.VSS_SHARE_INVALID},
            "rec": {A.SCHNORR_PROOF_INVALID},
        },
        Kind.KEYGEN_PROVE: {
            "schnorr": {A.SCHNORR_PROOF_INVALID},
            "factorization": {A.FACTORIZATION_PROOF_INVALID},
        },
        Kind.SIGN_COMMIT: {"com": dec},
        Kind.SIGN_MTA_INIT: {"": {A.RANGE_PROOF_INITIATOR_INVALID}},
        Kind.SIGN_MTA_RESPONSE: {"": {A.RANGE_PROOF_RESPONDENT_INVALID}},
        # a wrong delta gives the two parties different R; the W/Z proof catches it
        Kind.SIGN_DELTA: {"delta": {A.WZ_PROOF_INVALID, A.CHECK_MISMATCH}},
        Kind.SIGN_REVEAL: {"dec": dec, "proof": {A.SCHNORR_PROOF_INVALID}},
        Kind.SIGN_WZ_COMMIT: {"com": dec},
        Kind.SIGN_WZ_OPEN: {"dec": dec, "proof": {A.WZ_PROOF_INVALID}},
        Kind.SIGN_UT_COMMIT: {"com": dec},
        Kind.SIGN_UT_OPEN: {"dec": dec},
        Kind.SIGN_SHARE: {"s": {A.SIGNATURE_INVALID}},
    }


def expected_reasons(kind, path):
    table = _reasons()[Kind(kind)]
    head = path.split(".")[0].split("[")[0]
    return table.get(head, table.get(""))


@dataclasses.dataclass
class SweepResult:
    protocol: str
    sender: int
    kind: str
    occurrence: int
    field: str
    mode: str
    outcome: str
    passed: bool
    leaked: bool


def _scan_for(secret: bytes, transcript) -> bool:
    return any(secret in env.payload for env in transcript)


def tamper_sweep(protocol: str, run, verify, curve):
    """Tamper with every field of every message from either sender.

    ``run(sender, rules)`` returns ``(outcome, honest_secret_bytes_or_None)``;
    ``verify(outcome)`` decides whether a completed run produced a valid result.
    """
    from threshold_ecdsa.errors import AbortReason
    from threshold_ecdsa.transport import TamperRule
    from threshold_ecdsa.wire import encode, field_spans

    results: list[SweepResult] = []
    for sender in (1, 2):
        baseline, _ = run(sender, None)
        assert baseline.ok, baseline.aborts
        honest = 3 - sender
        seen: dict[int, int] = {}
        for env in [e for e in baseline.transcript if e.sender == sender]:
            occ = seen.get(env.kind, 0)
            seen[env.kind] = occ + 1
            cls = KIND_SCHEMA[Kind(env.kind)]
            msg = decode(cls, env.payload, curve)
            cases = [("drop", "", TamperRule("drop", sender, env.kind, occurrence=occ), {AbortReason.TIMEOUT})]
            for path, start, end in field_spans(cls, env.payload):
                reasons = expected_reasons(env.kind, path)
                bumped = encode(perturb(msg, path, curve), curve)
                cases.append(("field", path, TamperRule("replace", sender, env.kind, payload=bumped, occurrence=occ), reasons))
                mid = (start + end) // 2
                cases.append((
                    "flip", path, TamperRule("flip", sender, env.kind, offset=mid, occurrence=occ),
                    reasons | {AbortReason.MALFORMED_MESSAGE},
                ))
            for mode, path, rule, reasons in cases:
                outcome, secret = run(sender, [rule])
                leaked = bool(outcome.aborts) and secret is not None and _scan_for(secret, outcome.transcript)
                if outcome.ok:
                    passed, label = verify(outcome), "completed"
                else:
                    got = outcome.aborts.get(honest)
                    label = got.reason.value if got else "honest completed"
                    passed = got is not None and got.reason in reasons
                results.append(SweepResult(
                    protocol, sender, Kind(env.kind).name, occ, path, mode, label, passed and not leaked, leaked,
                ))
    return results
