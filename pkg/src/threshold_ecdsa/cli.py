"""``tecdsa`` command line.

Commands::

    tecdsa setup   --out p3.json                       # P3's recovery key
    tecdsa keygen  --recovery-key HEX --out-dir DIR    # P1 and P2 in one process
    tecdsa sign    --keystore A --keystore B --message TEXT [--derive-index I]
    tecdsa verify  --pubkey HEX --message TEXT --signature HEX
    tecdsa pubkey  --keystore FILE [--derive-index I]

``keygen`` and ``sign`` also run one party over TCP with ``--mode socket``,
``--role`` and ``--listen``/``--connect``.  Exit codes: 0 success, 1 signature
rejected, 2 usage error, 3 protocol abort (the reason code is printed).
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import os
import sys
from pathlib import Path

from .algebra import CurveConfig, Signature, ecdsa_verify
from .errors import ProtocolAbort
from .keystore import PASSPHRASE_ENV, Keystore, KeystoreError, load, save
from .numtheory import RandomSource, seeded_rng, system_rng
from .protocol import (
    KeygenSession,
    Kind,
    ProtocolConfig,
    RecoveryHelper,
    RecoveryP3,
    SignSession,
    SigningShare,
    derive_public_key,
    normalize_pairing,
    setup_p3,
)
from .protocol.runtime import PartyCoroutine
from .transport.simulator import TamperRule, run_session
from .transport.sockets import (
    SocketChannel,
    parse_address,
    run_over_socket,
    socket_connect,
    socket_serve,
)

log = logging.getLogger("tecdsa")

EXIT_OK, EXIT_REJECTED, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rng(args, label: str) -> RandomSource:
    if args.seed is None:
        return system_rng()
    return seeded_rng(f"{args.seed}/{label}")


def _config(args) -> ProtocolConfig:
    try:
        return ProtocolConfig(
            curve=CurveConfig(args.curve),
            paillier_bits=args.paillier_bits,
            aux_bits=args.aux_bits,
            range_proofs=not args.no_range_proofs,
            insecure=args.insecure,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _session_id(args, *parts: bytes) -> bytes:
    if args.session_id:
        sid = bytes.fromhex(args.session_id)
        if len(sid) != 16:
            raise UsageError("--session-id must be 16 bytes of hex")
        return sid
    if args.seed is not None:
        parts = (str(args.seed).encode(), *parts)
    elif args.mode == "simulator":
        return os.urandom(16)
    return hashlib.sha256(b"tecdsa/session/" + b"|".join(parts)).digest()[:16]


def _passphrase() -> str | None:
    return os.environ.get(PASSPHRASE_ENV) or None


def _load(path: str) -> Keystore:
    try:
        return load(path, _passphrase())
    except (OSError, KeystoreError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _parse_tamper(spec: str) -> TamperRule:
    """``ACTION:KIND[:OFFSET][@SENDER]``, e.g. ``flip:SIGN_REVEAL:40@2``."""
    body, _, sender = spec.partition("@")
    parts = body.split(":")
    try:
        kind = Kind[parts[1].upper()]
    except (IndexError, KeyError):
        raise UsageError(f"bad --tamper {spec!r}; kinds: {', '.join(k.name for k in Kind)}") from None
    rule = TamperRule(action=parts[0], kind=int(kind), sender=int(sender) if sender else None)
    if rule.action == "flip":
        rule.offset = int(parts[2]) if len(parts) > 2 else 0
    elif rule.action != "drop":
        raise UsageError("tamper action must be drop or flip")
    return rule


def _simulate(args, parties: dict[int, PartyCoroutine], sid: bytes, curve) -> dict:
    rules = [_parse_tamper(t) for t in args.tamper or []]
    outcome = run_session(parties, sid, rules, curve)
    if not outcome.ok:
        raise ProtocolAbort(outcome.reason, "; ".join(
            f"P{p}: {outcome.aborts[p]}" for p in outcome.abort_order
        ))
    return outcome.results


def _socket(args, role: int, peer: int, coro: PartyCoroutine, sid: bytes, curve):
    if bool(args.listen) == bool(args.connect):
        raise UsageError("socket mode needs exactly one of --listen or --connect")
    try:
        if args.listen:
            sock = socket_serve(parse_address(args.listen), args.timeout)
        else:
            sock = socket_connect(parse_address(args.connect), args.timeout)
    except OSError as exc:
        raise UsageError(f"connection failed: {exc}") from None
    channel = SocketChannel(sock, role, peer, sid, curve)
    try:
        return run_over_socket(coro, channel)
    finally:
        channel.close()


# commands


def cmd_setup(args) -> int:
    config = _config(args)
    pair = setup_p3(_rng(args, "setup"), config.curve)
    save(args.out, Keystore(config, recovery=pair), _passphrase())
    print(pair.public.encode().hex())
    return EXIT_OK


def _recovery_key(args, curve) -> object:
    if not args.recovery_key:
        raise UsageError("--recovery-key is required (run `tecdsa setup`)")
    try:
        return curve.decode_point(bytes.fromhex(args.recovery_key))
    except ValueError as exc:
        raise UsageError(f"bad recovery key: {exc}") from None


def cmd_keygen(args) -> int:
    config = _config(args)
    curve = config.curve
    pk3 = _recovery_key(args, curve)
    sid = _session_id(args, b"keygen", pk3.encode())
    if args.mode == "simulator":
        results = _simulate(
            args,
            {r: KeygenSession(r, pk3, sid, _rng(args, f"keygen/{r}"), config).run() for r in (1, 2)},
            sid,
            curve,
        )
        out = Path(args.out_dir or ".")
        out.mkdir(parents=True, exist_ok=True)
        for role, record in sorted(results.items()):
            save(out / f"p{role}.json", Keystore(config, share=record), _passphrase())
        y = results[1].public_key
    else:
        if args.role not in (1, 2) or not args.out:
            raise UsageError("socket keygen needs --role 1|2 and --out")
        session = KeygenSession(args.role, pk3, sid, _rng(args, f"keygen/{args.role}"), config)
        record = _socket(args, args.role, 3 - args.role, session.run(), sid, curve)
        save(args.out, Keystore(config, share=record), _passphrase())
        y = record.public_key
    log.info("key generation finished")
    print(y.encode().hex())
    return EXIT_OK


def _message(args) -> bytes:
    given = [x for x in (args.message, args.message_hex, args.message_file) if x is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --message, --message-hex, --message-file")
    if args.message is not None:
        return args.message.encode()
    if args.message_hex is not None:
        return bytes.fromhex(args.message_hex)
    return Path(args.message_file).read_bytes()


def _party_coroutine(
    store: Keystore, peer: int, msg: bytes, sid: bytes, args, config: ProtocolConfig
) -> PartyCoroutine:
    role = store.role
    rng = _rng(args, f"sign/{role}")
    index = args.derive_index

    def finish(share: SigningShare):
        if index is not None:
            share = share.derive(index)
        return (yield from SignSession(share, msg, sid, rng, config).run())

    if role == 3:
        share = yield from RecoveryP3(store.recovery, peer, sid, rng, config).run()
    elif peer == 3:
        share = yield from RecoveryHelper(store.share, sid, rng, config).run()
    else:
        share = SigningShare.for_ordinary(store.share, config.curve)
    return (yield from finish(share))


def _print_signature(sig: Signature, public_key, args, curve) -> None:
    if args.low_s:
        sig = sig.normalized(curve.q)
    print(f"pubkey {public_key.encode().hex()}")
    print(f"r {sig.r:064x}")
    print(f"s {sig.s:064x}")
    print(f"raw {sig.to_bytes(curve.scalar_bytes).hex()}")
    print(f"der {sig.to_der().hex()}")


def cmd_sign(args) -> int:
    msg = _message(args)
    stores = [_load(p) for p in args.keystore]
    if not stores:
        raise UsageError("--keystore is required")
    # key sizes belong to the generated key; P3's own file carries none of that
    shares = [s for s in stores if s.share is not None]
    config = shares[0].config if shares else _config(args)
    curve = config.curve
    if args.mode == "simulator":
        if len(stores) != 2:
            raise UsageError("simulator signing needs two --keystore files")
        a, b = stores
        try:
            pairing = normalize_pairing((a.role, b.role))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.pairing and normalize_pairing(_pair_arg(args.pairing)) != pairing:
            raise UsageError("--pairing does not match the keystores given")
        sid = _session_id(args, b"sign", msg)
        results = _simulate(
            args,
            {
                a.role: _party_coroutine(a, b.role, msg, sid, args, config),
                b.role: _party_coroutine(b, a.role, msg, sid, args, config),
            },
            sid,
            curve,
        )
        sig = results[pairing[0]]
    else:
        store = stores[0]
        if not args.pairing:
            raise UsageError("socket signing needs --pairing")
        pairing = normalize_pairing(_pair_arg(args.pairing))
        if store.role not in pairing:
            raise UsageError("keystore role is not part of --pairing")
        peer = pairing[1] if store.role == pairing[0] else pairing[0]
        sid = _session_id(args, b"sign", msg, bytes(pairing))
        sig = _socket(args, store.role, peer, _party_coroutine(store, peer, msg, sid, args, config), sid, curve)
    public_key = _public_key(stores, args.derive_index)
    _print_signature(sig, public_key, args, curve)
    return EXIT_OK


def _public_key(stores: list[Keystore], index: int | None):
    share_stores = [s for s in stores if s.share is not None]
    if not share_stores:
        raise UsageError("need a P1 or P2 keystore to know the public key")
    rec = share_stores[0].share
    if index is None:
        return rec.public_key
    return derive_public_key(rec.public_key, rec.secrets.d, index)


def _pair_arg(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.replace("P", "").replace("p", "").split(","))
    except ValueError:
        raise UsageError("--pairing takes two party numbers, e.g. 1,3") from None
    return a, b


def cmd_pubkey(args) -> int:
    store = _load(args.keystore[0])
    if store.recovery is not None:
        print(store.recovery.public.encode().hex())
        return EXIT_OK
    print(_public_key([store], args.derive_index).encode().hex())
    return EXIT_OK


def _parse_signature(text: str, curve) -> Signature:
    data = bytes.fromhex(text)
    if len(data) == 2 * curve.scalar_bytes and data[0] != 0x30:
        return Signature.from_bytes(data)
    try:
        return Signature.from_der(data)
    except ValueError:
        return Signature.from_bytes(data)


def cmd_verify(args) -> int:
    curve = CurveConfig(args.curve)
    msg = _message(args)
    try:
        y = curve.decode_point(bytes.fromhex(args.pubkey))
        sig = _parse_signature(args.signature, curve)
    except ValueError as exc:
        raise UsageError(f"cannot parse input: {exc}") from None
    ok = ecdsa_verify(y, msg, sig, curve)
    print("valid" if ok else "invalid")
    return EXIT_OK if ok else EXIT_REJECTED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", default="secp256k1", choices=["secp256k1", "P-256"])
    common.add_argument("--paillier-bits", type=int, default=2048)
    common.add_argument("--aux-bits", type=int, default=2048)
    common.add_argument("--no-range-proofs", action="store_true")
    common.add_argument("--insecure", action="store_true", help="allow test-only sizes")
    common.add_argument("--seed", help="deterministic randomness (tests only, insecure)")
    common.add_argument("--session-id", help="16-byte hex session id")
    common.add_argument("--mode", choices=["simulator", "socket"], default="simulator")
    common.add_argument("--role", type=int, choices=[1, 2, 3])
    common.add_argument("--listen", help="HOST:PORT")
    common.add_argument("--connect", help="HOST:PORT")
    common.add_argument("--timeout", type=float, default=30.0)
    common.add_argument("--tamper", action="append", help="simulator fault: ACTION:KIND[:OFFSET][@SENDER]")
    common.add_argument("-v", "--verbose", action="count", default=0)

    msg = argparse.ArgumentParser(add_help=False)
    msg.add_argument("--message")
    msg.add_argument("--message-hex")
    msg.add_argument("--message-file")

    p = argparse.ArgumentParser(prog="tecdsa", description="(2,3)-threshold ECDSA with an offline recovery party")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("setup", parents=[common], help="create P3's recovery key pair")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_setup)

    s = sub.add_parser("keygen", parents=[common], help="distributed key generation")
    s.add_argument("--recovery-key")
    s.add_argument("--out-dir")
    s.add_argument("--out")
    s.set_defaults(func=cmd_keygen)

    s = sub.add_parser("sign", parents=[common, msg], help="sign with a pairing")
    s.add_argument("--keystore", action="append", default=[])
    s.add_argument("--pairing")
    s.add_argument("--derive-index", type=int)
    s.add_argument("--low-s", action="store_true")
    s.set_defaults(func=cmd_sign)

    s = sub.add_parser("verify", parents=[common, msg], help="verify an ECDSA signature")
    s.add_argument("--pubkey", required=True)
    s.add_argument("--signature", required=True, help="hex r||s or DER")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("pubkey", parents=[common], help="print the (derived) public key")
    s.add_argument("--keystore", action="append", required=True)
    s.add_argument("--derive-index", type=int)
    s.set_defaults(func=cmd_pubkey)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProtocolAbort as exc:
        print(f"abort: {exc.reason.value}", file=sys.stderr)
        log.info("abort detail: %s", exc.detail)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
