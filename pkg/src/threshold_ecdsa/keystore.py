"""Versioned JSON keystore for one party's long-lived key material.

Public fields are stored as hex TLV; the secret part is either plain hex TLV
or sealed with AES-256-GCM under a scrypt-derived key.  See
``docs/wire-format.md`` for the byte layout.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.scrypt import Scrypt

from .algebra import CurveConfig
from .protocol.config import ProtocolConfig
from .protocol.records import KeySecrets, KeyShareRecord, RecoveryKeyPair
from .wire import decode, encode

FORMAT = "tecdsa-keystore"
VERSION = 1
PASSPHRASE_ENV = "TECDSA_PASSPHRASE"
_SCRYPT = {"n": 2**14, "r": 8, "p": 1}


class KeystoreError(ValueError):
    pass


@dataclass(frozen=True)
class Keystore:
    config: ProtocolConfig
    share: KeyShareRecord | None = None
    recovery: RecoveryKeyPair | None = None

    @property
    def role(self) -> int:
        return 3 if self.recovery is not None else self.share.role


def _config_json(config: ProtocolConfig) -> dict:
    d = asdict(config)
    d["curve"] = config.curve.name
    d["hash"] = config.curve.hash_name
    return d


def _config_from_json(d: dict) -> ProtocolConfig:
    d = dict(d)
    curve = CurveConfig(d.pop("curve"), d.pop("hash"))
    return ProtocolConfig(curve=curve, **d)


def _kdf(passphrase: str, salt: bytes) -> bytes:
    return Scrypt(salt=salt, length=32, **_SCRYPT).derive(passphrase.encode())


def _seal(secret: bytes, passphrase: str) -> dict:
    salt, nonce = os.urandom(16), os.urandom(12)
    ct = AESGCM(_kdf(passphrase, salt)).encrypt(nonce, secret, FORMAT.encode())
    return {"kdf": "scrypt", **_SCRYPT, "salt": salt.hex(), "nonce": nonce.hex(), "ct": ct.hex()}


def _unseal(sealed: dict, passphrase: str) -> bytes:
    if sealed.get("kdf") != "scrypt":
        raise KeystoreError("unsupported key derivation")
    salt = bytes.fromhex(sealed["salt"])
    key = Scrypt(salt=salt, length=32, n=sealed["n"], r=sealed["r"], p=sealed["p"]).derive(
        passphrase.encode()
    )
    try:
        return AESGCM(key).decrypt(bytes.fromhex(sealed["nonce"]), bytes.fromhex(sealed["ct"]), FORMAT.encode())
    except InvalidTag:
        raise KeystoreError("wrong passphrase or corrupted keystore") from None


def dumps(store: Keystore, passphrase: str | None = None) -> str:
    curve = store.config.curve
    if store.recovery is not None:
        kind = "recovery"
        public = store.recovery.public.encode()
        secret = curve.encode_scalar(store.recovery.secret)
    else:
        kind = "share"
        public = encode(store.share.public_only(), curve)
        secret = encode(store.share.secrets, curve)
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "kind": kind,
        "role": store.role,
        "config": _config_json(store.config),
        "public": public.hex(),
        "secret": {"sealed": _seal(secret, passphrase)} if passphrase else {"plain": secret.hex()},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str, passphrase: str | None = None) -> Keystore:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise KeystoreError(f"not JSON: {exc}") from None
    if doc.get("format") != FORMAT:
        raise KeystoreError("not a keystore file")
    if doc.get("version") != VERSION:
        raise KeystoreError(f"unsupported keystore version {doc.get('version')}")
    config = _config_from_json(doc["config"])
    curve = config.curve
    sec = doc["secret"]
    if "sealed" in sec:
        if not passphrase:
            raise KeystoreError(f"keystore is sealed; set {PASSPHRASE_ENV}")
        secret = _unseal(sec["sealed"], passphrase)
    else:
        secret = bytes.fromhex(sec["plain"])
    public = bytes.fromhex(doc["public"])
    try:
        if doc["kind"] == "recovery":
            pair = RecoveryKeyPair(curve.decode_scalar(secret), curve.decode_point(public))
            if curve.base_mul(pair.secret) != pair.public:
                raise KeystoreError("recovery key pair does not match")
            return Keystore(config, recovery=pair)
        record = decode(KeyShareRecord, public, curve)
        record = replace(record, secrets=decode(KeySecrets, secret, curve))
    except ValueError as exc:
        raise KeystoreError(f"corrupted keystore: {exc}") from None
    if record.role != doc["role"]:
        raise KeystoreError("role field does not match the record")
    return Keystore(config, share=record)


def save(path: str | Path, store: Keystore, passphrase: str | None = None) -> None:
    path = Path(path)
    path.write_text(dumps(store, passphrase))
    path.chmod(0o600)


def load(path: str | Path, passphrase: str | None = None) -> Keystore:
    return loads(Path(path).read_text(), passphrase)
