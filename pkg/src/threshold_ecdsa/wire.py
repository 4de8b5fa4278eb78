"""Tag-length-value codec for proofs, protocol messages and stored records.

A record is a sequence of ``tag (2 bytes) | length (4 bytes) | value`` items in
ascending tag order, all integers big-endian.  Dataclasses opt in by tagging
their fields with :func:`tlv`; decoding is strict (unknown, duplicate, missing
or out-of-order tags and non-canonical integers are rejected) so that every
accepted byte string has exactly one meaning.
"""

from __future__ import annotations

import dataclasses
import struct
from dataclasses import dataclass, field
from typing import Any, Iterator

from .algebra import SECP256K1, CurveConfig, Point

_HEAD = struct.Struct(">HI")


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    tag: int
    kind: str
    cls: type | None = None
    item: str | None = None
    size: int | None = None
    optional: bool = False


def tlv(
    tag: int,
    kind: str = "uint",
    *,
    cls: type | None = None,
    item: str | None = None,
    size: int | None = None,
    optional: bool = False,
) -> Any:
    """Declare a dataclass field's wire tag and encoding.

    ``kind`` is one of ``uint``, ``u8``, ``u16``, ``scalar``, ``point``,
    ``bytes``, ``msg`` (nested record of type ``cls``) or ``list`` (tuple of
    ``item`` values, where ``item`` is any of the other kinds).
    """
    spec = FieldSpec(tag, kind, cls, item, size, optional)
    if optional:
        return field(default=None, metadata={"tlv": spec})
    return field(metadata={"tlv": spec})


def _specs(cls: type) -> list[tuple[str, FieldSpec]]:
    out = [(f.name, f.metadata["tlv"]) for f in dataclasses.fields(cls) if "tlv" in f.metadata]
    return sorted(out, key=lambda x: x[1].tag)


def iter_items(data: bytes) -> Iterator[tuple[int, int, bytes]]:
    """Yield ``(tag, offset_of_value, value)`` for each top-level item."""
    pos = 0
    while pos < len(data):
        if pos + _HEAD.size > len(data):
            raise DecodeError("truncated item header")
        tag, length = _HEAD.unpack_from(data, pos)
        pos += _HEAD.size
        if pos + length > len(data):
            raise DecodeError("truncated item value")
        yield tag, pos, data[pos : pos + length]
        pos += length


def _enc_uint(v: int) -> bytes:
    if not isinstance(v, int) or v < 0:
        raise ValueError("uint fields must be non-negative integers")
    return v.to_bytes(max(1, (v.bit_length() + 7) // 8), "big")


def _dec_uint(b: bytes) -> int:
    if not b or (len(b) > 1 and b[0] == 0):
        raise DecodeError("non-canonical integer")
    return int.from_bytes(b, "big")


def _enc_value(kind: str, spec: FieldSpec, v: Any, curve: CurveConfig) -> bytes:
    if kind == "uint":
        return _enc_uint(v)
    if kind == "u8":
        return struct.pack(">B", v)
    if kind == "u16":
        return struct.pack(">H", v)
    if kind == "scalar":
        return curve.encode_scalar(v)
    if kind == "point":
        if not isinstance(v, Point):
            raise ValueError("expected a Point")
        return v.encode()
    if kind == "bytes":
        b = bytes(v)
        if spec.size is not None and len(b) != spec.size:
            raise ValueError(f"expected {spec.size} bytes")
        return b
    if kind == "msg":
        return encode(v, curve)
    if kind == "list":
        out = bytearray()
        for x in v:
            b = _enc_value(spec.item, spec, x, curve)
            out += struct.pack(">I", len(b)) + b
        return bytes(out)
    raise ValueError(f"unknown wire kind {kind!r}")


def _dec_value(kind: str, spec: FieldSpec, b: bytes, curve: CurveConfig) -> Any:
    try:
        if kind == "uint":
            return _dec_uint(b)
        if kind == "u8":
            if len(b) != 1:
                raise DecodeError("u8 must be one byte")
            return b[0]
        if kind == "u16":
            if len(b) != 2:
                raise DecodeError("u16 must be two bytes")
            return struct.unpack(">H", b)[0]
        if kind == "scalar":
            return curve.decode_scalar(b)
        if kind == "point":
            return curve.decode_point(b)
        if kind == "bytes":
            if spec.size is not None and len(b) != spec.size:
                raise DecodeError(f"expected {spec.size} bytes")
            return bytes(b)
        if kind == "msg":
            return decode(spec.cls, b, curve)
        if kind == "list":
            items, pos = [], 0
            while pos < len(b):
                if pos + 4 > len(b):
                    raise DecodeError("truncated list")
                (n,) = struct.unpack_from(">I", b, pos)
                pos += 4
                if pos + n > len(b):
                    raise DecodeError("truncated list item")
                items.append(_dec_value(spec.item, spec, b[pos : pos + n], curve))
                pos += n
            return tuple(items)
    except DecodeError:
        raise
    except ValueError as exc:
        raise DecodeError(str(exc)) from None
    raise DecodeError(f"unknown wire kind {kind!r}")


def encode(obj: Any, curve: CurveConfig = SECP256K1) -> bytes:
    out = bytearray()
    for name, spec in _specs(type(obj)):
        v = getattr(obj, name)
        if v is None:
            if spec.optional:
                continue
            raise ValueError(f"field {name} is required")
        b = _enc_value(spec.kind, spec, v, curve)
        out += _HEAD.pack(spec.tag, len(b)) + b
    return bytes(out)


def decode(cls: type, data: bytes, curve: CurveConfig = SECP256K1) -> Any:
    specs = _specs(cls)
    by_tag = {spec.tag: (name, spec) for name, spec in specs}
    values: dict[str, Any] = {}
    last = -1
    for tag, _, value in iter_items(data):
        if tag not in by_tag:
            raise DecodeError(f"unknown tag {tag} for {cls.__name__}")
        if tag <= last:
            raise DecodeError("tags out of order or duplicated")
        last = tag
        name, spec = by_tag[tag]
        values[name] = _dec_value(spec.kind, spec, value, curve)
    for name, spec in specs:
        if name not in values:
            if not spec.optional:
                raise DecodeError(f"missing field {name} in {cls.__name__}")
            values[name] = None
    return cls(**values)


def field_spans(cls: type, data: bytes, base: int = 0) -> list[tuple[str, int, int]]:
    """Map each encoded field of ``data`` to its ``(dotted name, start, end)`` value span.

    Nested records are expanded so tamper tooling can tell which field a byte
    offset belongs to.
    """
    specs = {spec.tag: (name, spec) for name, spec in _specs(cls)}
    spans: list[tuple[str, int, int]] = []
    for tag, off, value in iter_items(data):
        name, spec = specs[tag]
        if spec.kind == "msg":
            spans += [(f"{name}.{n}", s, e) for n, s, e in field_spans(spec.cls, value, base + off)]
        elif spec.kind == "list" and spec.item == "msg":
            pos = 0
            idx = 0
            while pos < len(value):
                (n,) = struct.unpack_from(">I", value, pos)
                pos += 4
                inner = value[pos : pos + n]
                spans += [
                    (f"{name}[{idx}].{m}", s, e)
                    for m, s, e in field_spans(spec.cls, inner, base + off + pos)
                ]
                pos += n
                idx += 1
        else:
            spans.append((name, base + off, base + off + len(value)))
    return spans
