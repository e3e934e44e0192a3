"""JSON term model and sample ingestion.

Values are immutable and hashable so they can be collected into sets
(see :class:`uniontype.core.FreeType`).  Numbers remember whether their
source token was integral (no fraction and no exponent).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from decimal import Decimal
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "NullV",
    "BoolV",
    "NumberV",
    "StringV",
    "ArrayV",
    "ObjectV",
    "JsonValue",
    "NULL",
    "JsonParseError",
    "DuplicateKeyWarning",
    "parse_document",
    "strip_comments",
    "load_samples",
    "serialize",
    "from_python",
    "to_python",
    "MODES",
]

MODES = ("whole-file", "json-lines", "array-elements")


@dataclass(frozen=True)
class NullV:
    def __repr__(self) -> str:
        return "NULL"


NULL = NullV()


@dataclass(frozen=True)
class BoolV:
    value: bool


@dataclass(frozen=True)
class NumberV:
    """A JSON number.

    ``int`` payloads are integral, ``Decimal`` payloads are not, whatever
    their numeric value: ``2.0`` is a float token.
    """

    value: Union[int, Decimal]
    integral: bool = field(init=False)

    def __post_init__(self):
        value = self.value
        if isinstance(value, bool):
            raise TypeError("booleans are not JSON numbers")
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"non-finite number {value!r}")
            value = Decimal(repr(value))
            object.__setattr__(self, "value", value)
        if isinstance(value, Decimal) and not value.is_finite():
            raise ValueError(f"non-finite number {value!r}")
        if not isinstance(value, (int, Decimal)):
            raise TypeError(f"unsupported number payload {type(value).__name__}")
        object.__setattr__(self, "integral", isinstance(value, int))


@dataclass(frozen=True)
class StringV:
    value: str


@dataclass(frozen=True)
class ArrayV:
    items: tuple = ()

    def __post_init__(self):
        if not isinstance(self.items, tuple):
            object.__setattr__(self, "items", tuple(self.items))

    def __iter__(self) -> Iterator["JsonValue"]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True, eq=False)
class ObjectV:
    """A JSON object.

    ``items`` keeps document order, but equality and hashing ignore it.
    """

    items: tuple = ()

    def __post_init__(self):
        items = tuple(self.items)
        keys = [k for k, _ in items]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate keys in object")
        object.__setattr__(self, "items", items)

    @classmethod
    def from_dict(cls, d) -> "ObjectV":
        return cls(tuple(d.items()))

    @cached_property
    def fields(self) -> dict:
        return dict(self.items)

    def keys(self) -> tuple:
        return tuple(k for k, _ in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ObjectV):
            return NotImplemented
        return self.fields == other.fields

    def __hash__(self) -> int:
        return hash(frozenset(self.items))


JsonValue = Union[NullV, BoolV, NumberV, StringV, ArrayV, ObjectV]


class JsonParseError(ValueError):
    """Malformed input; ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None, source: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.source or "<input>"
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        return f"{where}: {self.message}"


class DuplicateKeyWarning(UserWarning):
    pass


def from_python(obj) -> JsonValue:
    """Convert plain Python data (as produced by ``json.loads``) to a JsonValue."""
    if obj is None:
        return NULL
    if isinstance(obj, bool):
        return BoolV(obj)
    if isinstance(obj, (int, float, Decimal)):
        return NumberV(obj)
    if isinstance(obj, str):
        return StringV(obj)
    if isinstance(obj, (list, tuple)):
        return ArrayV(tuple(from_python(x) for x in obj))
    if isinstance(obj, dict):
        return ObjectV(tuple((k, from_python(v)) for k, v in obj.items()))
    if isinstance(obj, (NullV, BoolV, NumberV, StringV, ArrayV, ObjectV)):
        return obj
    raise TypeError(f"cannot convert {type(obj).__name__} to a JSON value")


def to_python(v: JsonValue):
    if isinstance(v, NullV):
        return None
    if isinstance(v, (BoolV, NumberV, StringV)):
        return v.value
    if isinstance(v, ArrayV):
        return [to_python(x) for x in v.items]
    return {k: to_python(x) for k, x in v.items}


def _pairs_hook(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            warnings.warn(f"duplicate key {key!r}; keeping the last value",
                          DuplicateKeyWarning, stacklevel=2)
        out[key] = value
    return out


def _reject_constant(name):
    raise ValueError(f"{name} is not valid JSON")


def parse_document(text, source: str | None = None) -> JsonValue:
    """Parse a single JSON document from ``str`` or UTF-8 ``bytes``."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise JsonParseError(f"input is not valid UTF-8 ({e.reason} at byte {e.start})",
                                 source=source) from None
    try:
        raw = json.loads(text, parse_float=Decimal, parse_int=int,
                         parse_constant=_reject_constant, object_pairs_hook=_pairs_hook)
    except json.JSONDecodeError as e:
        raise JsonParseError(e.msg, e.lineno, e.colno, source) from None
    except ValueError as e:
        raise JsonParseError(str(e), source=source) from None
    except RecursionError:
        raise JsonParseError("document nested too deeply", source=source) from None
    return from_python(raw)


def _is_comment(line) -> bool:
    return line.startswith(b"//" if isinstance(line, (bytes, bytearray)) else "//")


def strip_comments(lines: Sequence) -> list:
    """Drop lines that start with ``//``; keep everything else in order."""
    return [line for line in lines if not _is_comment(line)]


def _numbered_lines(data: bytes):
    if data.startswith(b"\xef\xbb\xbf"):
        data = data[3:]
    lines = data.split(b"\n")
    return [(n, line) for n, line in enumerate(lines, 1) if not _is_comment(line)]


def _parse_whole(data: bytes, source: str) -> list[JsonValue]:
    kept = _numbered_lines(data)
    body = b"\n".join(line for _, line in kept)
    if not body.strip():
        return []
    try:
        return [parse_document(body, source)]
    except JsonParseError as e:
        if e.line is not None and 1 <= e.line <= len(kept):
            e.line = kept[e.line - 1][0]
        raise


def _parse_lines(data: bytes, source: str) -> list[JsonValue]:
    out = []
    for number, line in _numbered_lines(data):
        if not line.strip():
            continue
        try:
            out.append(parse_document(line, source))
        except JsonParseError as e:
            e.line = number
            raise
    return out


def load_samples(paths: Iterable, mode: str = "whole-file") -> list[JsonValue]:
    """Read sample documents from files, in file order then line order.

    ``whole-file`` parses each file as one document, ``json-lines`` parses
    every non-blank line, ``array-elements`` is like ``whole-file`` but a
    top-level array contributes one sample per element.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    samples: list[JsonValue] = []
    for path in paths:
        path = Path(path)
        try:
            data = path.read_bytes()
        except OSError as e:
            raise OSError(f"{path}: {e.strerror or e}") from e
        if mode == "json-lines":
            samples.extend(_parse_lines(data, str(path)))
            continue
        docs = _parse_whole(data, str(path))
        if mode == "array-elements" and docs and isinstance(docs[0], ArrayV):
            samples.extend(docs[0].items)
        else:
            samples.extend(docs)
    return samples


def _number_text(n: NumberV) -> str:
    if n.integral:
        return str(n.value)
    text = str(n.value)
    if not any(c in text for c in ".eE"):
        text += ".0"
    return text


def serialize(v: JsonValue) -> str:
    """Compact JSON text with object keys sorted."""
    if isinstance(v, NullV):
        return "null"
    if isinstance(v, BoolV):
        return "true" if v.value else "false"
    if isinstance(v, NumberV):
        return _number_text(v)
    if isinstance(v, StringV):
        return json.dumps(v.value, ensure_ascii=False)
    if isinstance(v, ArrayV):
        return "[" + ",".join(serialize(x) for x in v.items) + "]"
    if isinstance(v, ObjectV):
        parts = (json.dumps(k, ensure_ascii=False) + ":" + serialize(x)
                 for k, x in sorted(v.items, key=lambda kv: kv[0]))
        return "{" + ",".join(parts) + "}"
    raise TypeError(f"not a JSON value: {v!r}")
