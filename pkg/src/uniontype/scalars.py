"""Constraints for atomic values: presence (bool, null), strings, numbers."""

from __future__ import annotations

import contextlib
import contextvars
import datetime
import enum
import re
from dataclasses import dataclass, field

from .core import Typelike, TyCost, ZERO, ONE
from .json_model import NumberV

__all__ = [
    "PresenceConstraint",
    "BoolConstraint",
    "NullConstraint",
    "PRESENT",
    "ABSENT",
    "StringConstraint",
    "SCNever",
    "SCAny",
    "SCDate",
    "SCEmail",
    "NumberConstraint",
    "is_valid_date",
    "is_valid_email",
    "enum_limit",
    "get_enum_limit",
    "COUNT_MAX",
    "saturating_add",
]

COUNT_MAX = 2**63 - 1


def saturating_add(a: int, b: int) -> int:
    return min(a + b, COUNT_MAX)


class PresenceConstraint(Typelike, enum.Enum):
    """Two-point constraint: nothing seen yet, or at least one observation."""

    ABSENT = "Absent"
    PRESENT = "Present"

    @classmethod
    def neutral(cls):
        return cls.ABSENT

    @classmethod
    def beyond(cls):
        return cls.PRESENT

    @classmethod
    def infer(cls, term=None):
        return cls.PRESENT

    def merge(self, other):
        if self is PresenceConstraint.PRESENT or other is PresenceConstraint.PRESENT:
            return PresenceConstraint.PRESENT
        return PresenceConstraint.ABSENT

    def is_beyond(self) -> bool:
        return self is PresenceConstraint.PRESENT

    def check(self, term=None) -> bool:
        return self is PresenceConstraint.PRESENT

    def cost(self) -> TyCost:
        return ONE if self is PresenceConstraint.PRESENT else ZERO

    def __repr__(self) -> str:
        return self.value


BoolConstraint = PresenceConstraint
NullConstraint = PresenceConstraint
PRESENT = PresenceConstraint.PRESENT
ABSENT = PresenceConstraint.ABSENT


_ENUM_LIMIT = contextvars.ContextVar("enum_limit", default=10)


def get_enum_limit() -> int:
    return _ENUM_LIMIT.get()


@contextlib.contextmanager
def enum_limit(n: int):
    """Temporarily change the largest enumeration kept by string merges."""
    if n < 1:
        raise ValueError("enum limit must be at least 1")
    token = _ENUM_LIMIT.set(n)
    try:
        yield n
    finally:
        _ENUM_LIMIT.reset(token)


_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}", re.ASCII)
_ATOM = r"[A-Za-z0-9!#$%&'*+/=?^_`{|}~-]+"
_LOCAL_RE = re.compile(rf"{_ATOM}(?:\.{_ATOM})*")
_LABEL_RE = re.compile(r"[A-Za-z0-9](?:[A-Za-z0-9-]{0,61}[A-Za-z0-9])?")


def is_valid_date(s: str) -> bool:
    """Strict ``YYYY-MM-DD`` naming a real calendar day."""
    if not _DATE_RE.fullmatch(s):
        return False
    try:
        datetime.date.fromisoformat(s)
    except ValueError:
        return False
    return True


def is_valid_email(s: str) -> bool:
    """Syntactic ``local@domain`` check: dot-atom local part, dotted DNS domain."""
    if len(s) > 254 or s.count("@") != 1:
        return False
    local, _, domain = s.partition("@")
    if not local or len(local) > 64 or not _LOCAL_RE.fullmatch(local):
        return False
    labels = domain.split(".")
    if len(labels) < 2:
        return False
    return all(_LABEL_RE.fullmatch(label) for label in labels)


class SKind(enum.IntEnum):
    NEVER = 0
    DATE = 1
    EMAIL = 2
    ENUM = 3
    ANY = 4


@dataclass(frozen=True)
class StringConstraint(Typelike):
    """Strings seen so far: dates, emails, a small enumeration, or anything.

    ``counts`` records how often each enumerated value was observed.  It is
    evidence for the representation step and is ignored by equality.
    """

    kind: SKind
    values: frozenset = frozenset()
    counts: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind is SKind.ENUM:
            if not self.values:
                raise ValueError("an enumeration needs at least one value")
            if not isinstance(self.values, frozenset):
                object.__setattr__(self, "values", frozenset(self.values))
            if not self.counts:
                object.__setattr__(self, "counts", tuple((v, 1) for v in sorted(self.values)))
        elif self.values:
            raise ValueError(f"{self.kind.name} carries no values")

    @classmethod
    def enum(cls, values, counts=None) -> "StringConstraint":
        values = frozenset(values)
        if counts is None:
            counts = {v: 1 for v in values}
        return cls(SKind.ENUM, values, tuple(sorted(counts.items())))

    @classmethod
    def neutral(cls):
        return SCNever

    @classmethod
    def beyond(cls):
        return SCAny

    @classmethod
    def infer(cls, s: str) -> "StringConstraint":
        if is_valid_date(s):
            return SCDate
        if is_valid_email(s):
            return SCEmail
        return cls(SKind.ENUM, frozenset([s]), ((s, 1),))

    @property
    def count_map(self) -> dict:
        return dict(self.counts)

    def merge(self, other: "StringConstraint") -> "StringConstraint":
        if self.kind is SKind.NEVER:
            return other
        if other.kind is SKind.NEVER:
            return self
        if self.kind is SKind.ANY or other.kind is SKind.ANY:
            return SCAny
        if self.kind is other.kind and self.kind in (SKind.DATE, SKind.EMAIL):
            return self
        if self.kind is SKind.ENUM and other.kind is SKind.ENUM:
            values = self.values | other.values
            if len(values) <= get_enum_limit():
                counts = self.count_map
                for v, n in other.counts:
                    counts[v] = saturating_add(counts.get(v, 0), n)
                return StringConstraint(SKind.ENUM, values, tuple(sorted(counts.items())))
        return SCAny

    def is_beyond(self) -> bool:
        return self.kind is SKind.ANY

    def check(self, s: str) -> bool:
        kind = self.kind
        if kind is SKind.DATE:
            return is_valid_date(s)
        if kind is SKind.EMAIL:
            return is_valid_email(s)
        if kind is SKind.ENUM:
            return s in self.values
        return kind is SKind.ANY

    def cost(self) -> TyCost:
        return ZERO if self.kind is SKind.NEVER else ONE

    def __repr__(self) -> str:
        if self.kind is SKind.ENUM:
            return f"SCEnum({sorted(self.values)!r})"
        return "SC" + self.kind.name.capitalize()


SCNever = StringConstraint(SKind.NEVER)
SCAny = StringConstraint(SKind.ANY)
SCDate = StringConstraint(SKind.DATE)
SCEmail = StringConstraint(SKind.EMAIL)


class NumberConstraint(Typelike, enum.Enum):
    NEVER = "NCNever"
    INT = "NCInt"
    FLOAT = "NCFloat"

    @classmethod
    def neutral(cls):
        return cls.NEVER

    @classmethod
    def beyond(cls):
        return cls.FLOAT

    @classmethod
    def infer(cls, n: NumberV):
        return cls.INT if n.integral else cls.FLOAT

    def merge(self, other):
        if self is NumberConstraint.NEVER:
            return other
        if other is NumberConstraint.NEVER:
            return self
        if self is NumberConstraint.INT and other is NumberConstraint.INT:
            return self
        return NumberConstraint.FLOAT

    def is_beyond(self) -> bool:
        return self is NumberConstraint.FLOAT

    def check(self, n: NumberV) -> bool:
        if self is NumberConstraint.INT:
            return n.integral
        return self is NumberConstraint.FLOAT

    def cost(self) -> TyCost:
        return ZERO if self is NumberConstraint.NEVER else ONE

    def __repr__(self) -> str:
        return self.value
