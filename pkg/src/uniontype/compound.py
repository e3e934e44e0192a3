"""Constraints for arrays and objects, and the union type that combines them.

Arrays are tracked both as homogeneous sequences and as fixed-width rows;
objects both as records and as string-keyed mappings.  The choice between
the alternatives is made later, by cost.
"""

from __future__ import annotations

import contextvars
import enum
import functools
from dataclasses import dataclass, field
from typing import Optional

from .core import INF, ZERO, TyCost, Typelike, mconcat
from .json_model import ArrayV, BoolV, JsonValue, NullV, NumberV, ObjectV, StringV
from .scalars import (ABSENT, PRESENT, NumberConstraint, PresenceConstraint, SCAny,
                      SCNever, StringConstraint, saturating_add)

__all__ = [
    "UnionType",
    "UNION_TOP",
    "RowConstraint",
    "ArrayConstraint",
    "RecordConstraint",
    "MappingConstraint",
    "ObjectConstraint",
    "jaccard",
]


# Arrays and objects keep two readings of the same children, so a nested
# value appears twice one level up.  Inference shares the child objects
# between both readings, and union operations are memoised on object
# identity for the duration of one outermost call; together this keeps the
# work linear in the size of the shared structure instead of exponential
# in nesting depth.
_MEMO = contextvars.ContextVar("union_memo", default=None)


def _memoised(op):
    @functools.wraps(op)
    def wrapper(self, other):
        memo = _MEMO.get()
        if memo is None:
            token = _MEMO.set({})
            try:
                return wrapper(self, other)
            finally:
                _MEMO.reset(token)
        key = (op.__name__, id(self), id(other))
        hit = memo.get(key)
        if hit is None:
            # Operands are stored so their ids stay valid while the memo lives.
            hit = memo[key] = (self, other, op(self, other))
        return hit[2]
    return wrapper


class RowKind(enum.Enum):
    NEVER = "RowNever"
    ROW = "Row"
    TOP = "RowTop"


@dataclass(frozen=True)
class RowConstraint(Typelike):
    """Per-position typing of arrays; rows of different widths give ``RowTop``."""

    kind: RowKind
    columns: tuple = ()

    @classmethod
    def row(cls, columns) -> "RowConstraint":
        return cls(RowKind.ROW, tuple(columns))

    @classmethod
    def neutral(cls):
        return ROW_NEVER

    @classmethod
    def beyond(cls):
        return ROW_TOP

    @classmethod
    def infer(cls, arr: ArrayV) -> "RowConstraint":
        return cls(RowKind.ROW, tuple(UnionType.infer(v) for v in arr.items))

    def merge(self, other: "RowConstraint") -> "RowConstraint":
        if self.kind is RowKind.NEVER:
            return other
        if other.kind is RowKind.NEVER:
            return self
        if self.kind is RowKind.TOP or other.kind is RowKind.TOP:
            return ROW_TOP
        if len(self.columns) != len(other.columns):
            return ROW_TOP
        return RowConstraint(RowKind.ROW,
                             tuple(a.merge(b) for a, b in zip(self.columns, other.columns)))

    def is_beyond(self) -> bool:
        return self.kind is RowKind.TOP

    def check(self, arr: ArrayV) -> bool:
        if self.kind is RowKind.TOP:
            return True
        if self.kind is RowKind.NEVER:
            return False
        return (len(arr.items) == len(self.columns)
                and all(c.check(v) for c, v in zip(self.columns, arr.items)))

    def cost(self) -> TyCost:
        if self.kind is RowKind.TOP:
            return INF
        return sum((c.cost() for c in self.columns), ZERO)

    def __repr__(self) -> str:
        if self.kind is RowKind.ROW:
            return f"Row({list(self.columns)!r})"
        return self.kind.value


ROW_NEVER = RowConstraint(RowKind.NEVER)
ROW_TOP = RowConstraint(RowKind.TOP)


@dataclass(frozen=True)
class ArrayConstraint(Typelike):
    """Both readings of an array at once.  ``None`` cases mean no array seen."""

    row_case: Optional[RowConstraint] = None
    array_case: Optional["UnionType"] = None

    def __post_init__(self):
        if (self.row_case is None) != (self.array_case is None):
            raise ValueError("row_case and array_case are set together")

    @property
    def never(self) -> bool:
        return self.row_case is None

    @classmethod
    def neutral(cls):
        return ARRAY_NEVER

    @classmethod
    def beyond(cls, depth: int = 0) -> "ArrayConstraint":
        return cls(ROW_TOP, UnionType.beyond(depth))

    @classmethod
    def infer(cls, arr: ArrayV) -> "ArrayConstraint":
        items = tuple(UnionType.infer(v) for v in arr.items)
        return cls(RowConstraint(RowKind.ROW, items), mconcat(UnionType.neutral(), items))

    def merge(self, other: "ArrayConstraint") -> "ArrayConstraint":
        if self.never:
            return other
        if other.never:
            return self
        return ArrayConstraint(self.row_case.merge(other.row_case),
                               self.array_case.merge(other.array_case))

    def is_beyond(self) -> bool:
        return not self.never and self.row_case.is_beyond() and self.array_case.is_beyond()

    def check(self, arr: ArrayV) -> bool:
        if self.never:
            return False
        return self.row_case.check(arr) and all(self.array_case.check(v) for v in arr.items)

    def cost(self) -> TyCost:
        if self.never:
            return ZERO
        return min(self.row_case.cost(), self.array_case.cost())

    def __repr__(self) -> str:
        if self.never:
            return "ArrayNever"
        return f"ArrayConstraint(row_case={self.row_case!r}, array_case={self.array_case!r})"


ARRAY_NEVER = ArrayConstraint()


class RecordKind(enum.Enum):
    BOTTOM = "RCBottom"
    DATA = "RecordConstraint"
    TOP = "RCTop"


def _merge_counted(a: tuple, b: tuple) -> tuple:
    counts = dict(a)
    for key, n in b:
        counts[key] = saturating_add(counts.get(key, 0), n)
    return tuple(sorted(counts.items()))


@dataclass(frozen=True)
class RecordConstraint(Typelike):
    """Objects read as records with named fields.

    ``fields`` is sorted by key.  ``keysets`` counts the observed key
    sequences (in document order); the counts are evidence only and do not
    take part in equality, but the set of observed shapes does.
    """

    kind: RecordKind
    fields: tuple = ()
    keysets: tuple = field(default=(), compare=False)
    shapes: frozenset = field(init=False, default=frozenset())

    def __post_init__(self):
        if self.kind is not RecordKind.DATA and (self.fields or self.keysets):
            raise ValueError(f"{self.kind.value} carries no fields")
        object.__setattr__(self, "shapes", frozenset(k for k, _ in self.keysets))

    @classmethod
    def data(cls, fields, keysets=()) -> "RecordConstraint":
        items = fields.items() if isinstance(fields, dict) else fields
        ks = keysets.items() if isinstance(keysets, dict) else keysets
        return cls(RecordKind.DATA, tuple(sorted(items, key=lambda kv: kv[0])),
                   tuple(sorted((tuple(k), n) for k, n in ks)))

    @property
    def field_map(self) -> dict:
        return dict(self.fields)

    @property
    def observed_keysets(self) -> dict:
        """Observed key *sets* with their sample counts."""
        out: dict = {}
        for seq, n in self.keysets:
            key = frozenset(seq)
            out[key] = saturating_add(out.get(key, 0), n)
        return out

    @property
    def sample_count(self) -> int:
        return sum(n for _, n in self.keysets)

    @classmethod
    def neutral(cls):
        return RC_BOTTOM

    @classmethod
    def beyond(cls):
        return RC_TOP

    @classmethod
    def infer(cls, obj: ObjectV) -> "RecordConstraint":
        return cls(RecordKind.DATA,
                   tuple(sorted(((k, UnionType.infer(v)) for k, v in obj.items),
                                key=lambda kv: kv[0])),
                   ((obj.keys(), 1),))

    def merge(self, other: "RecordConstraint") -> "RecordConstraint":
        if self.kind is RecordKind.BOTTOM:
            return other
        if other.kind is RecordKind.BOTTOM:
            return self
        if self.kind is RecordKind.TOP or other.kind is RecordKind.TOP:
            return RC_TOP
        merged = dict(self.fields)
        for key, u in other.fields:
            merged[key] = merged[key].merge(u) if key in merged else u
        return RecordConstraint(RecordKind.DATA, tuple(sorted(merged.items())),
                                _merge_counted(self.keysets, other.keysets))

    def is_beyond(self) -> bool:
        return self.kind is RecordKind.TOP

    def is_optional(self, key: str) -> bool:
        """Some observed object lacked this key."""
        return any(key not in seq for seq in self.shapes)

    def check(self, obj: ObjectV) -> bool:
        if self.kind is RecordKind.TOP:
            return True
        if self.kind is RecordKind.BOTTOM:
            return False
        fields = self.field_map
        values = obj.fields
        if any(k not in fields for k in values):
            return False
        for key, u in fields.items():
            if key in values:
                if not u.check(values[key]):
                    return False
            elif not (u.nullable or u.is_neutral() or self.is_optional(key)):
                return False
        return True

    def cost(self) -> TyCost:
        if self.kind is RecordKind.TOP:
            return INF
        return sum((u.cost() for _, u in self.fields), ZERO)

    def __repr__(self) -> str:
        if self.kind is RecordKind.DATA:
            return f"RecordConstraint({dict(self.fields)!r})"
        return self.kind.value


RC_BOTTOM = RecordConstraint(RecordKind.BOTTOM)
RC_TOP = RecordConstraint(RecordKind.TOP)


@dataclass(frozen=True)
class MappingConstraint(Typelike):
    """Objects read as maps from string keys to one value type."""

    key: Optional[StringConstraint] = None
    value: Optional["UnionType"] = None

    def __post_init__(self):
        if (self.key is None) != (self.value is None):
            raise ValueError("key and value are set together")

    @property
    def never(self) -> bool:
        return self.key is None

    @classmethod
    def neutral(cls):
        return MAPPING_NEVER

    @classmethod
    def beyond(cls, depth: int = 0) -> "MappingConstraint":
        return cls(SCAny, UnionType.beyond(depth))

    @classmethod
    def infer(cls, obj: ObjectV) -> "MappingConstraint":
        return cls(mconcat(SCNever, (StringConstraint.infer(k) for k, _ in obj.items)),
                   mconcat(UnionType.neutral(), (UnionType.infer(v) for _, v in obj.items)))

    def merge(self, other: "MappingConstraint") -> "MappingConstraint":
        if self.never:
            return other
        if other.never:
            return self
        return MappingConstraint(self.key.merge(other.key), self.value.merge(other.value))

    def is_beyond(self) -> bool:
        return not self.never and self.key.is_beyond() and self.value.is_beyond()

    def check(self, obj: ObjectV) -> bool:
        if self.never:
            return False
        return all(self.key.check(k) and self.value.check(v) for k, v in obj.items)

    def cost(self) -> TyCost:
        if self.never:
            return ZERO
        return self.key.cost() + self.value.cost()

    def __repr__(self) -> str:
        if self.never:
            return "MappingNever"
        return f"MappingConstraint(key={self.key!r}, value={self.value!r})"


MAPPING_NEVER = MappingConstraint()


@dataclass(frozen=True)
class ObjectConstraint(Typelike):
    """Record and mapping evidence gathered side by side; a term must satisfy both."""

    mapping_case: Optional[MappingConstraint] = None
    record_case: Optional[RecordConstraint] = None

    def __post_init__(self):
        if (self.mapping_case is None) != (self.record_case is None):
            raise ValueError("mapping_case and record_case are set together")

    @property
    def never(self) -> bool:
        return self.mapping_case is None

    @classmethod
    def neutral(cls):
        return OBJECT_NEVER

    @classmethod
    def beyond(cls, depth: int = 0) -> "ObjectConstraint":
        return cls(MappingConstraint.beyond(depth), RC_TOP)

    @classmethod
    def infer(cls, obj: ObjectV) -> "ObjectConstraint":
        values = [(k, UnionType.infer(v)) for k, v in obj.items]
        mapping = MappingConstraint(
            mconcat(SCNever, (StringConstraint.infer(k) for k, _ in obj.items)),
            mconcat(UnionType.neutral(), (u for _, u in values)))
        record = RecordConstraint(RecordKind.DATA, tuple(sorted(values, key=lambda kv: kv[0])),
                                  ((obj.keys(), 1),))
        return cls(mapping, record)

    def merge(self, other: "ObjectConstraint") -> "ObjectConstraint":
        if self.never:
            return other
        if other.never:
            return self
        return ObjectConstraint(self.mapping_case.merge(other.mapping_case),
                                self.record_case.merge(other.record_case))

    def is_beyond(self) -> bool:
        return (not self.never and self.mapping_case.is_beyond()
                and self.record_case.is_beyond())

    def check(self, obj: ObjectV) -> bool:
        if self.never:
            return False
        return self.mapping_case.check(obj) and self.record_case.check(obj)

    def cost(self) -> TyCost:
        if self.never:
            return ZERO
        return min(self.mapping_case.cost(), self.record_case.cost())

    def __repr__(self) -> str:
        if self.never:
            return "ObjectNever"
        return (f"ObjectConstraint(mapping_case={self.mapping_case!r}, "
                f"record_case={self.record_case!r})")


OBJECT_NEVER = ObjectConstraint()


@dataclass(frozen=True)
class UnionType(Typelike):
    """One constraint per JSON constructor, each gathering evidence on its own.

    ``top`` marks the distinguished any-value element; it terminates the
    otherwise infinite nesting of an all-beyond union (arrays of arrays ...).
    """

    null: PresenceConstraint = ABSENT
    bool: PresenceConstraint = ABSENT
    num: NumberConstraint = NumberConstraint.NEVER
    str: StringConstraint = SCNever
    arr: ArrayConstraint = ARRAY_NEVER
    obj: ObjectConstraint = OBJECT_NEVER
    top: bool = False

    @classmethod
    def neutral(cls) -> "UnionType":
        return UNION_NEUTRAL

    @classmethod
    def beyond(cls, depth: int = 0) -> "UnionType":
        """All components beyond; nested unions bottom out in ``UNION_TOP``."""
        if depth <= 0:
            inner_arr = ArrayConstraint(ROW_TOP, UNION_TOP)
            inner_obj = ObjectConstraint(MappingConstraint(SCAny, UNION_TOP), RC_TOP)
        else:
            inner_arr = ArrayConstraint.beyond(depth - 1)
            inner_obj = ObjectConstraint.beyond(depth - 1)
        return cls(PRESENT, PRESENT, NumberConstraint.FLOAT, SCAny, inner_arr, inner_obj)

    @classmethod
    def infer(cls, v: JsonValue) -> "UnionType":
        if isinstance(v, NullV):
            return cls(null=PRESENT)
        if isinstance(v, BoolV):
            return cls(bool=PRESENT)
        if isinstance(v, NumberV):
            return cls(num=NumberConstraint.infer(v))
        if isinstance(v, StringV):
            return cls(str=StringConstraint.infer(v.value))
        if isinstance(v, ArrayV):
            return cls(arr=ArrayConstraint.infer(v))
        if isinstance(v, ObjectV):
            return cls(obj=ObjectConstraint.infer(v))
        raise TypeError(f"not a JSON value: {v!r}")

    @_memoised
    def merge(self, other: "UnionType") -> "UnionType":
        if self.top or other.top:
            return UNION_TOP
        if self is UNION_NEUTRAL:
            return other
        if other is UNION_NEUTRAL:
            return self
        return UnionType(self.null.merge(other.null), self.bool.merge(other.bool),
                         self.num.merge(other.num), self.str.merge(other.str),
                         self.arr.merge(other.arr), self.obj.merge(other.obj))

    @property
    def components(self) -> tuple:
        return (self.null, self.bool, self.num, self.str, self.arr, self.obj)

    @property
    def nullable(self) -> bool:
        return self.top or self.null is PRESENT

    def is_beyond(self) -> bool:
        return self.top or all(c.is_beyond() for c in self.components)

    @_memoised
    def check(self, v: JsonValue) -> bool:
        if self.top:
            return True
        if isinstance(v, NullV):
            return self.null.check(None)
        if isinstance(v, BoolV):
            return self.bool.check(v.value)
        if isinstance(v, NumberV):
            return self.num.check(v)
        if isinstance(v, StringV):
            return self.str.check(v.value)
        if isinstance(v, ArrayV):
            return self.arr.check(v)
        if isinstance(v, ObjectV):
            return self.obj.check(v)
        return False

    def alternatives(self) -> int:
        return sum(1 for c in self.components if not c.is_neutral())

    def cost(self) -> TyCost:
        """Sum of component costs, scaled by the number of alternatives present.

        A single alternative costs exactly its component; every extra
        alternative makes each branch of the variant dearer to handle.
        """
        cached = self.__dict__.get("_cost")
        if cached is None:
            if self.top:
                cached = INF
            else:
                total = sum((c.cost() for c in self.components), ZERO)
                cached = total.scale(self.alternatives())
            self.__dict__["_cost"] = cached
        return cached

    def __hash__(self) -> int:
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = self.__dict__["_hash"] = hash(self.components + (self.top,))
        return cached

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, UnionType):
            return NotImplemented
        if hash(self) != hash(other):
            return False
        return self._same(other)

    @_memoised
    def _same(self, other: "UnionType") -> bool:
        return self.top == other.top and self.components == other.components

    def __repr__(self) -> str:
        if self.top:
            return "UnionTop"
        parts = [f"{name}={c!r}" for name, c in zip(
            ("null", "bool", "num", "str", "arr", "obj"), self.components)
            if not c.is_neutral()]
        return f"UnionType({', '.join(parts)})"


UNION_NEUTRAL = UnionType()
UNION_TOP = UnionType(top=True)


def jaccard(a, b) -> float:
    """|a ∩ b| / |a ∪ b| of two label sets; two empty sets are identical."""
    a, b = set(a), set(b)
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)
