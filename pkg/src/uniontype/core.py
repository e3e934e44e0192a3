"""Shared algebra for type constraints.

Every constraint is a commutative monoid: ``merge`` fuses the evidence of
two observations, ``neutral()`` is the constraint of no observations.
Some elements are *beyond*: they accept every term and stay beyond under
any further merge.  A constraint types terms through ``infer``/``check``
and reports a representation cost.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Iterable, TypeVar

from .json_model import JsonValue

__all__ = [
    "Typelike",
    "TyCost",
    "ZERO",
    "ONE",
    "INF",
    "FreeType",
    "fold_infer",
    "mconcat",
    "tree_fold",
    "gen_beyond",
]

T = TypeVar("T", bound="Typelike")


@functools.total_ordering
@dataclass(frozen=True)
class TyCost:
    """Non-negative cost with an absorbing infinity."""

    units: int = 0
    infinite: bool = False

    def __post_init__(self):
        if self.units < 0:
            raise ValueError("cost must be non-negative")
        if self.infinite and self.units:
            object.__setattr__(self, "units", 0)

    @classmethod
    def of(cls, n: int) -> "TyCost":
        return cls(n)

    def __add__(self, other: "TyCost") -> "TyCost":
        if not isinstance(other, TyCost):
            return NotImplemented
        if self.infinite or other.infinite:
            return INF
        return TyCost(self.units + other.units)

    def scale(self, k: int) -> "TyCost":
        if k == 0:
            return ZERO
        if self.infinite:
            return INF
        return TyCost(self.units * k)

    def __lt__(self, other: "TyCost") -> bool:
        if not isinstance(other, TyCost):
            return NotImplemented
        if self.infinite:
            return False
        return other.infinite or self.units < other.units

    def __repr__(self) -> str:
        return "TyCost(inf)" if self.infinite else f"TyCost({self.units})"

    def __str__(self) -> str:
        return "inf" if self.infinite else str(self.units)


ZERO = TyCost(0)
ONE = TyCost(1)
INF = TyCost(0, infinite=True)


class Typelike:
    """Mixin describing the constraint interface.

    Subclasses provide ``neutral``, ``merge``, ``is_beyond``, ``beyond``,
    ``infer`` and ``check``.  The default cost is 0 for the neutral element
    and 1 for anything else.
    """

    __slots__ = ()

    @classmethod
    def neutral(cls):
        raise NotImplementedError

    @classmethod
    def beyond(cls):
        raise NotImplementedError

    @classmethod
    def infer(cls, term):
        raise NotImplementedError

    def merge(self, other):
        raise NotImplementedError

    def is_beyond(self) -> bool:
        raise NotImplementedError

    def check(self, term) -> bool:
        raise NotImplementedError

    def is_neutral(self) -> bool:
        return self == type(self).neutral()

    def cost(self) -> TyCost:
        return ZERO if self.is_neutral() else ONE

    def __or__(self, other):
        if not isinstance(other, Typelike):
            return NotImplemented
        return self.merge(other)


def mconcat(neutral: T, items: Iterable[T]) -> T:
    return functools.reduce(lambda a, b: a.merge(b), items, neutral)


def fold_infer(kind, samples: Iterable) -> Typelike:
    """Merge ``kind.infer`` over all samples, starting from the neutral element."""
    return mconcat(kind.neutral(), (kind.infer(s) for s in samples))


def tree_fold(items: Iterable[T], merge: Callable[[T, T], T], neutral: T) -> T:
    """Pairwise (balanced) reduction; equal to a left fold for commutative monoids."""
    layer = list(items)
    if not layer:
        return neutral
    while len(layer) > 1:
        nxt = [merge(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return layer[0]


def gen_beyond(kind):
    """A representative beyond element of a constraint kind."""
    return kind.beyond()


@dataclass(frozen=True)
class FreeType(Typelike):
    """The set of observed terms, or ``Full`` once anything is allowed."""

    captured: frozenset = frozenset()
    full: bool = False

    def __post_init__(self):
        if not isinstance(self.captured, frozenset):
            object.__setattr__(self, "captured", frozenset(self.captured))
        if self.full and self.captured:
            object.__setattr__(self, "captured", frozenset())

    @classmethod
    def neutral(cls) -> "FreeType":
        return _FREE_EMPTY

    @classmethod
    def beyond(cls) -> "FreeType":
        return FULL

    @classmethod
    def infer(cls, term: JsonValue) -> "FreeType":
        return cls(frozenset([term]))

    def merge(self, other: "FreeType") -> "FreeType":
        if self.full or other.full:
            return FULL
        return FreeType(self.captured | other.captured)

    def is_beyond(self) -> bool:
        return self.full

    def check(self, term: JsonValue) -> bool:
        return self.full or term in self.captured

    def cost(self) -> TyCost:
        return INF if self.full else TyCost(len(self.captured))

    def __repr__(self) -> str:
        return "Full" if self.full else f"FreeType({set(self.captured)!r})"


_FREE_EMPTY = FreeType()
FULL = FreeType(full=True)
