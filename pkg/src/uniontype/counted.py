"""Observation counting on top of any constraint.

Merging adds counts, so ``a.merge(a) != a``: a Counted value is a
commutative monoid but not a semilattice.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .core import TyCost, Typelike
from .scalars import COUNT_MAX, saturating_add

__all__ = ["Counted"]


@dataclass(frozen=True)
class Counted(Typelike):
    count: int
    constraint: Typelike

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be non-negative")
        if self.count > COUNT_MAX:
            object.__setattr__(self, "count", COUNT_MAX)

    # The wrapped kind is needed by the class-level operations; ``over``
    # binds it in a small subclass.
    kind = None

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def over(kind) -> type:
        """The Counted monoid specialised to constraints of ``kind``."""
        return type(f"Counted[{kind.__name__}]", (Counted,), {"kind": kind})

    @classmethod
    def _kind(cls):
        if cls.kind is None:
            raise TypeError("use Counted.over(kind) for class-level operations")
        return cls.kind

    @classmethod
    def neutral(cls) -> "Counted":
        return cls(0, cls._kind().neutral())

    @classmethod
    def beyond(cls) -> "Counted":
        return cls(1, cls._kind().beyond())

    @classmethod
    def infer(cls, term) -> "Counted":
        return cls(1, cls._kind().infer(term))

    def merge(self, other: "Counted") -> "Counted":
        return type(self)(saturating_add(self.count, other.count),
                          self.constraint.merge(other.constraint))

    def is_neutral(self) -> bool:
        return self.count == 0 and self.constraint.is_neutral()

    def is_beyond(self) -> bool:
        return self.constraint.is_beyond()

    def check(self, term) -> bool:
        return self.constraint.check(term)

    def cost(self) -> TyCost:
        return self.constraint.cost()
