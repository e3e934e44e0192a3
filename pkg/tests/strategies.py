"""Hypothesis strategies for JSON terms and constraint values."""

from decimal import Decimal

from hypothesis import strategies as st

from uniontype.compound import (ArrayConstraint, MappingConstraint, ObjectConstraint,
                                RecordConstraint, RowConstraint, UnionType)
from uniontype.core import FreeType, fold_infer
from uniontype.counted import Counted
from uniontype.json_model import NULL, ArrayV, BoolV, NumberV, ObjectV, StringV
from uniontype.scalars import NumberConstraint, PresenceConstraint, StringConstraint

WORDS = ["yes", "no", "error", "red", "green", "blue", "alpha", "beta", "gamma", "delta",
         "epsilon", "zeta", "eta", "theta", "", "unavailable"]
DATES = ["2019-03-03", "2020-02-29", "1984-05-03", "1999-12-31"]
NOT_DATES = ["2019-02-30", "2019-13-01", "19-03-03", "2019/03/03"]
EMAILS = ["alice@example.com", "b.smith@mail.example.org", "x+y@a.io"]
KEYS = ["a", "b", "c", "d", "id", "name", "6408f5", "page size"]

strings = st.one_of(st.sampled_from(WORDS + DATES + NOT_DATES + EMAILS),
                    st.text(max_size=6))

integers = st.integers(min_value=-10**20, max_value=10**20).map(NumberV)
floats = st.decimals(allow_nan=False, allow_infinity=False, places=3,
                     min_value=-10**6, max_value=10**6).map(lambda d: NumberV(Decimal(d)))
numbers = st.one_of(integers, floats)

scalars = st.one_of(st.just(NULL), st.booleans().map(BoolV), numbers, strings.map(StringV))


def _objects(children):
    return st.dictionaries(st.sampled_from(KEYS), children, max_size=3).map(ObjectV.from_dict)


json_values = st.recursive(
    scalars,
    lambda children: st.one_of(st.lists(children, max_size=3).map(ArrayV), _objects(children)),
    max_leaves=6,
)
arrays = st.lists(json_values, max_size=4).map(ArrayV)
objects = _objects(json_values)


def folded(kind, terms, max_size=3):
    """Constraint values reachable by folding inference over a few terms."""
    return st.lists(terms, max_size=max_size).map(lambda ts: fold_infer(kind, ts))


CountedNumber = Counted.over(NumberConstraint)

# (kind, term strategy, beyond strategy)
INSTANCES = {
    "FreeType": (FreeType, json_values, st.just(FreeType.beyond())),
    "PresenceConstraint[bool]": (PresenceConstraint, st.booleans().map(BoolV),
                                 st.just(PresenceConstraint.beyond())),
    "PresenceConstraint[null]": (PresenceConstraint, st.just(NULL),
                                 st.just(PresenceConstraint.beyond())),
    "NumberConstraint": (NumberConstraint, numbers, st.just(NumberConstraint.beyond())),
    "StringConstraint": (StringConstraint, strings, st.just(StringConstraint.beyond())),
    "RowConstraint": (RowConstraint, arrays, st.just(RowConstraint.beyond())),
    "ArrayConstraint": (ArrayConstraint, arrays,
                        st.integers(0, 2).map(ArrayConstraint.beyond)),
    "RecordConstraint": (RecordConstraint, objects, st.just(RecordConstraint.beyond())),
    "MappingConstraint": (MappingConstraint, objects,
                          st.integers(0, 2).map(MappingConstraint.beyond)),
    "ObjectConstraint": (ObjectConstraint, objects,
                         st.integers(0, 2).map(ObjectConstraint.beyond)),
    "UnionType": (UnionType, json_values, st.integers(0, 2).map(UnionType.beyond)),
    "Counted[NumberConstraint]": (CountedNumber, numbers, st.just(CountedNumber.beyond())),
}

SEMILATTICES = [name for name in INSTANCES if not name.startswith("Counted")]


def values_of(name):
    kind, terms, _ = INSTANCES[name]
    return folded(kind, terms)


def beyonds_of(name):
    """Beyond elements: a generated top, possibly merged with more evidence."""
    _, _, beyond = INSTANCES[name]
    return st.tuples(beyond, values_of(name)).map(lambda bv: bv[0].merge(bv[1]))


def terms_of(name):
    return INSTANCES[name][1]
