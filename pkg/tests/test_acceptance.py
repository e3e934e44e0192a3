"""Acceptance checks, one marked group per criterion.

A summary line per criterion is printed at the end of the pytest run.
"""

import io
import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from strategies import (INSTANCES, SEMILATTICES, CountedNumber, beyonds_of, json_values,
                        terms_of, values_of)
from uniontype.cli import CliConfig, run
from uniontype.compound import RecordConstraint, UnionType
from uniontype.core import INF, ZERO, TyCost
from uniontype.json_model import NumberV, ObjectV, StringV, from_python, load_samples, serialize
from uniontype.representation import Adt, ReprConfig, build_env, unify_similar_records
from uniontype.scalars import SCAny, SKind, StringConstraint
from uniontype.union_json import union_to_json

from conftest import FIXTURES


def infer_cli(paths, **kw):
    out, err = io.StringIO(), io.StringIO()
    status = run(CliConfig(paths=[str(p) for p in paths], **kw), out, err)
    return status, out.getvalue(), err.getvalue()


def corpus(name):
    return sorted((FIXTURES / name).glob("*.json"))


# 1. Law suites

@pytest.mark.criterion(1, "law suites")
@pytest.mark.parametrize("name", list(INSTANCES))
@given(data=st.data())
def test_monoid_laws(name, data):
    a, b, c = (data.draw(values_of(name)) for _ in range(3))
    neutral = INSTANCES[name][0].neutral()
    assert a.merge(b).merge(c) == a.merge(b.merge(c))
    assert a.merge(b) == b.merge(a)
    assert neutral.merge(a) == a
    assert a.merge(neutral) == a


@pytest.mark.criterion(1, "law suites")
@pytest.mark.parametrize("name", list(INSTANCES))
@given(data=st.data())
def test_beyond_laws(name, data):
    top = data.draw(beyonds_of(name))
    x = data.draw(values_of(name))
    t = data.draw(terms_of(name))
    assert top.is_beyond()
    assert top.merge(x).is_beyond()
    assert x.merge(top).is_beyond()
    assert top.check(t)


@pytest.mark.criterion(1, "law suites")
@pytest.mark.parametrize("name", list(INSTANCES))
@given(data=st.data())
def test_typing_laws(name, data):
    kind = INSTANCES[name][0]
    t = data.draw(terms_of(name))
    other = data.draw(values_of(name))
    a = kind.infer(t).merge(data.draw(values_of(name)))
    assert not kind.neutral().check(t)
    assert kind.infer(t).check(t)
    assert a.check(t)
    assert a.merge(other).check(t)
    assert other.merge(a).check(t)


# 2. Idempotence

@pytest.mark.criterion(2, "idempotence")
@pytest.mark.parametrize("name", SEMILATTICES)
@given(data=st.data())
def test_idempotent(name, data):
    a = data.draw(values_of(name))
    assert a.merge(a) == a


@pytest.mark.criterion(2, "idempotence")
def test_counted_is_not_idempotent():
    one = CountedNumber.infer(NumberV(1))
    twice = one.merge(one)
    assert twice.count == 2 and twice.constraint == one.constraint
    assert twice != one


@pytest.mark.criterion(2, "idempotence")
@given(st.lists(terms_of("Counted[NumberConstraint]"), min_size=1, max_size=5))
def test_counted_self_merge_doubles(terms):
    a = CountedNumber.neutral()
    for t in terms:
        a = a.merge(CountedNumber.infer(t))
    assert a.merge(a).count == 2 * a.count != a.count


# 3. Cost laws

@pytest.mark.criterion(3, "cost laws")
@pytest.mark.parametrize("name", list(INSTANCES))
def test_neutral_costs_nothing(name):
    assert INSTANCES[name][0].neutral().cost() == ZERO


@pytest.mark.criterion(3, "cost laws")
@settings(max_examples=200)
@given(st.lists(json_values, max_size=8))
def test_cost_never_drops_when_appending(samples):
    u = UnionType.neutral()
    previous = u.cost()
    for s in samples:
        u = u.merge(UnionType.infer(s))
        assert u.cost() >= previous
        previous = u.cost()


costs = st.one_of(st.integers(0, 10**6).map(TyCost.of), st.just(INF))


@pytest.mark.criterion(3, "cost laws")
@given(costs, costs, costs)
def test_tycost_commutative_monoid(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + ZERO == a == ZERO + a
    assert a + INF == INF


# 4. Enum boundary

TEN = ["red", "green", "blue", "cyan", "magenta", "yellow", "black", "white", "grey", "pink"]


@pytest.mark.criterion(4, "enum boundary")
def test_ten_strings_stay_an_enum():
    sc = StringConstraint.neutral()
    for s in TEN:
        sc = sc.merge(StringConstraint.infer(s))
    assert sc.kind is SKind.ENUM and len(sc.values) == 10
    assert sc.merge(StringConstraint.infer("orange")) == SCAny


@pytest.mark.criterion(4, "enum boundary")
@given(st.permutations(TEN + ["orange"]))
def test_eleventh_string_widens_in_any_order(words):
    sc = StringConstraint.neutral()
    for s in words:
        sc = sc.merge(StringConstraint.infer(s))
    assert sc == SCAny


@pytest.mark.criterion(4, "enum boundary")
def test_enum_example_self_merge():
    s = StringConstraint.enum([""]).merge(StringConstraint.enum(str(i) for i in range(9)))
    assert s.kind is SKind.ENUM and len(s.values) == 10
    assert s.merge(s) == s


# 5. Record with an empty object

@pytest.mark.criterion(5, "record and empty object")
def test_record_accepts_full_and_empty_object():
    ob = ObjectV.from_dict({})
    ob2 = ObjectV.from_dict({"a": StringV("b")})
    t = RecordConstraint.infer(ob2).merge(RecordConstraint.infer(ob))
    assert t.check(ob2), "non-empty object"
    assert t.check(ob), "empty object"


# 6. Representation fixtures

EXPECTED = {
    ("ex1a", ()): "type Root = Root { value: Email }\n",
    ("ex1b", ()): "type Root = Root { value: Int }\n",
    ("ex1c", ()): "type Root = Root { value: Date }\n",
    ("ex2", ()): "type Root = Root { page_size: Maybe Int }\n",
    ("ex3", ()): "type Root = Root { value: Int :|: String }\n",
    ("ex4", (("root_name", "Example4"),)):
        "type Example4 = Error { error: String, code: Int }"
        " | Message { message: String, uid: Int }\n",
    ("ex4", (("root_name", "Example4"), ("no_variant_split", True))):
        "type Example4 = Example4 { error: Maybe String, code: Maybe Int,"
        " message: Maybe String, uid: Maybe Int }\n",
    ("ex5", ()): "type Root = Root { field1: Int, field2: String, field3: Maybe Date }\n",
    ("ex6", (("root_name", "Example"),)):
        "type Example = Example { value: Map<String, ExampleElt> }\n"
        "type ExampleElt = ExampleElt { size: Int, height: Int, difficulty: Double,"
        " previous: String }\n",
    ("ex6_one", (("root_name", "Example"),)):
        "type Example = Example { f_6408f5: F_6408f5 }\n"
        "type F_6408f5 = F_6408f5 { size: Int, height: Int, difficulty: Double,"
        " previous: String }\n",
}


@pytest.mark.criterion(6, "representation fixtures")
@pytest.mark.parametrize("key", list(EXPECTED), ids=lambda k: k[0] + "".join(
    f"-{v}" for _, v in k[1]))
def test_fixture_declarations(key):
    name, opts = key
    status, out, _ = infer_cli(corpus(name), **dict(opts))
    assert status == 0
    assert out == EXPECTED[key]


def oracle_cost(d):
    """Cost computed from the JSON dump, independently of the library's cost methods."""
    if d == "UnionTop":
        return float("inf")
    parts = []
    for comp, v in d.items():
        if comp == "unionArr":
            row = v["rowCase"]
            row_cost = float("inf") if row == "RowTop" else sum(
                oracle_cost(c) for c in row["Row"])
            parts.append(min(row_cost, oracle_cost(v["arrayCase"])))
        elif comp == "unionObj":
            m = v["mappingCase"]
            mapping = (0 if m["keyConstraint"] == "SCNever" else 1) + oracle_cost(
                m["valueConstraint"])
            rec = v["recordCase"]
            record = float("inf") if rec == "RCTop" else sum(
                oracle_cost(f) for f in rec["RecordConstraint"]["fields"].values())
            parts.append(min(mapping, record))
        else:
            parts.append(1)
    return sum(parts) * len(parts)


def object_branch_costs(u):
    d = union_to_json(u)["unionObj"]
    m = d["mappingCase"]
    mapping = 1 + oracle_cost(m["valueConstraint"])
    record = sum(oracle_cost(f) for f in d["recordCase"]["RecordConstraint"]["fields"].values())
    return record, mapping


@pytest.mark.criterion(6, "representation fixtures")
def test_hash_map_cost_arithmetic():
    (three,) = load_samples(corpus("ex6"))
    (one,) = load_samples(corpus("ex6_one"))
    assert object_branch_costs(UnionType.infer(three)) == (12, 5)
    assert object_branch_costs(UnionType.infer(one)) == (4, 5)
    inner = UnionType.infer(one.fields["6408f5"])
    assert object_branch_costs(inner) == (4, 5)
    for u in (UnionType.infer(three), UnionType.infer(one), inner):
        record, mapping = object_branch_costs(u)
        assert u.obj.cost() == TyCost.of(min(record, mapping))


@pytest.mark.criterion(6, "representation fixtures")
@settings(max_examples=200)
@given(st.lists(json_values, min_size=1, max_size=5))
def test_cost_matches_oracle(samples):
    u = UnionType.neutral()
    for s in samples:
        u = u.merge(UnionType.infer(s))
    expected = oracle_cost(union_to_json(u))
    got = u.cost()
    assert (got.infinite and expected == float("inf")) or got == TyCost.of(expected)


# 7. Order invariance

CORPORA = ["ex1a", "ex1b", "ex1c", "ex2", "ex3", "ex4", "ex5", "ex6", "ex6_one", "unify",
           "disjoint", "empty_array"]


@pytest.mark.criterion(7, "order invariance")
@pytest.mark.parametrize("name", CORPORA)
def test_file_order_does_not_matter(name):
    files = corpus(name)
    outputs = {infer_cli(p)[1] for p in itertools.permutations(files)}
    assert len(outputs) == 1


@pytest.mark.criterion(7, "order invariance")
@pytest.mark.parametrize("name", CORPORA)
def test_line_order_does_not_matter(name, tmp_path):
    lines = []
    for p in corpus(name):
        lines.extend(serialize(s) for s in load_samples([p]))
    rng = random.Random(name)
    outputs = set()
    for i in range(6):
        rng.shuffle(lines)
        path = tmp_path / f"{i}.jsonl"
        path.write_text("\n".join(lines) + "\n")
        outputs.add(infer_cli([path], mode="json-lines")[1])
    assert len(outputs) == 1


# 8. Empty-input promotion

@pytest.mark.criterion(8, "empty input promotion")
def test_no_samples_gives_any_value():
    assert infer_cli([FIXTURES / "empty.json"])[1] == "type Root = Root { value: AnyValue }\n"
    assert infer_cli([])[1] == "type Root = Root { value: AnyValue }\n"


@pytest.mark.criterion(8, "empty input promotion")
def test_only_empty_arrays_give_any_value_elements():
    out = infer_cli(corpus("empty_array"))[1]
    assert out == "type Root = Root { value: [AnyValue] }\n"


# 9. Unification

@pytest.mark.criterion(9, "record unification")
def test_similar_records_share_a_name():
    status, out, err = infer_cli(corpus("unify"))
    assert status == 0
    assert out == ("type Root = Root { id: Int, a: A, b: A }\n"
                   "type A = A { p: Int, q: String, r: Bool, s: Int, t: Maybe Int }\n")
    assert "similarity 0.80" in err


@pytest.mark.criterion(9, "record unification")
def test_disjoint_records_stay_apart():
    out = infer_cli(corpus("disjoint"))[1]
    assert "left: Left, right: Right" in out


@pytest.mark.criterion(9, "record unification")
def test_no_unify_flag_disables_the_pass():
    out = infer_cli(corpus("unify"), no_unify=True)[1]
    assert "a: A, b: B" in out


LABELS = ["l0", "l1", "l2", "l3", "l4", "l5", "l6", "l7"]
VALUES = [1, "text", True]


def _record(labels):
    return {lab: VALUES[LABELS.index(lab) % 3] for lab in labels}


@pytest.mark.criterion(9, "record unification")
@given(st.sets(st.sampled_from(LABELS[3:])), st.sets(st.sampled_from(LABELS[3:])),
       st.sampled_from([0.5, 0.6, 0.75]))
def test_unification_follows_jaccard(extra_a, extra_b, threshold):
    a = set(LABELS[:3]) | extra_a
    b = set(LABELS[:3]) | extra_b
    doc = from_python({"id": 1, "a": _record(sorted(a)), "b": _record(sorted(b))})
    cfg = ReprConfig(unify_threshold=threshold)
    u, _ = unify_similar_records(UnionType.infer(doc), threshold, cfg)
    env = build_env(u, "Root", cfg)
    fields = dict(env.env["Root"].cons[0].args)
    similar = Fraction(len(a & b), len(a | b)) > Fraction(threshold).limit_denominator()
    assert (fields["a"] == fields["b"]) == similar
    records = [t for t in env.env.values() if isinstance(t, Adt) and t.kind == "record"
               and t.source is not None]
    for x, y in itertools.combinations(records, 2):
        lx, ly = set(x.source.field_map), set(y.source.field_map)
        assert Fraction(len(lx & ly), len(lx | ly)) <= Fraction(threshold).limit_denominator()
