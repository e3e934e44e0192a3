"""From an inferred UnionType to a named environment of type declarations.

A representation tree is built from ``Ref``, ``App`` and ``Adt`` nodes.
Anonymous ``Adt`` nodes are later hoisted into a :class:`ReprEnv` under
names derived from the fields that contain them.  Where a constraint has
two possible readings (record or mapping, row or array) the cheaper one
is chosen, ties going to the first-named reading.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .compound import (ArrayConstraint, MappingConstraint, ObjectConstraint, RecordConstraint,
                       RecordKind, RowConstraint, RowKind, UnionType, jaccard)
from .core import mconcat
from .scalars import PRESENT, NumberConstraint, PresenceConstraint, SKind, StringConstraint

__all__ = [
    "Ref",
    "App",
    "Adt",
    "ConsRepr",
    "TypeRepr",
    "ReprEnv",
    "ReprConfig",
    "ReprError",
    "PREDEFINED",
    "ANY",
    "to_repr",
    "join_alts",
    "prepend_nullable",
    "scalar_to_reprs",
    "array_to_reprs",
    "object_to_reprs",
    "record_to_repr",
    "variant_split",
    "assign_names",
    "promote_empty",
    "unify_similar_records",
    "build_env",
    "validate",
    "sanitize_field",
    "type_name_hint",
]

PREDEFINED = frozenset({"AnyValue", "Unit", "Double", "String", "Int", "Date", "Email",
                        "Bool", "Maybe", "Map", "Alt", "List"})


class ReprError(ValueError):
    pass


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class App:
    name: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ReprError(f"application of {self.name} needs arguments")


@dataclass(frozen=True)
class ConsRepr:
    name: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(tuple(a) for a in self.args))


@dataclass(frozen=True)
class Adt:
    """Algebraic data type.  ``kind`` is record, variant, row or enum.

    ``source`` keeps the record constraint the type was built from; neither
    it nor ``kind`` takes part in equality.
    """

    cons: tuple
    kind: str = field(default="record", compare=False)
    source: Optional[RecordConstraint] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "cons", tuple(self.cons))
        if not self.cons:
            raise ReprError("a data type needs at least one constructor")


TypeRepr = Union[Ref, App, Adt]
ANY = Ref("AnyValue")


@dataclass(frozen=True)
class ReprEnv:
    toplevel: str
    env: dict

    def __post_init__(self):
        if self.toplevel not in self.env:
            raise ReprError(f"toplevel type {self.toplevel} is not declared")

    def order(self) -> list:
        """Declared names in depth-first preorder from the toplevel."""
        seen: list = []

        def walk_type(t):
            if isinstance(t, Ref):
                if t.name in self.env and t.name not in seen:
                    seen.append(t.name)
                    walk_decl(self.env[t.name])
            elif isinstance(t, App):
                for a in t.args:
                    walk_type(a)
            else:
                walk_decl(t)

        def walk_decl(t):
            if isinstance(t, Adt):
                for c in t.cons:
                    for _, a in c.args:
                        walk_type(a)
            else:
                walk_type(t)

        walk_type(Ref(self.toplevel))
        return seen


@dataclass(frozen=True)
class ReprConfig:
    variant_split: bool = True
    max_variants: int = 10
    enum_min_support: float = 2.0
    unify: bool = True
    unify_threshold: float = 0.6

    def __post_init__(self):
        if self.max_variants < 1:
            raise ValueError("max_variants must be at least 1")
        if not 0 < self.unify_threshold <= 1:
            raise ValueError("unify_threshold must be in (0, 1]")


DEFAULT_CONFIG = ReprConfig()


def join_alts(alts) -> TypeRepr:
    alts = list(alts)
    if not alts:
        return ANY
    result = alts[-1]
    for t in reversed(alts[:-1]):
        result = App("Alt", (t, result))
    return result


def prepend_nullable(t: TypeRepr) -> TypeRepr:
    if isinstance(t, App) and t.name == "Maybe":
        return t
    return App("Maybe", (t,))


def _enum_repr(sc: StringConstraint, cfg: ReprConfig) -> list:
    counts = sc.count_map
    total = sum(counts.get(v, 1) for v in sc.values)
    if len(sc.values) < 2 or total < cfg.enum_min_support * len(sc.values):
        return [Ref("String")]
    ordered = sorted(sc.values, key=lambda v: (-counts.get(v, 1), v))
    names = _dedupe([type_name_hint(v) for v in ordered])
    return [Adt(tuple(ConsRepr(n) for n in names), kind="enum")]


def scalar_to_reprs(c, cfg: ReprConfig = DEFAULT_CONFIG) -> list:
    """Representations of one atomic component; empty for the neutral element."""
    if isinstance(c, PresenceConstraint):
        return [Ref("Bool")] if c is PRESENT else []
    if isinstance(c, NumberConstraint):
        return {NumberConstraint.NEVER: [], NumberConstraint.INT: [Ref("Int")],
                NumberConstraint.FLOAT: [Ref("Double")]}[c]
    if isinstance(c, StringConstraint):
        if c.kind is SKind.ENUM:
            return _enum_repr(c, cfg)
        return {SKind.NEVER: [], SKind.DATE: [Ref("Date")], SKind.EMAIL: [Ref("Email")],
                SKind.ANY: [Ref("String")]}[c.kind]
    raise TypeError(f"not an atomic constraint: {c!r}")


def _row_repr(row: RowConstraint, cfg: ReprConfig) -> TypeRepr:
    return Adt((ConsRepr("", tuple(("", to_repr(u, cfg)) for u in row.columns)),), kind="row")


def prefers_row(c: ArrayConstraint) -> bool:
    return c.row_case.kind is RowKind.ROW and c.row_case.cost() < c.array_case.cost()


def array_to_reprs(c: ArrayConstraint, cfg: ReprConfig = DEFAULT_CONFIG) -> list:
    if c.never:
        return []
    if prefers_row(c):
        return [_row_repr(c.row_case, cfg)]
    return [App("List", (to_repr(c.array_case, cfg),))]


def _mapping_repr(m: MappingConstraint, cfg: ReprConfig) -> TypeRepr:
    return App("Map", (join_alts(scalar_to_reprs(m.key, cfg)), to_repr(m.value, cfg)))


def prefers_record(c: ObjectConstraint) -> bool:
    rec = c.record_case
    return rec.kind is RecordKind.DATA and rec.cost() <= c.mapping_case.cost()


def object_to_reprs(c: ObjectConstraint, cfg: ReprConfig = DEFAULT_CONFIG) -> list:
    if c.never:
        return []
    if prefers_record(c):
        return [record_to_repr(c.record_case, cfg)]
    return [_mapping_repr(c.mapping_case, cfg)]


def field_order(r: RecordConstraint) -> list:
    """Keys in observed order, most frequent key sequence first."""
    out: dict = {}
    for seq, _ in sorted(r.keysets, key=lambda kn: (-kn[1], kn[0])):
        for k in seq:
            out.setdefault(k)
    for k, _ in r.fields:
        out.setdefault(k)
    return list(out)


def _single_record(r: RecordConstraint, cfg: ReprConfig):
    fields = r.field_map
    args = []
    for key in field_order(r):
        t = to_repr(fields[key], cfg)
        if r.is_optional(key):
            t = prepend_nullable(t)
        args.append((key, t))
    return Adt((ConsRepr("", tuple(args)),), kind="record", source=r)


def _variant_record(r: RecordConstraint, cfg: ReprConfig):
    fields = r.field_map
    groups: dict = {}
    for seq, n in r.keysets:
        groups.setdefault(frozenset(seq), []).append((seq, n))
    shapes = []
    for seqs in groups.values():
        total = sum(n for _, n in seqs)
        best = min(seqs, key=lambda sn: (-sn[1], sn[0]))[0]
        shapes.append((-total, best))
    shapes.sort()
    names = _dedupe([type_name_hint(seq[0]) if seq else "Empty" for _, seq in shapes])
    cons = tuple(ConsRepr(name, tuple((k, to_repr(fields[k], cfg)) for k in seq))
                 for name, (_, seq) in zip(names, shapes))
    return Adt(cons, kind="variant", source=r)


def splits_into_variants(r: RecordConstraint, cfg: ReprConfig) -> bool:
    """Whether one constructor per key set beats a single record.

    A single record costs one per optional field, a split costs one.
    """
    n_shapes = len(r.observed_keysets)
    if not cfg.variant_split or n_shapes < 2 or n_shapes > cfg.max_variants:
        return False
    optional = sum(1 for k in r.field_map if r.is_optional(k))
    return 1 < optional


def variant_split(r: RecordConstraint, cfg: ReprConfig = DEFAULT_CONFIG) -> TypeRepr:
    """Single record with optional fields, or one constructor per key set, by cost."""
    if r.kind is not RecordKind.DATA:
        raise ReprError(f"cannot represent {r!r} as a record")
    if splits_into_variants(r, cfg):
        return _variant_record(r, cfg)
    return _single_record(r, cfg)


record_to_repr = variant_split


def to_repr(u: UnionType, cfg: ReprConfig = DEFAULT_CONFIG) -> TypeRepr:
    """Anonymous representation of a union, alternatives joined with ``Alt``."""
    if u.top:
        return ANY
    alts = (scalar_to_reprs(u.bool, cfg) + scalar_to_reprs(u.num, cfg)
            + scalar_to_reprs(u.str, cfg) + array_to_reprs(u.arr, cfg)
            + object_to_reprs(u.obj, cfg))
    t = join_alts(alts)
    if u.null is PRESENT:
        t = prepend_nullable(t)
    return t


# Naming

_IDENT_BAD = re.compile(r"[^A-Za-z0-9_]")


def sanitize_field(key: str) -> str:
    """Field identifier for a JSON key: ``6408f5`` becomes ``f_6408f5``."""
    s = _IDENT_BAD.sub("_", key)
    if not s[:1].isalpha() or not s[:1].isascii():
        s = "f_" + s
    return s


def type_name_hint(key: str) -> str:
    s = sanitize_field(key)
    return s[0].upper() + s[1:]


def _dedupe(names) -> list:
    seen: set = set()
    out = []
    for n in names:
        cand, i = n, 2
        while cand in seen:
            cand, i = f"{n}{i}", i + 1
        seen.add(cand)
        out.append(cand)
    return out


class _Namer:
    def __init__(self, reserved):
        self.used = set(PREDEFINED) | set(reserved)
        self.env: dict = {}
        self.interned: dict = {}

    def allocate(self, hints) -> str:
        for h in hints:
            if h not in self.used:
                self.used.add(h)
                return h
        base, i = hints[0], 2
        while f"{base}{i}" in self.used:
            i += 1
        self.used.add(f"{base}{i}")
        return f"{base}{i}"

    def visit(self, t: TypeRepr, hints) -> TypeRepr:
        if isinstance(t, Ref):
            return t
        if isinstance(t, App):
            if t.name == "Map":
                key = self.visit(t.args[0], [h + "Key" for h in hints])
                return App("Map", (key, self.visit(t.args[1], [h + "Elt" for h in hints])))
            if t.name == "List":
                return App("List", (self.visit(t.args[0], [hints[0], hints[0] + "Elt"]),))
            return App(t.name, tuple(self.visit(a, hints) for a in t.args))
        name = self.allocate(hints)
        return self.declare(name, t)

    def declare(self, name: str, t: Adt) -> Ref:
        cons = []
        for c in t.cons:
            if t.kind == "row":
                keys = [f"field{i}" for i in range(1, len(c.args) + 1)]
                hints = [[name + "Field" + str(i)] for i in range(1, len(c.args) + 1)]
            else:
                keys = _dedupe([sanitize_field(k) if k else "field" for k, _ in c.args])
                hints = [[type_name_hint(k) if k else name + "Field"] for k, _ in c.args]
            args = tuple((k, self.visit(a, h)) for k, (_, a), h in zip(keys, c.args, hints))
            cons.append(ConsRepr(c.name or name, args))
        adt = Adt(tuple(cons), kind=t.kind, source=t.source)
        # Compare structure, not the type's own name echoed in constructors.
        key = (t.kind, tuple(ConsRepr("" if t.kind in ("record", "row") else c.name, c.args)
                             for c in adt.cons))
        if key in self.interned:
            self.used.discard(name)
            return Ref(self.interned[key])
        self.interned[key] = name
        self.env[name] = adt
        return Ref(name)


def assign_names(t: TypeRepr, root: str = "Root") -> ReprEnv:
    """Hoist every anonymous data type into a named environment.

    A toplevel that is not itself a data type is wrapped as
    ``Root { value: T }``.  Type names come from field names, structurally
    identical types share one name, and clashes get numeric suffixes.
    """
    if root in PREDEFINED:
        raise ReprError(f"root name {root} clashes with a predefined type")
    namer = _Namer([])
    if not isinstance(t, Adt):
        t = Adt((ConsRepr(root, (("value", t),)),), kind="record")
        namer.used.add(root)
        value = namer.visit(t.cons[0].args[0][1], [root, root + "Value"])
        namer.env[root] = Adt((ConsRepr(root, (("value", value),)),), kind="record")
    else:
        namer.used.add(root)
        ref = namer.declare(root, t)
        if ref.name != root:
            raise ReprError("toplevel could not be named")
    return ReprEnv(root, {n: namer.env[n] for n in _preorder(root, namer.env)})


def _preorder(root: str, env: dict) -> list:
    return ReprEnv(root, env).order()


def _refs(t) -> set:
    if isinstance(t, Ref):
        return {t.name}
    if isinstance(t, App):
        return set().union(*(_refs(a) for a in t.args))
    return set().union(set(), *(_refs(a) for c in t.cons for _, a in c.args))


def validate(e: ReprEnv) -> ReprEnv:
    """Every reference resolves to a declaration or a predefined type."""
    for name, t in e.env.items():
        for ref in sorted(_refs(t)):
            if ref not in e.env and ref not in PREDEFINED:
                raise ReprError(f"type {name} refers to undeclared type {ref}")
    return e


def promote_empty(e: ReprEnv) -> ReprEnv:
    """Confirm that nothing derived from an empty constraint is left unrepresented.

    Empty alternatives already become ``AnyValue`` in :func:`join_alts`;
    this pass only guards the invariant.
    """
    for name, t in e.env.items():
        if not isinstance(t, Adt) or any(not c.name for c in t.cons):
            raise ReprError(f"type {name} is incomplete")
    return validate(e)


def build_env(u: UnionType, root: str = "Root", cfg: ReprConfig = DEFAULT_CONFIG) -> ReprEnv:
    return promote_empty(assign_names(to_repr(u, cfg), root))


# Unification of similar records

def _map_records(u: UnionType, f) -> UnionType:
    """Rebuild a union, replacing record readings top-down with ``f``."""
    if u.top:
        return u
    arr = u.arr
    if not arr.never:
        row = arr.row_case
        if row.kind is RowKind.ROW:
            row = RowConstraint(RowKind.ROW, tuple(_map_records(c, f) for c in row.columns))
        arr = ArrayConstraint(row, _map_records(arr.array_case, f))
    obj = u.obj
    if not obj.never:
        m = obj.mapping_case
        m = MappingConstraint(m.key, _map_records(m.value, f))
        rec = obj.record_case
        if rec.kind is RecordKind.DATA:
            rec = f(rec)
            rec = RecordConstraint(RecordKind.DATA,
                                   tuple((k, _map_records(v, f)) for k, v in rec.fields),
                                   rec.keysets)
        obj = ObjectConstraint(m, rec)
    return replace(u, arr=arr, obj=obj)


def _records(u: UnionType, cfg: ReprConfig, out: list, inside: set) -> None:
    """Records that will be rendered as single-constructor records, in DFS order.

    ``inside`` maps each found record to the set of records below it.
    """
    if u.top:
        return
    if not u.arr.never:
        if prefers_row(u.arr):
            for c in u.arr.row_case.columns:
                _records(c, cfg, out, inside)
        else:
            _records(u.arr.array_case, cfg, out, inside)
    if u.obj.never:
        return
    rec = u.obj.record_case
    below: list = []
    if not prefers_record(u.obj):
        _records(u.obj.mapping_case.value, cfg, out, inside)
        return
    for _, v in rec.fields:
        _records(v, cfg, below, inside)
    if not splits_into_variants(rec, cfg):
        out.append(rec)
        inside.setdefault(rec, set()).update(below)
        for b in below:
            inside[rec] |= inside.get(b, set())
    out.extend(below)


def _describe(r: RecordConstraint) -> str:
    return "{" + ", ".join(field_order(r)) + "}"


def unify_similar_records(u: UnionType, threshold: float = 0.6,
                          cfg: ReprConfig = DEFAULT_CONFIG, max_rounds: int = 16):
    """Merge record types whose label sets overlap by more than ``threshold``.

    Similarity is the Jaccard index of the label sets.  Records are grouped
    transitively and each group is replaced by the merge of its members, so
    the representation step then gives them a single shared name.  Records
    nested in one another are never merged, as that would need a recursive
    type.  Returns the rewritten union and a log of merged pairs.
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    log: list = []
    for _ in range(max_rounds):
        found: list = []
        inside: dict = {}
        _records(u, cfg, found, inside)
        records = list(dict.fromkeys(found))
        parent = list(range(len(records)))

        def root(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        members = {i: {r} for i, r in enumerate(records)}
        below = {i: set(inside.get(r, ())) for i, r in enumerate(records)}

        pairs = []
        for i, a in enumerate(records):
            for j in range(i + 1, len(records)):
                b = records[j]
                sim = jaccard(a.field_map, b.field_map)
                if sim > threshold:
                    pairs.append((-sim, i, j))
        merged_any = False
        for neg_sim, i, j in sorted(pairs):
            ri, rj = root(i), root(j)
            if ri == rj or below[ri] & members[rj] or below[rj] & members[ri]:
                continue
            parent[rj] = ri
            members[ri] |= members.pop(rj)
            below[ri] |= below.pop(rj)
            merged_any = True
            log.append(f"unified {_describe(records[i])} with {_describe(records[j])} "
                       f"(similarity {-neg_sim:.2f})")
        if not merged_any:
            break
        subst = {}
        for group in members.values():
            if len(group) > 1:
                merged = mconcat(RecordConstraint.neutral(),
                                 [r for r in records if r in group])
                subst.update(dict.fromkeys(group, merged))
        u = _map_records(u, lambda r: subst.get(r, r))
    return u, log
