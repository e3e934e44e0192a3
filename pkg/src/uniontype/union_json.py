"""JSON dump of an inferred UnionType, and its inverse.

Neutral components are left out, so a union that has seen nothing dumps
as ``{}``.
"""

from __future__ import annotations

import json

from .compound import (ARRAY_NEVER, OBJECT_NEVER, RC_BOTTOM, RC_TOP, ROW_NEVER,
                       ROW_TOP, UNION_TOP, ArrayConstraint, MappingConstraint, ObjectConstraint,
                       RecordConstraint, RecordKind, RowConstraint, RowKind, UnionType)
from .scalars import PresenceConstraint, NumberConstraint, SKind, StringConstraint

__all__ = ["union_to_json", "union_from_json", "dumps"]

_COMPONENTS = ("unionNull", "unionBool", "unionNum", "unionStr", "unionArr", "unionObj")


def _str_to_json(s: StringConstraint):
    if s.kind is SKind.ENUM:
        return {"SCEnum": dict(s.counts)}
    return repr(s)


def _str_from_json(d) -> StringConstraint:
    if isinstance(d, dict):
        return StringConstraint.enum(d["SCEnum"].keys(), d["SCEnum"])
    return {"SCNever": StringConstraint.neutral(), "SCAny": StringConstraint.beyond(),
            "SCDate": StringConstraint(SKind.DATE), "SCEmail": StringConstraint(SKind.EMAIL)}[d]


def _row_to_json(r: RowConstraint):
    if r.kind is RowKind.ROW:
        return {"Row": [union_to_json(c) for c in r.columns]}
    return r.kind.value


def _row_from_json(d) -> RowConstraint:
    if isinstance(d, dict):
        return RowConstraint.row(union_from_json(c) for c in d["Row"])
    return {"RowNever": ROW_NEVER, "RowTop": ROW_TOP}[d]


def _record_to_json(r: RecordConstraint):
    if r.kind is not RecordKind.DATA:
        return r.kind.value
    return {"RecordConstraint": {
        "fields": {k: union_to_json(v) for k, v in r.fields},
        "keysets": [[list(seq), n] for seq, n in r.keysets],
    }}


def _record_from_json(d) -> RecordConstraint:
    if isinstance(d, dict):
        body = d["RecordConstraint"]
        return RecordConstraint.data(
            {k: union_from_json(v) for k, v in body["fields"].items()},
            [(tuple(seq), n) for seq, n in body["keysets"]])
    return {"RCBottom": RC_BOTTOM, "RCTop": RC_TOP}[d]


def union_to_json(u: UnionType):
    if u.top:
        return "UnionTop"
    out = {}
    if not u.null.is_neutral():
        out["unionNull"] = u.null.value
    if not u.bool.is_neutral():
        out["unionBool"] = u.bool.value
    if not u.num.is_neutral():
        out["unionNum"] = u.num.value
    if not u.str.is_neutral():
        out["unionStr"] = _str_to_json(u.str)
    if not u.arr.never:
        out["unionArr"] = {"rowCase": _row_to_json(u.arr.row_case),
                           "arrayCase": union_to_json(u.arr.array_case)}
    if not u.obj.never:
        m = u.obj.mapping_case
        out["unionObj"] = {
            "mappingCase": {"keyConstraint": _str_to_json(m.key),
                            "valueConstraint": union_to_json(m.value)},
            "recordCase": _record_to_json(u.obj.record_case),
        }
    return out


def union_from_json(d) -> UnionType:
    if d == "UnionTop":
        return UNION_TOP
    unknown = set(d) - set(_COMPONENTS)
    if unknown:
        raise ValueError(f"unknown union components: {sorted(unknown)}")
    arr, obj = ARRAY_NEVER, OBJECT_NEVER
    if "unionArr" in d:
        a = d["unionArr"]
        arr = ArrayConstraint(_row_from_json(a["rowCase"]), union_from_json(a["arrayCase"]))
    if "unionObj" in d:
        o = d["unionObj"]
        m = o["mappingCase"]
        obj = ObjectConstraint(
            MappingConstraint(_str_from_json(m["keyConstraint"]),
                              union_from_json(m["valueConstraint"])),
            _record_from_json(o["recordCase"]))
    return UnionType(
        PresenceConstraint(d.get("unionNull", "Absent")),
        PresenceConstraint(d.get("unionBool", "Absent")),
        NumberConstraint(d.get("unionNum", "NCNever")),
        _str_from_json(d.get("unionStr", "SCNever")),
        arr, obj)


def dumps(u: UnionType) -> str:
    return json.dumps(union_to_json(u), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
