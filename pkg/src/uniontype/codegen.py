"""Render a :class:`ReprEnv` as declaration text.

The ``decl`` dialect writes one declaration per line::

    type Name = Cons { field: T, ... } | Other

with type expressions ``Name``, ``Name<A, B>``, ``[T]``, ``A :|: B``,
``Maybe T`` and ``Map<K, V>``.  Parentheses are added only where an
expression would otherwise be ambiguous.  The ``debug-json`` dialect dumps
the environment as JSON.
"""

from __future__ import annotations

import enum
import json

from .representation import Adt, App, Ref, ReprEnv, validate

__all__ = ["Dialect", "render", "render_type", "env_to_json"]


class Dialect(enum.Enum):
    DECL = "decl"
    DEBUG_JSON = "debug-json"


def _atomic(t) -> bool:
    return not (isinstance(t, App) and t.name in ("Alt", "Maybe"))


def render_type(t) -> str:
    if isinstance(t, Ref):
        return t.name
    if isinstance(t, Adt):
        raise ValueError("anonymous data type left in a type expression")
    name, args = t.name, t.args
    if name == "List" and len(args) == 1:
        return f"[{render_type(args[0])}]"
    if name == "Maybe" and len(args) == 1:
        inner = render_type(args[0])
        return f"Maybe {inner}" if _atomic(args[0]) else f"Maybe ({inner})"
    if name == "Alt" and len(args) == 2:
        left, right = args
        lhs = render_type(left) if _atomic(left) else f"({render_type(left)})"
        rhs = render_type(right)
        if isinstance(right, App) and right.name == "Maybe":
            rhs = f"({rhs})"
        return f"{lhs} :|: {rhs}"
    return f"{name}<{', '.join(render_type(a) for a in args)}>"


def _render_cons(c) -> str:
    if not c.args:
        return c.name
    fields = ", ".join(f"{k}: {render_type(t)}" for k, t in c.args)
    return f"{c.name} {{ {fields} }}"


def _render_decl(name: str, t) -> str:
    if isinstance(t, Adt):
        body = " | ".join(_render_cons(c) for c in t.cons)
    else:
        body = render_type(t)
    return f"type {name} = {body}\n"


def _type_json(t):
    if isinstance(t, Ref):
        return {"Ref": t.name}
    if isinstance(t, App):
        return {"App": {"name": t.name, "args": [_type_json(a) for a in t.args]}}
    return {"Adt": [{"name": c.name, "args": [[k, _type_json(a)] for k, a in c.args]}
                    for c in t.cons]}


def env_to_json(e: ReprEnv) -> dict:
    return {"toplevel": e.toplevel,
            "env": {name: _type_json(e.env[name]) for name in e.order()}}


def render(e: ReprEnv, dialect: Dialect | str = Dialect.DECL) -> str:
    """Declarations reachable from the toplevel, in depth-first order."""
    dialect = Dialect(dialect)
    validate(e)
    if dialect is Dialect.DEBUG_JSON:
        return json.dumps(env_to_json(e), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return "".join(_render_decl(name, e.env[name]) for name in e.order())
