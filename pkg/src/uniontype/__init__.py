"""Union type inference from sample JSON documents."""

from .compound import (ArrayConstraint, MappingConstraint, ObjectConstraint, RecordConstraint,
                       RowConstraint, UnionType)
from .core import FreeType, TyCost, Typelike, fold_infer, mconcat
from .counted import Counted
from .json_model import load_samples, parse_document
from .scalars import NumberConstraint, PresenceConstraint, StringConstraint, enum_limit
from .representation import ReprConfig, build_env, unify_similar_records
from .codegen import render

__version__ = "0.1.0"

__all__ = [
    "ArrayConstraint", "MappingConstraint", "ObjectConstraint", "RecordConstraint",
    "RowConstraint", "UnionType", "FreeType", "TyCost", "Typelike", "fold_infer", "mconcat",
    "Counted", "load_samples", "parse_document", "NumberConstraint", "PresenceConstraint",
    "StringConstraint", "enum_limit", "ReprConfig", "build_env", "unify_similar_records",
    "render",
]
