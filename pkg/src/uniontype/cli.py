"""Command-line frontend: ``uniontype infer FILE... [options]``.

Exit status is 0 on success, 1 when an input cannot be read or parsed,
and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import re
import sys
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .codegen import render
from .compound import UnionType
from .core import tree_fold
from .json_model import MODES, JsonParseError, load_samples
from .representation import PREDEFINED, ReprConfig, ReprError, build_env, unify_similar_records
from .scalars import enum_limit
from .union_json import dumps

__all__ = ["CliConfig", "run", "main", "build_parser"]

EMITS = ("decl", "debug-json", "union-json")
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


@dataclass
class CliConfig:
    paths: list = field(default_factory=list)
    mode: str = "whole-file"
    root_name: str = "Root"
    emit: str = "decl"
    enum_limit: int = 10
    unify_threshold: float = 0.6
    no_unify: bool = False
    no_variant_split: bool = False
    max_variants: int = 10

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.emit not in EMITS:
            raise ValueError(f"unknown output {self.emit!r}")
        if self.enum_limit < 1:
            raise ValueError("--enum-limit must be at least 1")
        if not 0 < self.unify_threshold <= 1:
            raise ValueError("--unify-threshold must be in (0, 1]")
        if self.max_variants < 1:
            raise ValueError("--max-variants must be at least 1")
        if not _IDENT.fullmatch(self.root_name) or self.root_name in PREDEFINED:
            raise ValueError(f"--root-name {self.root_name!r} is not a usable type name")

    def repr_config(self) -> ReprConfig:
        return ReprConfig(variant_split=not self.no_variant_split,
                          max_variants=self.max_variants,
                          unify=not self.no_unify,
                          unify_threshold=self.unify_threshold)


def infer_union(samples) -> UnionType:
    return tree_fold([UnionType.infer(s) for s in samples], UnionType.merge,
                     UnionType.neutral())


_STACK_BYTES = 512 * 1024 * 1024
_RECURSION_LIMIT = 60_000


def _deep(fn):
    """Call ``fn`` on a thread with a large stack so deeply nested input can be folded."""
    result: list = []
    errors: list = []

    def target():
        try:
            result.append(fn())
        except BaseException as e:  # re-raised in the caller
            errors.append(e)

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    try:
        threading.stack_size(_STACK_BYTES)
        sys.setrecursionlimit(max(old_limit, _RECURSION_LIMIT))
        worker = threading.Thread(target=target)
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if errors:
        raise errors[0]
    return result[0]


def run(cfg: CliConfig, out=None, err=None) -> int:
    return _deep(lambda: _run(cfg, out, err))


def _run(cfg: CliConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        samples = load_samples(cfg.paths, cfg.mode)
    except (JsonParseError, OSError) as e:
        print(f"uniontype: error: {e}", file=err)
        return 1
    except RecursionError:
        print("uniontype: error: input nested too deeply", file=err)
        return 1
    print(f"uniontype: {len(samples)} sample(s) from {len(cfg.paths)} file(s)", file=err)
    rcfg = cfg.repr_config()
    try:
        with enum_limit(cfg.enum_limit):
            u = infer_union(samples)
            if cfg.emit == "union-json":
                out.write(dumps(u))
                return 0
            if rcfg.unify:
                u, log = unify_similar_records(u, rcfg.unify_threshold, rcfg)
                for line in log:
                    print(f"uniontype: {line}", file=err)
            text = render(build_env(u, cfg.root_name, rcfg), cfg.emit)
    except ReprError as e:
        print(f"uniontype: error: {e}", file=err)
        return 1
    except RecursionError:
        print("uniontype: error: input nested too deeply", file=err)
        return 1
    out.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uniontype", description="Infer type declarations from sample JSON documents.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("infer", help="infer declarations from sample files")
    p.add_argument("paths", nargs="*", metavar="FILE", help="sample files")
    p.add_argument("--mode", choices=MODES, default="whole-file",
                   help="how samples are read from each file (default: whole-file)")
    p.add_argument("--root-name", default="Root", help="name of the toplevel type")
    p.add_argument("--emit", choices=EMITS, default="decl", help="output format")
    p.add_argument("--enum-limit", type=int, default=10,
                   help="most distinct strings kept as an enumeration")
    p.add_argument("--unify-threshold", type=float, default=0.6,
                   help="label similarity above which records are unified")
    p.add_argument("--no-unify", action="store_true", help="skip record unification")
    p.add_argument("--no-variant-split", action="store_true",
                   help="never split records into variants by key set")
    p.add_argument("--max-variants", type=int, default=10,
                   help="most key sets considered for a variant split")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = CliConfig(paths=args.paths, mode=args.mode, root_name=args.root_name,
                    emit=args.emit, enum_limit=args.enum_limit,
                    unify_threshold=args.unify_threshold, no_unify=args.no_unify,
                    no_variant_split=args.no_variant_split, max_variants=args.max_variants)
    try:
        cfg.validate()
    except ValueError as e:
        parser.error(str(e))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
