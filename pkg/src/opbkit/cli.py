"""Command-line front end.

Every analysis command prints one JSON document with a ``schema`` field.
Exit codes: 0 success, 2 the input violates a required property (e.g. the
states are not orthogonal, or a PVM literal is not orthogonality
preserving), 1 malformed input or flags.  ``FILE`` may be a path or
``corpus:NAME`` for a bundled set.
"""

from __future__ import annotations

import argparse
import sys

from . import corpus
from .activation import is_activable, is_strongly_local
from .constraints import derive_constraint_space, is_locally_irreducible, space_report
from .core import (
    Bipartition,
    NotOrthogonalError,
    StateSetError,
    classify_completeness,
    flatten,
    has_local_redundancy,
    is_orthogonal_set,
)
from .discrimination import DEFAULT_MAX_DEPTH, is_upb, search_protocol
from .fileformat import parse_state_set
from .measurement import apply_pvm, enumerate_op_pvms_report, is_orthogonality_preserving
from .report import (
    activation_obj,
    dumps,
    outcome_obj,
    parse_pvm,
    pvm_obj,
    strong_locality_obj,
    upb_obj,
    verdict_obj,
    with_schema,
)
from .tiling import render_tiling


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(source: str) -> str:
    if source.startswith("corpus:"):
        name = source.split(":", 1)[1]
        if name not in corpus.NAMES:
            raise StateSetError(f"unknown corpus set {name!r}; known: {', '.join(corpus.NAMES)}")
        return corpus.text(name)
    try:
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise StateSetError(f"cannot read {source}: {exc.strerror}") from None


def _load(source: str):
    return parse_state_set(_read(source))


def _party(args, s) -> list[int]:
    if args.party is None:
        return list(range(s.n_parties))
    if not 1 <= args.party <= s.n_parties:
        raise StateSetError(f"--party: expected 1..{s.n_parties}, got {args.party}")
    return [args.party - 1]


# -- commands ----------------------------------------------------------------


def cmd_analyze(args, out):
    s = _load(args.file)
    ok, pair = is_orthogonal_set(s)
    body = {"n_states": len(s), "dims": list(s.dims), "orthogonal": ok}
    if not ok:
        body["violating_pair"] = list(pair)
        out(with_schema("analyze", body))
        return 2
    cls = classify_completeness(s)
    body["completeness"] = cls.tag.value
    body["local_spans"] = list(cls.local_span_dims)
    body["redundancy"] = [
        {"party": p + 1, "split": list(split), "redundant": has_local_redundancy(s, p, split)}
        for p, split in sorted(s.splits.items())
    ]
    irr = is_locally_irreducible(s)
    body["locally_irreducible"] = irr.irreducible
    out(with_schema("analyze", body))
    return 0


def cmd_constraints(args, out):
    s = _load(args.file)
    parties = []
    for p in _party(args, s):
        space, records = derive_constraint_space(s, p, local=args.local)
        parties.append(space_report(space, records))
    out(with_schema("constraints", {"parties": parties}))
    return 0


def cmd_measure(args, out):
    s = _load(args.file)
    if args.pvm is None:
        # no literal given: list what the enumerator finds
        listing = []
        for p in _party(args, s):
            enum = enumerate_op_pvms_report(s, p)
            listing.append(
                {
                    "party": p + 1,
                    "complete": enum.complete,
                    "pvms": [pvm_obj(m)["elements"] for m in enum.pvms],
                    "notes": list(enum.notes),
                }
            )
        out(with_schema("measure", {"enumerated": listing}))
        return 0
    m = parse_pvm(_read(args.pvm), s.dims)
    ok, pair = is_orthogonal_set(s)
    if not ok:
        raise NotOrthogonalError(pair)
    op = is_orthogonality_preserving(s, m)
    body = {"pvm": pvm_obj(m), "orthogonality_preserving": op, "outcomes": [outcome_obj(o) for o in apply_pvm(s, m)]}
    out(with_schema("measure", body))
    return 0 if op else 2


def cmd_distinguish(args, out):
    s = _load(args.file)
    out(with_schema("distinguish", verdict_obj(search_protocol(s, args.depth))))
    return 0


def cmd_upb(args, out):
    s = _load(args.file)
    out(with_schema("upb", upb_obj(is_upb(s))))
    return 0


def cmd_activate(args, out):
    s = _load(args.file)
    out(with_schema("activate", activation_obj(is_activable(s, args.depth))))
    return 0


def cmd_strong_local(args, out):
    s = _load(args.file)
    if args.bipartition:
        b = Bipartition.parse(args.bipartition)
        b.validate(s.n_parties)
        flat = flatten(s, b) if s.n_parties > 2 else s
        body = {"bipartition": str(b), **activation_obj(is_activable(flat, args.depth))}
        out(with_schema("strong-local", body))
        return 0
    out(with_schema("strong-local", strong_locality_obj(is_strongly_local(s, args.depth))))
    return 0


def cmd_render(args, out):
    s = _load(args.file)
    highlight = None
    if args.highlight:
        m = parse_pvm(_read(args.highlight), s.dims)
        if not 0 <= args.element < len(m.elements):
            raise StateSetError(f"--element: the PVM has {len(m.elements)} elements")
        highlight = m.elements[args.element]
    out(render_tiling(s, args.format, highlight), raw=True)
    return 0


def cmd_corpus(args, out):
    if args.name is None:
        out(with_schema("corpus", {"sets": list(corpus.NAMES)}))
        return 0
    if args.name not in corpus.NAMES:
        raise StateSetError(f"unknown corpus set {args.name!r}; known: {', '.join(corpus.NAMES)}")
    out(corpus.text(args.name), raw=True)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opbkit", description="Exact analysis of orthogonal product-state sets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, depth=False):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="state-set file, or corpus:NAME")
        if depth:
            sp.add_argument("--depth", type=int, default=DEFAULT_MAX_DEPTH, help="search depth bound")
        sp.set_defaults(func=fn)
        return sp

    add("analyze", cmd_analyze, "orthogonality, completeness class, redundancy")
    sp = add("constraints", cmd_constraints, "admissible M^dagger M space per party")
    sp.add_argument("--party", type=int, help="1-based party (default: all)")
    sp.add_argument("--local", action="store_true", help="restrict operators to the local support")
    sp = add("measure", cmd_measure, "apply a PVM literal, or list enumerated PVMs")
    sp.add_argument("--pvm", help="PVM literal file")
    sp.add_argument("--party", type=int, help="1-based party for listing")
    add("distinguish", cmd_distinguish, "projective LPCC protocol search", depth=True)
    add("upb", cmd_upb, "unextendibility test")
    add("activate", cmd_activate, "local activability", depth=True)
    sp = add("strong-local", cmd_strong_local, "activability across bipartitions", depth=True)
    sp.add_argument("--bipartition", help='single bipartition such as "1|23"')
    sp = add("render", cmd_render, "tiling diagram")
    sp.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    sp.add_argument("--highlight", help="PVM literal file whose element is shaded")
    sp.add_argument("--element", type=int, default=0, help="element index of the highlight PVM")
    sp = sub.add_parser("corpus", help="list bundled sets or print one")
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def out(obj, raw=False):
        stdout.write(obj if raw else dumps(obj))

    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "depth", 1) < 0:
            raise UsageError("--depth must be nonnegative")
        return args.func(args, out)
    except NotOrthogonalError as exc:
        out(with_schema(getattr(args, "command", ""), {"error": str(exc), "violating_pair": list(exc.pair)}))
        return 2
    except (UsageError, StateSetError, ValueError) as exc:
        stderr.write(f"opbkit: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
