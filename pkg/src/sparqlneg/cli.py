"""Command-line entry point.

Exit codes: 0 success / equivalent / member, 1 inequivalent / not a member,
2 parse or usage error, 3 rewrite rejected.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .lab import axioms as ax
from .lab.equiv import check_equiv
from .lab.report import (FORMATS, axiom_figure, dump_json, render_axioms, render_equiv,
                         render_table2, table2_figure)
from .lab.space import GraphSpace, SpaceSyntaxError, SpaceTooLarge
from .lab.table2 import run_table2
from .patterns import evaluate, in_fragment_ex
from .rdf import Dataset, ReservedGraphName
from .rewriter import (NAF_SCHEMES, REJECTED, leaf_domains, pattern_to_algebra,
                       rewrite_algebra_to_core, rewrite_diff_to_naf, rewrite_minus_to_diff,
                       rewrite_nex_to_diff, rewrite_opt_to_diff)
from .surface import (ParseError, parse_dataset, parse_graph, parse_pattern, print_algebra,
                      print_pattern)

RULES = ("opt2diff", "minus2diff", "nex2diff", "w3c2core") + tuple(f"naf:{s}" for s in NAF_SCHEMES)


class UsageError(Exception):
    pass


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _source(arg: str) -> str:
    """Read a file, or take the argument itself as DSL text when no such file exists."""
    if arg == "-":
        return sys.stdin.read()
    path = Path(arg)
    try:
        if path.is_file():
            return path.read_text(encoding="utf-8")
    except OSError:
        pass
    if arg.lstrip().startswith("(") or arg.lstrip().startswith(":") or "{" in arg:
        return arg
    raise UsageError(f"no such file: {arg}")


def _pattern(arg: str, allow_reserved: bool = True):
    return parse_pattern(_source(arg), allow_reserved=allow_reserved)


def _write(text: str):
    sys.stdout.write(text)


# -- commands --------------------------------------------------------------

def cmd_eval(args) -> int:
    if args.dataset:
        ds = parse_dataset(_source(args.dataset))
    elif args.graph:
        ds = Dataset(parse_graph(_source(args.graph)))
    else:
        ds = Dataset()
    p = _pattern(args.pattern)
    out = evaluate(p, ds, error_as_false=args.diff_error_as_false)
    if args.set:
        out = out.distinct()
    if args.format == "json":
        _write(json.dumps({"solutions": out.to_records()}, ensure_ascii=False) + "\n")
    elif args.format == "tsv":
        variables = sorted(out.domain())
        lines = ["\t".join([str(v) for v in variables] + ["card"])]
        for m, n in out.sorted_items():
            lines.append("\t".join([str(m.get(v) or "") for v in variables] + [str(n)]))
        _write("\n".join(lines) + "\n")
    else:
        _write(str(out) + "\n")
    return 0


def cmd_rewrite(args) -> int:
    p = _pattern(args.pattern, allow_reserved=False)
    if args.rule == "w3c2core":
        expr, leaves = pattern_to_algebra(p)
        core = rewrite_algebra_to_core(expr, args.diff_error_as_false,
                                       domains=leaf_domains(leaves), sliced=args.exact)
        _write(print_algebra(core) + "\n")
        return 0
    if args.rule.startswith("naf:"):
        result = rewrite_diff_to_naf(p, args.rule.split(":", 1)[1])
    else:
        result = {"opt2diff": rewrite_opt_to_diff, "minus2diff": rewrite_minus_to_diff,
                  "nex2diff": rewrite_nex_to_diff}[args.rule](p)
    if result.applicability == REJECTED:
        print(f"rejected: {result.reason}", file=sys.stderr)
        for v in result.violations:
            print(f"  {v.variable} at {print_pattern(v.subpattern)}", file=sys.stderr)
        return 3
    if not result.applied:
        print(f"note: {result.reason}; pattern unchanged", file=sys.stderr)
    _write(print_pattern(result.output, pretty=args.pretty) + "\n")
    return 0


def cmd_equiv(args) -> int:
    p1, p2 = _pattern(args.p1), _pattern(args.p2)
    space = GraphSpace.parse(args.space) if args.space else GraphSpace()
    report = check_equiv(p1, p2, space, "set" if args.set else "bag",
                         error_as_false=args.diff_error_as_false)
    _write(render_equiv(report, args.format))
    return 0 if report.equivalent else 1


def cmd_axioms(args) -> int:
    cases = ax.run_axiom_matrix(args.operator, args.semantics)
    summaries = ax.summarize(args.operator)
    _write(render_axioms(cases, summaries, args.format))
    if args.spot_check:
        bad = [c for c, ok in ax.spot_check_patterns(cases) if not ok]
        print(f"pattern-level spot check: {len(cases) - len(bad)}/{len(cases)} agree",
              file=sys.stderr)
        if bad:
            return 1
    if args.figures:
        out = Path(args.figures)
        out.mkdir(parents=True, exist_ok=True)
        path = axiom_figure(summaries, out / f"axioms-{args.operator}.png")
        print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_table2(args) -> int:
    table = run_table2()
    _write(render_table2(table, args.format))
    if args.figures:
        out = Path(args.figures)
        out.mkdir(parents=True, exist_ok=True)
        path = table2_figure(table, out / "table2.png")
        print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_fragment(args) -> int:
    p = _pattern(args.pattern)
    verdict = in_fragment_ex(p)
    if args.format == "json":
        _write(dump_json({"member": verdict.member, "violations": [
            {"variable": str(v.variable), "path": list(v.path),
             "subpattern": print_pattern(v.subpattern)} for v in verdict.violations]}))
    else:
        _write(("member" if verdict.member else "not a member") + "\n")
        for v in verdict.violations:
            _write(f"  unsafe correlated variable {v.variable} in "
                   f"{print_pattern(v.subpattern)}\n")
    return 0 if verdict.member else 1


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparqlneg", description="Evaluate, rewrite and compare SPARQL negation patterns.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=FORMATS, default="text"):
        p.add_argument("--format", choices=formats, default=default)

    def error_mode(p):
        p.add_argument("--diff-error-as-false", type=_bool, default=True, metavar="BOOL",
                       help="treat filter errors as false in left-join/difference (default true)")

    p = sub.add_parser("eval", help="evaluate a pattern")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--graph", help="graph file (or inline triples)")
    src.add_argument("--dataset", help="dataset file (or inline text)")
    p.add_argument("--pattern", required=True, help="pattern file (or inline DSL)")
    p.add_argument("--set", action="store_true", help="collapse cardinalities")
    error_mode(p)
    common(p, default="json")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("rewrite", help="apply a rewrite rule")
    p.add_argument("--rule", required=True, choices=RULES)
    p.add_argument("--pattern", required=True)
    p.add_argument("--pretty", action="store_true", help="indent long output")
    p.add_argument("--exact", action="store_true",
                   help="w3c2core: partition by domain so the result is exact for any input")
    error_mode(p)
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("equiv", help="compare two patterns over a finite graph space")
    p.add_argument("p1")
    p.add_argument("p2")
    p.add_argument("--space", help="e.g. 's=a,b;p=p,q;max=8' (keys: s p o max mode "
                                   "samples seed names budget)")
    p.add_argument("--set", action="store_true")
    error_mode(p)
    common(p)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("axioms", help="set-difference axiom matrix")
    p.add_argument("--operator", choices=ax.OPERATORS, default="diff")
    p.add_argument("--semantics", choices=("bag", "set"), default="bag")
    p.add_argument("--spot-check", action="store_true",
                   help="also evaluate every case through concrete patterns")
    p.add_argument("--figures", metavar="DIR", help="write a PNG summary to DIR")
    common(p)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("table2", help="DIFF against its OPT/!bound encodings")
    p.add_argument("--figures", metavar="DIR", help="write a PNG grid to DIR")
    common(p)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("fragment", help="check NOT-EXISTS correlation safety")
    p.add_argument("--pattern", required=True)
    common(p, formats=("text", "json"))
    p.set_defaults(func=cmd_fragment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error at {exc.diagnostic}", file=sys.stderr)
    except (UsageError, SpaceSyntaxError, SpaceTooLarge, ReservedGraphName) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
