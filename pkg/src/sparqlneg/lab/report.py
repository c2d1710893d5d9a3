"""Text, JSON and TSV rendering of lab results, plus PNG figures."""

from __future__ import annotations

import json
from pathlib import Path

from .axioms import AxiomCase, AxiomSummary, axiom_text
from .equiv import EquivalenceReport
from .table2 import COLUMNS, CONDITIONS, Table2

FORMATS = ("text", "json", "tsv")


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def _tsv(header, rows) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join(str(x) for x in r) for r in rows]
    return "\n".join(lines) + "\n"


def _published(p: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in p.items()) or "-"


# -- axioms ----------------------------------------------------------------

def render_axioms(cases: list[AxiomCase], summaries: list[AxiomSummary], fmt: str) -> str:
    if fmt == "json":
        return dump_json({
            "cases": [c.to_record() for c in cases],
            "summary": [{"axiom": s.axiom, "operator": s.operator, "cases": s.cases,
                         "set_failures": s.set_failures,
                         "bag_only_failures": s.bag_only_failures,
                         "published": s.published} for s in summaries],
        })
    if fmt == "tsv":
        return _tsv(("axiom", "operator", "slots", "semantics", "outcome", "lhs", "rhs"),
                    [(c.axiom, c.operator, ",".join(c.slots), c.semantics,
                      "holds" if c.holds else "fails", c.lhs, c.rhs) for c in cases])
    lines = []
    by_axiom: dict[str, list[AxiomCase]] = {}
    for c in cases:
        by_axiom.setdefault(c.axiom, []).append(c)
    for letter, group in by_axiom.items():
        fails = [c for c in group if not c.holds]
        op = group[0].operator.upper()
        lines.append(f"({letter}) {axiom_text(letter)}  [{op}, {group[0].semantics}]: "
                     f"{len(group) - len(fails)}/{len(group)} hold")
        for c in fails:
            lines.append(f"    fails at {'/'.join(c.slots)}: lhs = {c.lhs}; rhs = {c.rhs}")
    lines.append("")
    lines.append("failure counts (ours vs published, informative)")
    for s in summaries:
        lines.append(f"  ({s.axiom}) set={s.set_failures} bag-only={s.bag_only_failures} "
                     f"of {s.cases}; published: {_published(s.published)}")
    return "\n".join(lines) + "\n"


# -- NAF table ---------------------------------------------------------------

def _mark(cell) -> str:
    if cell.populated:
        return "" if cell.matches_published else " (!published " + cell.expected_label + ")"
    return " (unpublished)"


def render_table2(table: Table2, fmt: str) -> str:
    if fmt == "json":
        return dump_json({"rows": [{
            "row": r.index, "P1": r.p1, "P2": r.p2, "DIFF": r.diff_label,
            "cells": [{"condition": c.condition, "column": c.column, "value": str(c.value),
                       "published": c.expected_label, "agrees_with_diff": c.agrees_with_diff,
                       "matches_published": c.matches_published} for c in r.cells]}
            for r in table.rows]})
    if fmt == "tsv":
        return _tsv(("row", "P1", "P2", "condition", "column", "value", "published",
                     "agrees_with_diff"),
                    [(r.index, r.p1, r.p2, c.condition, c.column, c.value,
                      c.expected_label or "--", str(c.agrees_with_diff).lower())
                     for r, c in table.cells()])
    lines = []
    for r in table.rows:
        lines.append(f"row {r.index}: ⟦P1⟧={r.p1} ⟦P2⟧={r.p2} ⟦P1 DIFF P2⟧={r.diff_label}")
        for cond in CONDITIONS:
            for col in COLUMNS:
                if col == "DIFF":
                    continue
                c = r.cell(cond, col)
                verdict = "=DIFF" if c.agrees_with_diff else "≠DIFF"
                lines.append(f"    {cond} {col:14} {verdict}  {c.value}{_mark(c)}")
    mism = table.mismatches_with_published()
    lines.append("")
    lines.append(f"published cells reproduced: {'all' if not mism else mism}")
    lines.append(f"P3 disagreements (published cells): {table.disagreements('P3')}")
    lines.append(f"P4 disagreements (published cells): {table.disagreements('P4')}")
    return "\n".join(lines) + "\n"


# -- equivalence -----------------------------------------------------------

def equiv_record(report: EquivalenceReport) -> dict:
    rec = {"verdict": report.verdict, "graphs_checked": report.graphs_checked,
           "semantics": report.semantics}
    if report.witness is not None:
        w = report.witness
        rec["witness"] = {"dataset": str(w.dataset).splitlines(),
                          "left": w.left.to_records(), "right": w.right.to_records()}
    return rec


def render_equiv(report: EquivalenceReport, fmt: str) -> str:
    if fmt == "json":
        return dump_json(equiv_record(report))
    if fmt == "tsv":
        w = report.witness
        return _tsv(("verdict", "graphs_checked", "semantics", "left", "right"),
                    [(report.verdict, report.graphs_checked, report.semantics,
                      w.left if w else "", w.right if w else "")])
    lines = [f"{report.verdict} ({report.graphs_checked} datasets checked, "
             f"{report.semantics} semantics)"]
    if report.witness is not None:
        w = report.witness
        lines += ["witness:", str(w.dataset), f"P1 → {w.left}", f"P2 → {w.right}"]
    return "\n".join(lines) + "\n"


# -- figures ---------------------------------------------------------------

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def axiom_figure(summaries: list[AxiomSummary], path: Path) -> Path:
    """Stacked bars of failure counts per axiom, with published totals."""
    plt = _pyplot()
    letters = [s.axiom for s in summaries]
    set_f = [s.set_failures for s in summaries]
    bag_f = [s.bag_only_failures for s in summaries]
    pub = [sum(s.published.values()) if s.published else 0 for s in summaries]
    xs = range(len(letters))
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.bar(xs, set_f, label="fails as sets", color="#b2432f")
    ax.bar(xs, bag_f, bottom=set_f, label="fails on cardinality only", color="#e8a23a")
    ax.scatter(xs, pub, marker="_", s=300, color="black", label="published count", zorder=3)
    ax.set_xticks(list(xs), [f"({x})" for x in letters])
    ax.set_ylabel("failing slot assignments")
    ax.set_title(f"{summaries[0].operator.upper()}: axiom failures")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def table2_figure(table: Table2, path: Path) -> Path:
    """Grid of rows × (condition, encoding) coloured by agreement with DIFF."""
    plt = _pyplot()
    cols = [(cond, col) for cond in CONDITIONS for col in COLUMNS if col != "DIFF"]
    grid = [[1.0 if r.cell(cond, col).agrees_with_diff else 0.0 for cond, col in cols]
            for r in table.rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.imshow(grid, cmap="RdYlGn", vmin=0, vmax=1, aspect="auto")
    ax.set_xticks(range(len(cols)), [f"{col}\n{cond}" for cond, col in cols], fontsize=7)
    ax.set_yticks(range(len(table.rows)),
                  [f"{r.index}: {r.p1},{r.p2}" for r in table.rows], fontsize=8)
    for i, r in enumerate(table.rows):
        for j, (cond, col) in enumerate(cols):
            if not r.cell(cond, col).populated:
                ax.text(j, i, "·", ha="center", va="center", fontsize=10)
    ax.set_title("agreement with DIFF (green) · = unpublished cell")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
