"""Brute-force equivalence checking over a finite graph space."""

from __future__ import annotations

from dataclasses import dataclass

from ..patterns import evaluate
from ..rdf import Dataset
from ..solutions import MappingMultiset
from ..syntax import Pattern
from .space import GraphSpace

EQUIVALENT = "equivalent"
INEQUIVALENT = "inequivalent"


@dataclass(frozen=True)
class Witness:
    dataset: Dataset
    left: MappingMultiset
    right: MappingMultiset


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: str
    witness: Witness | None
    graphs_checked: int
    semantics: str
    error_as_false: bool = True

    @property
    def equivalent(self) -> bool:
        return self.verdict == EQUIVALENT


def _compare(left, right, semantics):
    if semantics == "set":
        return left.distinct() == right.distinct()
    return left == right


def check_equiv(p1: Pattern, p2: Pattern, space: GraphSpace | None = None,
                semantics: str = "bag", error_as_false: bool = True) -> EquivalenceReport:
    """Compare ``p1`` and ``p2`` on every dataset of ``space`` in canonical
    order; the first mismatch is the witness."""
    if semantics not in ("bag", "set"):
        raise ValueError(f"semantics must be bag or set, got {semantics!r}")
    space = space or GraphSpace()
    checked = 0
    for ds in space.iter_datasets(p1, p2):
        checked += 1
        left = evaluate(p1, ds, error_as_false=error_as_false)
        right = evaluate(p2, ds, error_as_false=error_as_false)
        if not _compare(left, right, semantics):
            return EquivalenceReport(INEQUIVALENT, Witness(ds, left, right), checked,
                                     semantics, error_as_false)
    return EquivalenceReport(EQUIVALENT, None, checked, semantics, error_as_false)


def replay(report: EquivalenceReport, p1: Pattern, p2: Pattern) -> bool:
    """Re-evaluate the witness; true when it reproduces the recorded results."""
    w = report.witness
    if w is None:
        return False
    left = evaluate(p1, w.dataset, error_as_false=report.error_as_false)
    right = evaluate(p2, w.dataset, error_as_false=report.error_as_false)
    return (left == w.left and right == w.right
            and not _compare(left, right, report.semantics))
