"""DIFF against its OPT/!bound encodings over fixture-shaped inputs,
with the default graph either populated or empty."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import algebra
from ..patterns import evaluate
from ..rdf import Graph
from ..rewriter import encode_naf
from ..solutions import MappingMultiset
from ..syntax import Diff
from .fixtures import FIXTURE_GRAPH, fixture_dataset, fixture_multisets, realize

NONEMPTY = "G0≠∅"
EMPTY_DEFAULT = "G0=∅"
CONDITIONS = (NONEMPTY, EMPTY_DEFAULT)

# column -> encoding scheme (None for DIFF itself)
COLUMNS = {"DIFF": None, "P3": "perez", "P4": "polleres", "P4-as-printed": "polleres-as-printed"}

# (row, ⟦P1⟧, ⟦P2⟧, ⟦P1 DIFF P2⟧)
ROWS = (
    (1, "∅", "∅", "∅"),
    (2, "∅", "Ω0", "∅"),
    (3, "∅", "Ω2", "∅"),
    (4, "Ω0", "∅", "Ω0"),
    (5, "Ω0", "Ω0", "∅"),
    (6, "Ω0", "Ω2", "∅"),
    (7, "Ω1", "∅", "Ω1"),
    (8, "Ω1", "Ω0", "∅"),
    (9, "Ω1", "Ω1", "∅"),
    (10, "Ω1", "Ω2", "Ω1∖Ω2"),
    (11, "Ω1", "Ω3", "∅"),
)

# Published P3/P4 cells for the empty default graph; rows absent here are
# unpopulated.  With a populated default graph both columns equal DIFF.
PUBLISHED_EMPTY_DEFAULT = {
    1: ("∅", "∅"), 2: ("∅", "∅"), 3: ("∅", "∅"), 4: ("Ω0", "Ω0"), 5: ("Ω0", "∅"),
}


class UnrealizableRow(AssertionError):
    pass


def _value(label: str, omegas) -> MappingMultiset:
    if "∖" in label:
        a, b = label.split("∖")
        return algebra.sdiff(omegas[a], omegas[b])
    return omegas[label]


def published_label(row: int, condition: str, column: str, diff_label: str):
    if column == "DIFF" or (condition == NONEMPTY and column in ("P3", "P4")):
        return diff_label
    if condition == EMPTY_DEFAULT and column in ("P3", "P4") and row in PUBLISHED_EMPTY_DEFAULT:
        return PUBLISHED_EMPTY_DEFAULT[row][0 if column == "P3" else 1]
    return None


@dataclass(frozen=True)
class Cell:
    condition: str
    column: str
    value: MappingMultiset
    expected_label: str | None
    expected: MappingMultiset | None
    agrees_with_diff: bool

    @property
    def populated(self) -> bool:
        return self.expected is not None

    @property
    def matches_published(self) -> bool | None:
        return None if self.expected is None else self.value == self.expected


@dataclass(frozen=True)
class Row:
    index: int
    p1: str
    p2: str
    diff_label: str
    cells: tuple = field(default_factory=tuple)

    def cell(self, condition: str, column: str) -> Cell:
        for c in self.cells:
            if c.condition == condition and c.column == column:
                return c
        raise KeyError((condition, column))


@dataclass(frozen=True)
class Table2:
    rows: tuple

    def cells(self):
        for r in self.rows:
            for c in r.cells:
                yield r, c

    def mismatches_with_published(self) -> list:
        return [(r.index, c.condition, c.column) for r, c in self.cells()
                if c.populated and not c.matches_published]

    def disagreements(self, column: str, populated_only: bool = True) -> list:
        return [(r.index, c.condition) for r, c in self.cells()
                if c.column == column and not c.agrees_with_diff
                and (c.populated or not populated_only)]


def run_table2(rows=ROWS) -> Table2:
    """Realize each row's shapes as GRAPH-wrapped patterns over a named
    fixture graph so the default graph can be populated or empty."""
    omegas = fixture_multisets()
    datasets = {NONEMPTY: fixture_dataset(FIXTURE_GRAPH), EMPTY_DEFAULT: fixture_dataset(Graph())}
    out = []
    for index, s1, s2, diff_label in rows:
        p1, p2 = realize(s1, True), realize(s2, True)
        patterns = {col: Diff(p1, p2) if scheme is None else encode_naf(p1, p2, scheme)
                    for col, scheme in COLUMNS.items()}
        cells = []
        for cond in CONDITIONS:
            ds = datasets[cond]
            for side, shape in ((p1, s1), (p2, s2)):
                if evaluate(side, ds) != omegas[shape]:
                    raise UnrealizableRow(f"row {index}: {shape} not realized under {cond}")
            diff_value = evaluate(patterns["DIFF"], ds)
            if diff_value != _value(diff_label, omegas):
                raise UnrealizableRow(f"row {index}: DIFF gave {diff_value}")
            for col, p in patterns.items():
                v = evaluate(p, ds)
                label = published_label(index, cond, col, diff_label)
                expected = None if label is None else _value(label, omegas)
                cells.append(Cell(cond, col, v, label, expected, v == diff_value))
        out.append(Row(index, s1, s2, diff_label, tuple(cells)))
    return Table2(tuple(out))
