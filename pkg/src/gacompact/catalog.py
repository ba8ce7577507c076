"""Singular del Pezzo types: table rows, the negative-curve criterion, and the blow-up graph."""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter

from .exactalg import DomainError
from .groupact import CurveConfiguration, SurfaceModel


class NotCatalogedError(KeyError):
    """The requested type is not among the transcribed rows."""


class Kind(enum.Enum):
    P2 = "P2"
    P1XP1 = "P1xP1"
    F2 = "F2"
    BLOWUP = "blowup"


_ADE = re.compile(r"^(\d*)([ADE])(\d+)$")
_FAMILY_ORDER = {"E": 0, "D": 1, "A": 2}


def parse_singularities(text: str) -> tuple[str, ...]:
    """``"A3+2A1"`` -> ``("A3", "A1", "A1")``; empty string for no singularities."""
    out = []
    for part in filter(None, (p.strip() for p in text.split("+"))):
        m = _ADE.match(part)
        if not m:
            raise DomainError(f"unknown singularity label {part!r}")
        mult = int(m.group(1) or 1)
        label = m.group(2) + m.group(3)
        ade_rank(label)
        out.extend([label] * mult)
    return tuple(sorted(out, key=_label_key))


def _label_key(label: str):
    return (_FAMILY_ORDER[label[0]], -int(label[1:]))


def ade_rank(label: str) -> int:
    m = _ADE.match(label)
    if not m or m.group(1):
        raise DomainError(f"unknown singularity label {label!r}")
    family, n = m.group(2), int(m.group(3))
    valid = {"A": n >= 1, "D": n >= 4, "E": n in (6, 7, 8)}[family]
    if not valid:
        raise DomainError(f"unknown singularity label {label!r}")
    return n


def format_singularities(labels: tuple[str, ...]) -> str:
    counts = Counter(labels)
    parts = []
    for label in sorted(counts, key=_label_key):
        k = counts[label]
        parts.append(label if k == 1 else f"{k}{label}")
    return "+".join(parts)


@dataclass(frozen=True)
class DelPezzoType:
    degree: int
    kind: Kind
    singularities: tuple[str, ...]
    lines: int
    toric: bool
    additive: bool
    refs: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    in_table: bool = True

    def __post_init__(self):
        if not 1 <= self.degree <= 9:
            raise DomainError(f"degree {self.degree} out of range")
        if self.lines < 0:
            raise DomainError("negative line count")
        for label in self.singularities:
            ade_rank(label)

    @property
    def label(self) -> str:
        if self.kind is not Kind.BLOWUP:
            return self.kind.value
        if self.singularities:
            return format_singularities(self.singularities)
        return f"Bl{9 - self.degree}P2"

    @property
    def key(self) -> tuple[int, tuple[str, ...], int, Kind]:
        return (self.degree, self.singularities, self.lines, self.kind)

    @property
    def node_name(self) -> str:
        return f"{self.degree}/{self.label}"

    def __str__(self):
        return f"degree {self.degree} {self.label} ({self.lines} lines)"


def two_curve_count(t: DelPezzoType) -> int:
    if t.kind is Kind.F2:
        return 1
    return sum(ade_rank(s) for s in t.singularities)


def picard_rank(t: DelPezzoType) -> int:
    return {Kind.P2: 1, Kind.P1XP1: 2, Kind.F2: 2}.get(t.kind, 10 - t.degree)


def negative_curve_count(t: DelPezzoType) -> int:
    return t.lines + two_curve_count(t)


def passes_criterion(t: DelPezzoType) -> bool:
    """At most as many negative curves as the Picard rank."""
    return negative_curve_count(t) <= picard_rank(t)


def criterion_text(t: DelPezzoType) -> str:
    n, r = negative_curve_count(t), picard_rank(t)
    return f"{n}<={r}" if n <= r else f"{n}>{r}"


def classify(t: DelPezzoType) -> dict[str, bool]:
    row = lookup(t.degree, t.label, t.lines)
    return {"toric": row.toric, "additive": row.additive}


# -- transcribed rows ------------------------------------------------------------

_RATIONAL_POINT = "forms over a non-closed field need a non-singular rational point"


def _row(degree, label, lines, toric, additive, *refs, notes=(), in_table=True):
    kinds = {"P2": Kind.P2, "P1xP1": Kind.P1XP1, "F2": Kind.F2}
    if label in kinds:
        kind, sings = kinds[label], ()
    elif label.startswith("Bl"):
        kind, sings = Kind.BLOWUP, ()
        if int(label[2]) != 9 - degree:
            raise DomainError(f"{label} does not have degree {degree}")
    else:
        kind, sings = Kind.BLOWUP, parse_singularities(label)
    return DelPezzoType(degree, kind, sings, lines, toric, additive, tuple(refs), tuple(notes), in_table)


Y, N = True, False

ROWS: tuple[DelPezzoType, ...] = (
    _row(9, "P2", 0, Y, Y, "MR1620682", "MR1906155", notes=(_RATIONAL_POINT,)),
    _row(8, "Bl1P2", 1, Y, Y, "MR1620682", "MR1906155"),
    _row(8, "F2", 0, Y, Y, "MR1620682", "MR1906155", notes=(_RATIONAL_POINT,)),
    _row(8, "P1xP1", 0, Y, Y, notes=(_RATIONAL_POINT, "not a classification table row; taken from the blow-up graph"),
         in_table=False),
    _row(7, "Bl2P2", 3, Y, Y, "MR1620682", "MR1906155"),
    _row(7, "A1", 2, Y, Y, "MR1620682", "MR1906155"),
    _row(6, "Bl3P2", 6, Y, N, "MR1620682"),
    _row(6, "A1", 4, Y, N, "MR1620682"),
    _row(6, "A1", 3, N, Y, "MR1906155"),
    _row(6, "2A1", 2, Y, Y, "MR1620682", "MR1906155"),
    _row(6, "A2", 2, N, Y, "MR1906155"),
    _row(6, "A2+A1", 1, Y, Y, "MR1620682", "MR1906155"),
    _row(5, "Bl4P2", 10, N, N, "MR1909606", "MR2099200"),
    _row(5, "A1", 7, N, N),
    _row(5, "2A1", 5, Y, N, "MR1620682"),
    _row(5, "A2", 4, N, N, "arXiv:0710.1583"),
    _row(5, "A2+A1", 3, Y, N, "MR1620682"),
    _row(5, "A3", 2, N, Y, "MR1906155"),
    _row(5, "A4", 1, N, Y, "MR1906155"),
    _row(4, "Bl5P2", 16, N, N, "arXiv:0808.1616"),
    _row(4, "A1", 12, N, N),
    _row(4, "2A1", 9, N, N),
    _row(4, "2A1", 8, N, N, "arXiv:1002.0255"),
    _row(4, "A2", 8, N, N),
    _row(4, "3A1", 6, N, N),
    _row(4, "A2+A1", 6, N, N),
    _row(4, "A3", 5, N, N, "derenthal"),
    _row(4, "A3", 4, N, N),
    _row(4, "4A1", 4, Y, N, "MR1620682"),
    _row(4, "A2+2A1", 4, Y, N, "MR1620682"),
    _row(4, "A3+A1", 3, N, N, "MR2520770"),
    _row(4, "A4", 3, N, N, "MR2543667"),
    _row(4, "D4", 2, N, N, "MR2290499"),
    _row(4, "A3+2A1", 2, Y, N, "MR1620682"),
    _row(4, "D5", 1, N, Y, "MR1906155", "MR2320172"),
    _row(3, "D5", 3, N, N, "MR2520769"),
    _row(3, "3A2", 3, Y, N, "MR1620682"),
    _row(3, "E6", 1, N, N, "MR2332351"),
    _row(2, "E7", 1, N, N),
    _row(1, "E8", 1, N, N, notes=("two isomorphism classes over the algebraic closure",)),
)


def all_types() -> tuple[DelPezzoType, ...]:
    return ROWS


def lookup(degree: int, label: str, lines: int | None = None) -> DelPezzoType:
    """Find a row by degree, label and (when ambiguous) line count."""
    hits = [t for t in ROWS if t.degree == degree and t.label == label
            and (lines is None or t.lines == lines)]
    if not hits:
        raise _not_cataloged(degree, label, lines)
    if len(hits) > 1:
        raise DomainError(f"degree {degree} {label} is ambiguous; give the line count "
                          f"({sorted(t.lines for t in hits)})")
    return hits[0]


def _not_cataloged(degree, label, lines) -> NotCatalogedError:
    suffix = "" if lines is None else f" with {lines} lines"
    return NotCatalogedError(f"degree {degree} {label}{suffix} is not cataloged")


def figure_nodes() -> frozenset[DelPezzoType]:
    return frozenset(t for t in ROWS if passes_criterion(t))


# -- the blow-up graph ---------------------------------------------------------------

# Node names as "degree/label"; the degree-6 A1 node is the 3-line surface.
FIGURE_NODE_NAMES = (
    "9/P2", "8/Bl1P2", "8/F2", "8/P1xP1", "7/Bl2P2", "7/A1",
    "6/A1", "6/2A1", "6/A2", "6/A2+A1", "5/A3", "5/A4",
    "4/D4", "4/D5", "3/E6", "2/E7", "1/E8",
)
FIGURE_LINE_COUNTS = {"6/A1": 3}

# Each arrow points from a surface to the one it blows down to.
FIGURE_EDGES = (
    ("6/A2+A1", "7/A1"),
    ("5/A4", "6/A2+A1"),
    ("4/D5", "5/A4"),
    ("3/E6", "4/D5"),
    ("7/A1", "8/Bl1P2"),
    ("7/A1", "8/F2"),
    ("6/A2", "7/A1"),
    ("2/E7", "3/E6"),
    ("8/Bl1P2", "9/P2"),
    ("7/Bl2P2", "8/Bl1P2"),
    ("7/Bl2P2", "8/P1xP1"),
    ("6/2A1", "7/A1"),
    ("6/2A1", "7/Bl2P2"),
    ("5/A3", "6/A2"),
    ("5/A3", "6/2A1"),
    ("4/D4", "5/A3"),
    ("1/E8", "2/E7"),
    ("6/A1", "7/Bl2P2"),
)

STATED_TYPE_COUNT = 16


def _node(name: str) -> DelPezzoType:
    degree, label = name.split("/")
    return lookup(int(degree), label, FIGURE_LINE_COUNTS.get(name))


@dataclass(frozen=True)
class BlowupGraph:
    nodes: tuple[DelPezzoType, ...]
    edges: tuple[tuple[DelPezzoType, DelPezzoType], ...]

    def node(self, name: str) -> DelPezzoType:
        for t in self.nodes:
            if t.node_name == name:
                return t
        raise _not_cataloged(*name.split("/"), None)

    def has_edge(self, src: str, dst: str) -> bool:
        return any(a.node_name == src and b.node_name == dst for a, b in self.edges)

    def blow_downs(self, t: DelPezzoType) -> tuple[DelPezzoType, ...]:
        return tuple(b for a, b in self.edges if a == t)

    def topological_order(self) -> tuple[DelPezzoType, ...]:
        """Blow-down targets before their blow-ups; ``graphlib.CycleError`` on a cycle."""
        ts = TopologicalSorter({t: [] for t in self.nodes})
        for a, b in self.edges:
            ts.add(a, b)
        return tuple(ts.static_order())

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except CycleError:
            return False
        return True

    def validate(self) -> None:
        self.topological_order()
        for a, b in self.edges:
            if b.degree != a.degree + 1:
                raise DomainError(f"{a.node_name} -> {b.node_name} does not raise the degree by one")
            if picard_rank(a) != picard_rank(b) + 1:
                raise DomainError(f"{a.node_name} -> {b.node_name} is not a single blow-down")
            if two_curve_count(b) > two_curve_count(a):
                raise DomainError(f"{a.node_name} -> {b.node_name} creates (-2)-curves")


def blowup_graph() -> BlowupGraph:
    nodes = tuple(_node(n) for n in FIGURE_NODE_NAMES)
    edges = tuple((_node(a), _node(b)) for a, b in FIGURE_EDGES)
    graph = BlowupGraph(nodes, edges)
    graph.validate()
    return graph


# -- configuration criterion -------------------------------------------------------------

def rho_configuration_compatible(surface: SurfaceModel | CurveConfiguration) -> bool:
    """A rho-type structure needs every non-line negative curve over a single point."""
    config = surface if isinstance(surface, CurveConfiguration) else surface.configuration
    if config is None:
        raise DomainError(f"{getattr(surface, 'name', surface)} has no curve configuration")
    return len(config.points) == 1


# -- export -----------------------------------------------------------------------------------

TABLE_ROW_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "del Pezzo type row",
    "type": "object",
    "required": ["degree", "type", "kind", "singularities", "lines", "toric", "additive", "refs",
                 "notes", "in_table", "negative_curves", "picard_rank", "criterion"],
    "additionalProperties": False,
    "properties": {
        "degree": {"type": "integer", "minimum": 1, "maximum": 9},
        "type": {"type": "string"},
        "kind": {"enum": [k.value for k in Kind]},
        "singularities": {"type": "array", "items": {"type": "string", "pattern": "^[ADE][0-9]+$"}},
        "lines": {"type": "integer", "minimum": 0},
        "toric": {"type": "boolean"},
        "additive": {"type": "boolean"},
        "refs": {"type": "array", "items": {"type": "string"}},
        "notes": {"type": "array", "items": {"type": "string"}},
        "in_table": {"type": "boolean"},
        "negative_curves": {"type": "integer", "minimum": 0},
        "picard_rank": {"type": "integer", "minimum": 1},
        "criterion": {
            "type": "object",
            "required": ["passes", "text"],
            "additionalProperties": False,
            "properties": {"passes": {"type": "boolean"}, "text": {"type": "string"}},
        },
    },
}

TABLE_SCHEMA = {"type": "array", "items": TABLE_ROW_SCHEMA}


def row_to_json(t: DelPezzoType) -> dict:
    return {
        "degree": t.degree,
        "type": t.label,
        "kind": t.kind.value,
        "singularities": list(t.singularities),
        "lines": t.lines,
        "toric": t.toric,
        "additive": t.additive,
        "refs": list(t.refs),
        "notes": list(t.notes),
        "in_table": t.in_table,
        "negative_curves": negative_curve_count(t),
        "picard_rank": picard_rank(t),
        "criterion": {"passes": passes_criterion(t), "text": criterion_text(t)},
    }


def export_rows() -> list[dict]:
    return [row_to_json(t) for t in ROWS]
