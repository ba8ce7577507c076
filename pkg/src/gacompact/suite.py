"""Registered verification checks and the report they produce."""

from __future__ import annotations

import enum
import fnmatch
import json
import random
import time
from dataclasses import asdict, dataclass
from typing import Callable

from . import catalog, models
from .exactalg import NotDivisibleError, PolyMatrix, VariableContext, matrix_inverse
from .groupact import (
    DIRECT_PRODUCT_LAW,
    base_points_on_line,
    ProjectiveLine,
    ProjectivePoint,
    Representation,
    check_group_law,
    conjugated_tau,
    fixed_points_on_line,
    generic_unipotent_obstruction,
    induced_representation,
    is_fixed_point,
    is_ideal_invariant,
    is_linear_system_invariant,
    open_orbit_complement_check,
    projection_equivariance,
    projectively_equal,
)

SEED = 20080101
RANDOM_TRIALS = 12


class UsageError(ValueError):
    """Bad command-line input, such as a filter that selects no checks."""


class Outcome(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CheckRecord:
    name: str
    anchor: str
    outcome: Outcome
    certificate: str
    wall_time: float | None = None
    required: bool = True

    def to_json(self, timings: bool = True) -> dict:
        d = asdict(self)
        d["outcome"] = self.outcome.value
        if not timings:
            d["wall_time"] = None
        return d

    @classmethod
    def from_json(cls, d: dict) -> "CheckRecord":
        return cls(d["name"], d["anchor"], Outcome(d["outcome"]), d["certificate"],
                   d["wall_time"], d["required"])


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckRecord, ...]
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not any(c.outcome is Outcome.FAIL or (c.required and c.outcome is Outcome.INCONCLUSIVE)
                       for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self, timings: bool = True) -> dict:
        return {
            "status": self.status,
            "checks": [c.to_json(timings) for c in self.checks],
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, d: dict) -> "VerificationReport":
        report = cls(tuple(CheckRecord.from_json(c) for c in d["checks"]), tuple(d["notes"]))
        if report.status != d["status"]:
            raise ValueError("status field disagrees with the check outcomes")
        return report

    def dumps(self, timings: bool = True) -> str:
        return json.dumps(self.to_json(timings), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "VerificationReport":
        return cls.from_json(json.loads(text))

    def render_text(self, timings: bool = False) -> str:
        width = max((len(c.name) for c in self.checks), default=0)
        lines = []
        for c in self.checks:
            t = f" [{c.wall_time * 1000:.1f} ms]" if timings and c.wall_time is not None else ""
            lines.append(f"{c.outcome.value.upper():<12} {c.name:<{width}}  {c.certificate}{t}")
        for note in self.notes:
            lines.append(f"note: {note}")
        n_pass = sum(c.outcome is Outcome.PASS for c in self.checks)
        lines.append(f"{self.status.upper()}: {n_pass}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"


# -- registry ------------------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    run: Callable[[], tuple[bool | None, str]]
    required: bool = True


REGISTRY: dict[str, Check] = {}


def check(name: str, anchor: str, required: bool = True):
    def register(fn):
        if name in REGISTRY:
            raise ValueError(f"duplicate check {name}")
        REGISTRY[name] = Check(name, anchor, fn, required)
        return fn
    return register


def _ratio(scalar) -> str:
    num, den = scalar
    try:
        return f"({num.exact_div(den)})"
    except NotDivisibleError:
        return f"({num})/({den})"


def _flat(M: PolyMatrix) -> list:
    return [x for r in M.rows for x in r]


def _law(rep: Representation, law=None) -> tuple[bool, str]:
    r = check_group_law(rep, law)
    if r.holds:
        return True, f"product = {_ratio(r.scalar)} * composite"
    return False, f"entry {r.offending} breaks proportionality"


def _ideal(surface, rep) -> tuple[bool, str]:
    r = is_ideal_invariant(surface, rep)
    if not r.holds:
        return False, f"generator {r.failing_generator} leaves the ideal"
    terms = sum(len(c) for c in r.certificates)
    return True, f"{len(r.certificates)} generator images rewritten with {terms} terms, zero remainder"


def _line_ell() -> ProjectiveLine:
    return ProjectiveLine.through((0, 1, 0), (0, 0, 1))


# -- plane actions -----------------------------------------------------------------------------

@check("tau-group-law", "additive structure tau on P2")
def _():
    return _law(models.tau())


@check("rho-group-law", "additive structure rho on P2")
def _():
    return _law(models.rho())


@check("rho-entry-identity", "rho composition, bottom-left entry")
def _():
    rep = models.rho()
    ctx = VariableContext(rep.coordinates, ("a", "b", "c", "d"))
    first = rep.matrix.to_context(ctx)
    second = rep.matrix.map(lambda x: x.compose({"a": ctx.var("c"), "b": ctx.var("d")}, ctx), ctx)
    entry = (first @ second)[2, 0]
    expected = ctx.parse("(b + d) + (a + c)^2/2")
    return entry == expected, f"(3,1) entry = {entry}"


@check("tau-fixes-line", "tau fixes the line at infinity pointwise")
def _():
    locus = fixed_points_on_line(models.tau(), _line_ell())
    return locus.kind == "all", f"fixed locus on x0=0: {locus}"


@check("rho-fixed-locus", "rho on the line at infinity")
def _():
    locus = fixed_points_on_line(models.rho(), _line_ell())
    ok = locus.kind == "finite" and set(locus.points) == {ProjectivePoint.of(0, 0, 1)}
    return ok, f"fixed locus on x0=0: {locus}"


@check("a1-deg6-line-fixed", "degree 6 A1 with 3 lines: three points on a tau-fixed line")
def _():
    pts = [ProjectivePoint.of(0, 1, c) for c in (0, 1, -1)]
    ok = all(is_fixed_point(models.tau(), p) for p in pts)
    return ok, "blown-up points (0:1:0), (0:1:1), (0:1:-1) fixed by tau"


@check("a2-deg6-fibre-fixed", "degree 6 A2: fibre through the blown-up points fixed pointwise")
def _():
    g = catalog.blowup_graph()
    chain = g.has_edge("6/A2", "7/A1") and g.has_edge("7/A1", "8/F2")
    locus = fixed_points_on_line(models.tau(), _line_ell())
    return chain and locus.kind == "all", "6/A2 -> 7/A1 -> 8/F2 and the fibre image x0=0 is tau-fixed"


@check("conjugation-tau-symbolic", "conjugate of tau by a matrix fixing the line")
def _():
    ctx = VariableContext((), ("a10", "a11", "a12", "a20", "a21", "a22"))
    A = PolyMatrix(ctx, [[1, 0, 0], ["a10", "a11", "a12"], ["a20", "a21", "a22"]])
    rep = conjugated_tau(A)
    col = [str(rep.matrix[i, 0]) for i in range(3)]
    return True, f"first column ({', '.join(col)}), identity elsewhere"


@check("conjugation-tau-identity", "conjugating tau by a shear returns tau")
def _():
    A = PolyMatrix(VariableContext(()), [[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    rep = conjugated_tau(A)
    return rep.matrix == models.tau().matrix.to_context(rep.ctx), "A = [[1,0,0],[1,1,0],[0,0,1]] gives tau"


# -- D5 quartic ----------------------------------------------------------------------------------

@check("d5-group-law", "D5 quartic, 5x5 representation")
def _():
    return _law(models.d5_representation())


@check("d5-ideal-invariance", "D5 quartic, ideal preserved")
def _():
    return _ideal(models.d5_surface(), models.d5_representation())


@check("d5-printed-matrix", "D5 quartic, printed matrix")
def _():
    printed = models.d5_printed_representation()
    induced = models.d5_representation()
    if is_ideal_invariant(models.d5_surface(), printed).holds:
        return False, "printed matrix unexpectedly preserves the ideal"
    D = PolyMatrix.identity(printed.ctx, 5)
    D = PolyMatrix(printed.ctx, [[-1 if i == j == 4 else D[i, j] for j in range(5)] for i in range(5)])
    ok = D @ printed.matrix @ D == induced.matrix.to_context(printed.ctx)
    return ok, "printed matrix misses the ideal; flipping the sign of x4 gives the induced one"


@check("d5-fixed-point", "D5 quartic, fixed singularity")
def _():
    p = ProjectivePoint.of(0, 0, 0, 0, 1)
    return is_fixed_point(models.d5_representation(), p), f"{p} fixed"


@check("d5-line-fixed-locus", "D5 quartic, action on its line")
def _():
    surface = models.d5_surface()
    locus = fixed_points_on_line(models.d5_representation(), surface.lines[0])
    ok = locus.kind == "finite" and set(locus.points) == {ProjectivePoint.of(0, 0, 0, 0, 1)}
    return ok, f"fixed locus on {surface.lines[0]}: {locus}"


@check("d5-projection-equivariance", "D5 quartic, projection to P2")
def _():
    ok = projection_equivariance(models.d5_representation(), models.tau(models.D5_PLANE), (0, 2, 3))
    return ok, "pi(M x) ~ tau pi(x) with pi = (x0, x2, x3)"


@check("d5-base-points", "D5 quartic, base locus on the line")
def _():
    locus = base_points_on_line(models.D5_PHI, _line_ell())
    ok = locus.kind == "finite" and set(locus.points) == {ProjectivePoint.of(0, 0, 1)}
    return ok, f"base points on x0=0: {locus}"


@check("d5-rho-configuration", "D5 quartic, negative curves over one point")
def _():
    ok = catalog.rho_configuration_compatible(models.d5_surface())
    return ok, "one point on the line"


# -- A3 quintic --------------------------------------------------------------------------------------

@check("a3-group-law", "A3 quintic, 6x6 representation")
def _():
    return _law(models.a3_representation())


@check("a3-ideal-invariance", "A3 quintic, ideal preserved")
def _():
    return _ideal(models.a3_surface(), models.a3_representation())


# -- E6 cubic ------------------------------------------------------------------------------------------

@check("e6-tau-linear-system", "E6 cubic, linear system under tau")
def _():
    r = is_linear_system_invariant(models.E6_PHI, models.tau(models.E6_PLANE))
    return not r.holds and r.rank == 5 and r.size == 4, f"rank {r.rank} > {r.size}"


@check("e6-unipotent-obstruction", "E6 cubic, generic lower unipotent action")
def _():
    r = generic_unipotent_obstruction(models.E6_PHI)
    if r.status == "inconclusive":
        return None, "no pure monomial obstruction"
    return r.status == "certificate", r.describe()


def _rng() -> random.Random:
    return random.Random(SEED)


def _nonzero(rng: random.Random, bound: int = 9) -> int:
    return rng.choice([k for k in range(-bound, bound + 1) if k])


@check("e6-unipotent-specializations", "E6 cubic, sampled lower unipotent matrices")
def _():
    rng = _rng()
    ctx = VariableContext(models.E6_PLANE)
    for _ in range(RANDOM_TRIALS):
        u21, u31, u32 = (_nonzero(rng) for _ in range(3))
        U = PolyMatrix(ctx, [[1, 0, 0], [u21, 1, 0], [u31, u32, 1]])
        r = is_linear_system_invariant(models.E6_PHI, U)
        if r.holds:
            return False, f"invariant under u = ({u21}, {u31}, {u32})"
    return True, f"{RANDOM_TRIALS} seeded specializations, all non-invariant"


@check("e6-rho-conjugates", "E6 cubic, conjugates of rho fixing the line and the point")
def _():
    rng = _rng()
    rho = models.rho(models.E6_PLANE)
    for _ in range(RANDOM_TRIALS):
        a10, a20, a21 = (rng.randint(-5, 5) for _ in range(3))
        a11, a22 = _nonzero(rng, 5), _nonzero(rng, 5)
        A = PolyMatrix(rho.ctx, [[1, 0, 0], [a10, a11, 0], [a20, a21, a22]])
        adj, _det = matrix_inverse(A)
        r = is_linear_system_invariant(models.E6_PHI, A @ rho.matrix @ adj)
        if r.holds:
            return False, f"invariant under conjugate by {A.rows}"
    r = is_linear_system_invariant(models.E6_PHI, rho)
    return not r.holds, f"rho and {RANDOM_TRIALS} seeded conjugates, all non-invariant"


@check("e6-base-points", "E6 cubic, base locus on the line")
def _():
    locus = base_points_on_line(models.E6_PHI, _line_ell())
    ok = locus.kind == "finite" and set(locus.points) == {ProjectivePoint.of(0, 0, 1)}
    return ok, f"base points on x0=0: {locus}"


@check("e6-rho-configuration", "E6 cubic, negative curves over one point")
def _():
    ok = catalog.rho_configuration_compatible(models.e6_surface())
    return ok, "one point on the line, so rho-type structures need the analytic exclusion"


# -- D4 quartic -------------------------------------------------------------------------------------------

@check("d4-rho-configuration", "D4 quartic, two points on the line")
def _():
    ok = not catalog.rho_configuration_compatible(models.D4_CONFIGURATION)
    return ok, "two points on the line rule out rho-type structures"


# -- A3+A1 quartic with the semidirect action --------------------------------------------------------

@check("semidirect-group-law", "A3+A1 quartic, semidirect law")
def _():
    return _law(models.semidirect_representation())


@check("semidirect-direct-law-fails", "A3+A1 quartic, direct product law")
def _():
    r = check_group_law(models.semidirect_representation(), DIRECT_PRODUCT_LAW)
    return not r.holds, f"entry {r.offending} breaks the direct product law"


@check("semidirect-plane-group-law", "A3+A1 quartic, 3x3 action on the plane")
def _():
    return _law(models.semidirect_plane_representation())


@check("semidirect-ideal-invariance", "A3+A1 quartic, ideal preserved")
def _():
    return _ideal(models.a3a1_surface(), models.semidirect_representation())


@check("semidirect-induced", "A3+A1 quartic, action induced through the inverse map")
def _():
    small = models.semidirect_plane_on_y()
    induced = induced_representation(models.SEMIDIRECT_PHI, small, models._coords(5), "induced")
    stored = models.semidirect_representation()
    r = projectively_equal(_flat(induced.matrix), _flat(stored.matrix))
    return r.holds, f"induced = {_ratio(r.scalar)} * stored"


@check("semidirect-fixed-points", "A3+A1 quartic, fixed points are the singularities")
def _():
    surface = models.a3a1_surface()
    rep = models.semidirect_representation()
    candidates = {p for p, _ in surface.singular_points}
    for i, l1 in enumerate(surface.lines):
        for l2 in surface.lines[i + 1:]:
            q = l1.intersection(l2)
            if q is not None:
                candidates.add(q)
    fixed = {p for p in candidates if is_fixed_point(rep, p)}
    for line in surface.lines:
        locus = fixed_points_on_line(rep, line)
        if locus.kind != "finite" or locus.irrational_roots:
            return False, f"{line} has fixed locus {locus}"
        fixed.update(locus.points)
    singular = {p for p, _ in surface.singular_points}
    listed = ", ".join(sorted(str(p) for p in fixed))
    return fixed == singular, f"fixed: {listed}"


@check("semidirect-projection-equivariance", "A3+A1 quartic, projection to P2")
def _():
    ok = projection_equivariance(models.semidirect_representation(),
                                 models.semidirect_plane_representation(), (0, 1, 2))
    return ok, "pi(M x) ~ M' pi(x) with pi = (x0, x1, x2)"


@check("semidirect-open-orbit", "A3+A1 quartic, lines bound the open orbit")
def _():
    surface = models.a3a1_surface()
    ok = open_orbit_complement_check(surface, models.semidirect_representation())
    return ok, f"all {len(surface.lines)} lines invariant"


# -- surface data ------------------------------------------------------------------------------------------

@check("surfaces-membership", "listed lines and singular points lie on their surfaces")
def _():
    count = 0
    for s in models.all_surfaces():
        for line in s.lines:
            if not s.contains_line(line):
                return False, f"{line} not on {s.name}"
            count += 1
        for p, label in s.singular_points:
            if not (s.contains_point(p) and s.is_singular_point(p)):
                return False, f"{label} point {p} not singular on {s.name}"
            count += 1
    return True, f"{count} lines and points verified"


# -- catalog -------------------------------------------------------------------------------------------------

@check("catalog-criterion-figure", "negative-curve criterion against the blow-up graph")
def _():
    graph = catalog.blowup_graph()
    ok = catalog.figure_nodes() == frozenset(graph.nodes)
    return ok, f"{len(graph.nodes)} passing types, equal to the graph nodes"


@check("catalog-additive-pass", "every additive type passes the criterion")
def _():
    bad = [t.node_name for t in catalog.ROWS if t.additive and not catalog.passes_criterion(t)]
    return not bad, "no exceptions" if not bad else f"failing: {bad}"


@check("catalog-converse", "criterion is not sufficient")
def _():
    got = {t.node_name for t in catalog.figure_nodes() if not t.additive}
    want = {"4/D4", "3/E6", "2/E7", "1/E8"}
    return got == want, "passing but not additive: " + ", ".join(sorted(got))


@check("catalog-classify", "toric and additive columns")
def _():
    for t in catalog.ROWS:
        if catalog.classify(t) != {"toric": t.toric, "additive": t.additive}:
            return False, f"{t} misclassified"
    a13 = catalog.classify(catalog.lookup(6, "A1", 3))
    a14 = catalog.classify(catalog.lookup(6, "A1", 4))
    ok = a13 == {"toric": False, "additive": True} and a14 == {"toric": True, "additive": False}
    return ok, f"{len(catalog.ROWS)} rows; degree 6 A1 with 3 lines {a13}, with 4 lines {a14}"


@check("catalog-graph", "blow-up graph invariants")
def _():
    graph = catalog.blowup_graph()
    for a, b in graph.edges:
        if a.additive and not b.additive:
            return False, f"{a.node_name} -> {b.node_name} leaves the additive set"
    ok = graph.is_acyclic() and graph.has_edge("3/E6", "4/D5")
    return ok, f"{len(graph.edges)} edges, acyclic, additive nodes closed under blow-down"


@check("catalog-node-count", "number of types in the blow-up graph")
def _():
    n = len(catalog.blowup_graph().nodes)
    return n == len(catalog.FIGURE_NODE_NAMES), (
        f"{n} nodes drawn; stated count {catalog.STATED_TYPE_COUNT}")


# -- running -----------------------------------------------------------------------------------------------------

NOTES = (
    f"the blow-up graph has {len(catalog.FIGURE_NODE_NAMES)} nodes against a stated count of "
    f"{catalog.STATED_TYPE_COUNT} types",
    "P1xP1 is placed in degree 8",
    "the printed D5 matrix has sign errors in its last row; the induced matrix is used",
)


def select(pattern: str | None = None) -> list[Check]:
    names = sorted(REGISTRY)
    if pattern is not None:
        names = [n for n in names if fnmatch.fnmatchcase(n, pattern)]
        if not names:
            raise UsageError(f"no check matches {pattern!r}")
    return [REGISTRY[n] for n in names]


def run_check(c: Check) -> CheckRecord:
    start = time.perf_counter()
    try:
        verdict, certificate = c.run()
    except Exception as exc:  # a crashing check is a failing check
        verdict, certificate = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    outcome = {True: Outcome.PASS, False: Outcome.FAIL, None: Outcome.INCONCLUSIVE}[verdict]
    return CheckRecord(c.name, c.anchor, outcome, certificate, elapsed, c.required)


def run_suite(pattern: str | None = None) -> VerificationReport:
    return VerificationReport(tuple(run_check(c) for c in select(pattern)), NOTES)
