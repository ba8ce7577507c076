"""Acceptance criteria 1-9, all exact (tolerance 0).

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import random
import time
from fractions import Fraction

import pytest
import sympy

from conftest import random_poly, to_sympy
from gacompact import catalog, models
from gacompact.exactalg import PolyMatrix, Polynomial, VariableContext, rank_over_fractions, substitute
from gacompact.groupact import (
    DIRECT_PRODUCT_LAW,
    ProjectiveLine,
    ProjectivePoint,
    act_on_polynomial,
    check_group_law,
    conjugated_tau,
    fixed_points_on_line,
    generic_unipotent_obstruction,
    is_fixed_point,
    is_ideal_invariant,
    is_linear_system_invariant,
    open_orbit_complement_check,
    projection_equivariance,
)
from gacompact.suite import run_suite

PLANE3 = ("x0", "x2", "x3")
ELL = ProjectiveLine.through((0, 1, 0), (0, 0, 1))


def pt(*c):
    return ProjectivePoint.of(*c)


# -- 1 -------------------------------------------------------------------------------------

@pytest.mark.criterion(1)
@pytest.mark.parametrize("make", [models.tau, models.rho, models.d5_representation,
                                  models.a3_representation, models.semidirect_representation],
                         ids=lambda f: f.__name__)
def test_group_laws(make):
    assert check_group_law(make()).holds


@pytest.mark.criterion(1)
def test_rho_bottom_left_entry():
    rho = models.rho()
    ctx = VariableContext(rho.coordinates, ("a", "b", "c", "d"))
    first = rho.matrix.to_context(ctx)
    second = rho.matrix.map(lambda x: x.compose({"a": ctx.var("c"), "b": ctx.var("d")}, ctx), ctx)
    assert (first @ second)[2, 0] == ctx.parse("(b + d) + (a + c)^2/2")


@pytest.mark.criterion(1)
def test_semidirect_law_is_the_twisted_one():
    rep = models.semidirect_representation()
    assert check_group_law(rep).holds
    assert not check_group_law(rep, DIRECT_PRODUCT_LAW).holds


# -- 2 -------------------------------------------------------------------------------------

@pytest.mark.criterion(2)
@pytest.mark.parametrize("surface, rep", [
    (models.d5_surface, models.d5_representation),
    (models.a3_surface, models.a3_representation),
    (models.a3a1_surface, models.semidirect_representation),
], ids=["D5", "A3", "A3+A1"])
def test_ideal_invariance_with_zero_remainder(surface, rep):
    s, r = surface(), rep()
    result = is_ideal_invariant(s, r)
    assert result.holds
    # rebuild every image from the certificate and compare exactly
    ctx = r.ctx
    gens = [g.to_context(ctx) for g in s.generators]
    for g, cert in zip(gens, result.certificates):
        combo = ctx.zero()
        for (j, mono), c in cert.items():
            combo += c * Polynomial(ctx, {mono + (0,) * len(ctx.parameters): 1}) * gens[j]
        assert act_on_polynomial(r, g) - combo == 0


# -- 3 -------------------------------------------------------------------------------------

@pytest.mark.criterion(3)
def test_e6_not_tau_invariant():
    r = is_linear_system_invariant(models.E6_PHI, models.tau(PLANE3))
    assert not r.holds and r.rank == 5 and r.size == 4


@pytest.mark.criterion(3)
def test_e6_pure_monomial_certificate():
    r = generic_unipotent_obstruction(models.E6_PHI)
    assert r.status == "certificate"
    assert r.certificates and all(c.is_monomial() and c != 0 for _, _, c in r.certificates)


@pytest.mark.criterion(3)
def test_e6_random_unipotent_specializations():
    rng = random.Random(2010)
    ctx = VariableContext(PLANE3)
    for _ in range(12):
        u = [Fraction(rng.choice([k for k in range(-9, 10) if k]), rng.randint(1, 5)) for _ in range(3)]
        U = PolyMatrix(ctx, [[1, 0, 0], [u[0], 1, 0], [u[1], u[2], 1]])
        assert not is_linear_system_invariant(models.E6_PHI, U).holds


# -- 4 -------------------------------------------------------------------------------------

@pytest.mark.criterion(4)
def test_semidirect_fixes_exactly_the_singularities():
    surface, rep = models.a3a1_surface(), models.semidirect_representation()
    singular = {p for p, _ in surface.singular_points}
    candidates = set(singular)
    for i, l1 in enumerate(surface.lines):
        for l2 in surface.lines[i + 1:]:
            q = l1.intersection(l2)
            if q is not None:
                candidates.add(q)
    fixed = {p for p in candidates if is_fixed_point(rep, p)}
    for line in surface.lines:
        locus = fixed_points_on_line(rep, line)
        assert locus.kind == "finite" and not locus.irrational_roots
        fixed.update(locus.points)
    assert fixed == singular == {pt(0, 0, 0, 0, 1), pt(0, 1, 0, 0, 0)}


@pytest.mark.criterion(4)
def test_d5_fixed_point_and_line():
    rep = models.d5_representation()
    assert is_fixed_point(rep, pt(0, 0, 0, 0, 1))
    locus = fixed_points_on_line(rep, models.d5_surface().lines[0])
    assert locus.kind == "finite" and locus.points == (pt(0, 0, 0, 0, 1),)


@pytest.mark.criterion(4)
def test_tau_and_rho_on_the_line():
    assert fixed_points_on_line(models.tau(), ELL).kind == "all"
    locus = fixed_points_on_line(models.rho(), ELL)
    assert locus.kind == "finite" and set(locus.points) == {pt(0, 0, 1)}


# -- 5 -------------------------------------------------------------------------------------

@pytest.mark.criterion(5)
def test_descent_d5():
    assert projection_equivariance(models.d5_representation(), models.tau(PLANE3), (0, 2, 3))


@pytest.mark.criterion(5)
def test_descent_semidirect():
    assert projection_equivariance(models.semidirect_representation(),
                                   models.semidirect_plane_representation(), (0, 1, 2))


# -- 6 -------------------------------------------------------------------------------------

@pytest.mark.criterion(6)
def test_conjugated_tau_symbolic():
    ctx = VariableContext((), ("a10", "a11", "a12", "a20", "a21", "a22"))
    A = PolyMatrix(ctx, [[1, 0, 0], ["a10", "a11", "a12"], ["a20", "a21", "a22"]])
    rep = conjugated_tau(A)
    P = rep.ctx.parse
    assert rep.matrix == PolyMatrix(rep.ctx, [[1, 0, 0], [P("a11*a + a12*b"), 1, 0], [P("a21*a + a22*b"), 0, 1]])
    # independent check of the displayed form
    a, b, *e = sympy.symbols("a b a10 a11 a12 a20 a21 a22")
    S = sympy.Matrix([[1, 0, 0], e[0:3], e[3:6]])
    got = sympy.simplify(S * sympy.Matrix([[1, 0, 0], [a, 1, 0], [b, 0, 1]]) * S.inv())
    want = sympy.Matrix([[1, 0, 0], [e[1] * a + e[2] * b, 1, 0], [e[4] * a + e[5] * b, 0, 1]])
    assert sympy.simplify(got - want) == sympy.zeros(3, 3)


# -- 7 -------------------------------------------------------------------------------------

@pytest.mark.criterion(7)
def test_criterion_equals_figure():
    assert {t.node_name for t in catalog.figure_nodes()} == set(catalog.FIGURE_NODE_NAMES)
    assert catalog.figure_nodes() == frozenset(catalog.blowup_graph().nodes)


@pytest.mark.criterion(7)
def test_additive_rows_pass():
    assert all(catalog.passes_criterion(t) for t in catalog.ROWS if t.additive)


TABLE_FLAGS = [
    # degree, type, lines, toric, additive
    (9, "P2", 0, True, True), (8, "Bl1P2", 1, True, True), (8, "F2", 0, True, True),
    (7, "Bl2P2", 3, True, True), (7, "A1", 2, True, True),
    (6, "Bl3P2", 6, True, False), (6, "A1", 4, True, False), (6, "A1", 3, False, True),
    (6, "2A1", 2, True, True), (6, "A2", 2, False, True), (6, "A2+A1", 1, True, True),
    (5, "Bl4P2", 10, False, False), (5, "A1", 7, False, False), (5, "2A1", 5, True, False),
    (5, "A2", 4, False, False), (5, "A2+A1", 3, True, False), (5, "A3", 2, False, True),
    (5, "A4", 1, False, True),
    (4, "Bl5P2", 16, False, False), (4, "A1", 12, False, False), (4, "2A1", 9, False, False),
    (4, "2A1", 8, False, False), (4, "A2", 8, False, False), (4, "3A1", 6, False, False),
    (4, "A2+A1", 6, False, False), (4, "A3", 5, False, False), (4, "A3", 4, False, False),
    (4, "4A1", 4, True, False), (4, "A2+2A1", 4, True, False), (4, "A3+A1", 3, False, False),
    (4, "A4", 3, False, False), (4, "D4", 2, False, False), (4, "A3+2A1", 2, True, False),
    (4, "D5", 1, False, True),
    (3, "D5", 3, False, False), (3, "3A2", 3, True, False), (3, "E6", 1, False, False),
    (2, "E7", 1, False, False), (1, "E8", 1, False, False),
]


@pytest.mark.criterion(7)
def test_classify_reproduces_table():
    printed = [t for t in catalog.ROWS if t.in_table]
    assert len(printed) == len(TABLE_FLAGS)
    for degree, label, lines, toric, additive in TABLE_FLAGS:
        t = catalog.lookup(degree, label, lines)
        assert catalog.classify(t) == {"toric": toric, "additive": additive}, (degree, label, lines)


@pytest.mark.criterion(7)
def test_rho_configuration_verdicts():
    assert not catalog.rho_configuration_compatible(models.D4_CONFIGURATION)
    assert catalog.rho_configuration_compatible(models.d5_surface())
    assert catalog.rho_configuration_compatible(models.e6_surface())


# -- 8 -------------------------------------------------------------------------------------

@pytest.mark.criterion(8)
@pytest.mark.parametrize("surface", [models.d5_surface, models.a3_surface, models.e6_surface,
                                     models.a3a1_surface], ids=lambda f: f.__name__)
def test_lines_and_singular_points_lie_on_surface(surface):
    s = surface()
    for p, _ in s.singular_points:
        assert all(g(*p.coords) == 0 for g in s.generators)
        assert s.is_singular_point(p)
    for line in s.lines:
        ctx = VariableContext(("s", "u"))
        param = line.parametrize(ctx)
        assert all(g.compose(dict(zip(s.ctx.coordinates, param)), ctx) == 0 for g in s.generators)


@pytest.mark.criterion(8)
def test_semidirect_lines_invariant():
    assert open_orbit_complement_check(models.a3a1_surface(), models.semidirect_representation())


# -- 9 -------------------------------------------------------------------------------------

@pytest.mark.criterion(9)
def test_substitution_homomorphism_on_1000_inputs():
    rng = random.Random(9001)
    ctx = VariableContext(("x0", "x1", "x2"), ("a", "b"))
    for _ in range(1000):
        f = random_poly(rng, ctx, 3, 2)
        g = random_poly(rng, ctx, 3, 2)
        sigma = {n: random_poly(rng, ctx, 3, 1) for n in ctx.coordinates}
        assert substitute(f * g, sigma) == substitute(f, sigma) * substitute(g, sigma)
        assert substitute(f + g, sigma) == substitute(f, sigma) + substitute(g, sigma)


def _random_rank_matrix(rng, ctx):
    m, n = rng.randint(1, 6), rng.randint(1, 6)
    k = rng.randint(0, min(m, n))
    L = [[random_poly(rng, ctx, 2, 1, 3) for _ in range(k)] for _ in range(m)]
    R = [[random_poly(rng, ctx, 2, 1, 3) for _ in range(n)] for _ in range(k)]
    rows = [[sum((L[i][t] * R[t][j] for t in range(k)), ctx.zero()) for j in range(n)] for i in range(m)]
    # sometimes add a full-rank perturbation so the rank is not always deficient
    if rng.random() < 0.3:
        rows = [[x + random_poly(rng, ctx, 1, 1, 2) for x in r] for r in rows]
    return rows


@pytest.mark.criterion(9)
def test_rank_matches_specialization_oracle_on_100_matrices():
    rng = random.Random(4242)
    ctx = VariableContext((), ("a", "b", "t"))
    syms = sympy.symbols(ctx.names)
    for _ in range(100):
        rows = _random_rank_matrix(rng, ctx)
        expected = 0
        generic = sympy.Matrix([[to_sympy(x) for x in r] for r in rows])
        for _ in range(6):
            values = {s: sympy.Rational(rng.randint(-97, 97), rng.randint(1, 13)) for s in syms}
            expected = max(expected, generic.subs(values).rank())
        assert rank_over_fractions(rows) == expected


# -- timing budget ---------------------------------------------------------------------------

def test_full_suite_under_ten_seconds():
    start = time.perf_counter()
    report = run_suite()
    assert report.passed
    assert time.perf_counter() - start < 10
