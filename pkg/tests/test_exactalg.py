import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import random_poly, to_sympy
from gacompact.exactalg import (
    DomainError,
    NotDivisibleError,
    NotInvertibleError,
    PolyMatrix,
    Polynomial,
    VariableContext,
    echelon_profile,
    is_homogeneous,
    matrix_inverse,
    monomials_of_degree,
    nullspace_rational,
    rank_over_fractions,
    rref_rational,
    substitute,
)
from gacompact.groupact import coefficient_rows
from gacompact import models

CTX = VariableContext(("x0", "x1", "x2"), ("a", "b"))
P = CTX.parse

coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=6)
exps = st.tuples(*[st.integers(0, 3)] * 5)


small_exps = st.tuples(*[st.integers(0, 2)] * 3, *[st.integers(0, 1)] * 2)


@st.composite
def polys(draw, ctx=CTX):
    return Polynomial(ctx, draw(st.dictionaries(exps, coeffs, max_size=5)))


@st.composite
def small_polys(draw):
    return Polynomial(CTX, draw(st.dictionaries(small_exps, coeffs, max_size=3)))


# -- construction and canonical form ---------------------------------------------------

def test_zero_coefficients_are_dropped():
    f = Polynomial(CTX, {(1, 0, 0, 0, 0): 0, (0, 1, 0, 0, 0): Fraction(2, 4)})
    assert len(f) == 1
    assert f.terms[(0, 1, 0, 0, 0)] == Fraction(1, 2)


def test_context_rejects_duplicate_names():
    with pytest.raises(DomainError):
        VariableContext(("x0", "x0"))
    with pytest.raises(DomainError):
        VariableContext(("x0",), ("x0",))


def test_parse_and_print_round_trip():
    f = P("x0*x1 - x2^2 + a^2*x0/2")
    assert P(str(f)) == f


def test_parse_rejects_unknown_variable():
    with pytest.raises(DomainError):
        P("x0 + y")


@given(polys(), polys())
def test_canonical_equality_is_structural(f, g):
    assert (f == g) == (dict(f.terms) == dict(g.terms))
    if f == g:
        assert hash(f) == hash(g)


@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == CTX.zero()


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_arithmetic_matches_sympy(f, g):
    assert to_sympy(f * g - g) == sympy.expand(to_sympy(f) * to_sympy(g) - to_sympy(g))


@given(polys(), polys())
def test_exact_div_inverts_multiplication(f, g):
    if g:
        assert (f * g).exact_div(g) == f


def test_exact_div_raises_when_inexact():
    with pytest.raises(NotDivisibleError):
        P("x0^2 + 1").exact_div(P("x0 + a"))


def test_evaluate_is_partial():
    f = P("a*x0 + b^2")
    assert f.evaluate({"a": 2}) == P("2*x0 + b^2")
    assert f(1, 0, 0, 3, 2) == 7


# -- substitution --------------------------------------------------------------------

def test_d5_quadric_is_fixed_by_substitution():
    sigma = {"x0": P("x0"), "x1": P("a^2*x0 + x1 + 2*a*x2"), "x2": P("a*x0 + x2")}
    f = P("x0*x1 - x2^2")
    assert substitute(f, sigma) == f


def test_substitution_identity_and_shift():
    ident = {n: CTX.var(n) for n in CTX.coordinates}
    f = P("x0^3*a - x1*x2 + 5")
    assert substitute(f, ident) == f
    assert substitute(P("x0"), {"x0": P("x0 + x1"), "x1": P("x1"), "x2": P("x2")}) == P("x0 + x1")


def test_substitution_requires_every_coordinate():
    with pytest.raises(DomainError):
        substitute(P("x0*x1"), {"x0": P("x1")})


def test_substitution_rejects_parameter_keys():
    with pytest.raises(DomainError):
        substitute(P("x0"), {"x0": P("x0"), "a": P("b")})


@st.composite
def sigmas(draw):
    return {n: draw(small_polys()) for n in CTX.coordinates}


@settings(max_examples=50)
@given(small_polys(), small_polys(), sigmas())
def test_substitution_is_a_ring_homomorphism(f, g, sigma):
    assert substitute(f * g, sigma) == substitute(f, sigma) * substitute(g, sigma)
    assert substitute(f + g, sigma) == substitute(f, sigma) + substitute(g, sigma)


@settings(max_examples=30, deadline=None)
@given(small_polys(), sigmas())
def test_substitution_matches_sympy(f, sigma):
    syms = dict(zip(CTX.coordinates, sympy.symbols(CTX.coordinates)))
    expected = sympy.expand(to_sympy(f).xreplace({syms[k]: to_sympy(v) for k, v in sigma.items()}))
    assert to_sympy(substitute(f, sigma)) == expected


@settings(max_examples=40)
@given(st.data())
def test_linear_substitution_preserves_homogeneity(data):
    d = data.draw(st.integers(0, 3))
    monos = monomials_of_degree(3, d)
    cs = data.draw(st.lists(coeffs, min_size=len(monos), max_size=len(monos)))
    f = Polynomial(CTX, {m + (0, 0): c for m, c in zip(monos, cs)})
    sigma = {n: sum((data.draw(coeffs) * v for v in CTX.coordinate_vars()), CTX.zero())
             for n in CTX.coordinates}
    g = substitute(f, sigma)
    ok, deg = is_homogeneous(g)
    assert ok
    assert deg in (d, None)


def test_is_homogeneous_examples():
    assert is_homogeneous(P("x0*x1 - x2^2")) == (True, 2)
    assert is_homogeneous(P("x0^3 + x0")) == (False, None)
    assert is_homogeneous(CTX.zero()) == (True, None)
    assert is_homogeneous(P("a^5*x0")) == (True, 1)


# -- matrices --------------------------------------------------------------------------

def tau_at(ctx, a, b):
    return PolyMatrix(ctx, [[1, 0, 0], [a, 1, 0], [b, 0, 1]])


def test_tau_inverse_is_tau_of_negatives():
    adj, det = matrix_inverse(tau_at(CTX, "a", "b"))
    assert det == 1
    assert adj == tau_at(CTX, "-a", "-b")


def test_tau_product_is_the_additive_law():
    ctx = VariableContext((), ("a", "b", "c", "d"))
    assert tau_at(ctx, "a", "b") @ tau_at(ctx, "c", "d") == tau_at(ctx, "a + c", "b + d")


def test_identity_inverse():
    adj, det = matrix_inverse(PolyMatrix.identity(CTX, 4))
    assert det == 1 and adj == PolyMatrix.identity(CTX, 4)


def test_singular_matrix_carries_determinant():
    with pytest.raises(NotInvertibleError) as info:
        matrix_inverse(PolyMatrix(CTX, [["a", "b"], ["2*a", "2*b"]]))
    assert info.value.determinant == 0


def random_matrix(rng, ctx, n):
    return PolyMatrix(ctx, [[random_poly(rng, ctx, 2, 2, 3) for _ in range(n)] for _ in range(n)])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_adjugate_times_matrix_is_determinant(rng, n):
    ctx = VariableContext((), ("a", "b"))
    for _ in range(5):
        M = random_matrix(rng, ctx, n)
        det = M.determinant()
        scalar = PolyMatrix.identity(ctx, n) * det
        assert M @ M.adjugate() == scalar
        assert M.adjugate() @ M == scalar
        assert to_sympy(det) == sympy.expand(
            sympy.Matrix([[to_sympy(x) for x in r] for r in M.rows]).det())


def test_rank_small_examples():
    assert rank_over_fractions(PolyMatrix.identity(CTX, 3)) == 3
    assert rank_over_fractions(PolyMatrix(CTX, [["a", "b"], ["a", "b"]])) == 1
    assert rank_over_fractions(PolyMatrix(CTX, [["a", "b"], ["b", "a"]])) == 2
    assert rank_over_fractions(PolyMatrix.zeros(CTX, 2, 3)) == 0


def d5_rank_matrix():
    surface = models.d5_surface()
    M = models.d5_representation().matrix
    from gacompact.groupact import act_on_polynomial
    gens = [g.to_context(M.ctx) for g in surface.generators]
    images = [act_on_polynomial(M, g) for g in gens]
    return coefficient_rows(gens + images, 2)


def test_d5_quadrics_and_images_have_rank_two():
    rows = d5_rank_matrix()
    assert (len(rows), len(rows[0])) == (4, 15)
    assert rank_over_fractions(rows) == 2


def test_d5_rank_agrees_with_specializations():
    rows = d5_rank_matrix()
    rng = random.Random(5)
    for _ in range(5):
        a, b = (Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
        spec = [[x.evaluate({"a": a, "b": b}).constant_value() for x in r] for r in rows]
        assert sympy.Matrix(spec).rank() == 2


def test_echelon_profile_reports_pivots():
    M = PolyMatrix(CTX, [[0, "a", 1], [0, "2*a", 2], [1, 0, 0]])
    rank, pivots = echelon_profile(M)
    assert rank == 2
    assert len(pivots) == 2


def test_rref_transform_reproduces_rows():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    R, pivots, T = rref_rational(rows)
    for i, r in enumerate(R):
        assert r == [sum(T[i][k] * rows[k][j] for k in range(3)) for j in range(3)]
    assert list(pivots) == [0, 1]


def test_nullspace_is_annihilated():
    rows = [[1, 2, 3], [0, 1, 1]]
    for v in nullspace_rational(rows):
        assert all(sum(r[j] * v[j] for j in range(3)) == 0 for r in rows)
