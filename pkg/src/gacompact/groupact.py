"""Parametrized group representations on projective space and invariance checks.

A group element acts on a homogeneous polynomial by pullback, ``f(x) -> f(M x)``.
Statements that hold "for general parameters" are checked as identities over
the fraction field of the parameter ring; nothing here samples parameters.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactalg import (
    DomainError,
    PolyMatrix,
    Polynomial,
    VariableContext,
    is_homogeneous,
    matrix_inverse,
    monomials_of_degree,
    nullspace_rational,
    qdiv,
    rank_over_fractions,
    rref_rational,
    substitute,
)


class GroupKind(enum.Enum):
    ADDITIVE = "Ga^2"
    SEMIDIRECT = "Ga x| Gm"

    @property
    def parameters(self) -> tuple[str, str]:
        return ("a", "b") if self is GroupKind.ADDITIVE else ("b", "t")

    @property
    def identity(self) -> dict[str, int]:
        return {"a": 0, "b": 0} if self is GroupKind.ADDITIVE else {"b": 0, "t": 1}


# Product of (p_1) and (p_2) as parameter -> (numerator, denominator).
ADDITIVE_LAW = {"a": ("a_1 + a_2", "1"), "b": ("b_1 + b_2", "1")}
SEMIDIRECT_LAW = {"b": ("b_1*t_1 + b_2", "t_1"), "t": ("t_1*t_2", "1")}
DIRECT_PRODUCT_LAW = {"b": ("b_1 + b_2", "1"), "t": ("t_1*t_2", "1")}

DEFAULT_LAWS = {GroupKind.ADDITIVE: ADDITIVE_LAW, GroupKind.SEMIDIRECT: SEMIDIRECT_LAW}


@dataclass(frozen=True, eq=False)
class Representation:
    """Square matrix of polynomials in the group parameters, acting projectively.

    The context may carry parameters beyond the group ones (for example the
    entries of a symbolic change of coordinates); those are constants for the
    group.
    """

    name: str
    kind: GroupKind
    matrix: PolyMatrix

    def __post_init__(self):
        m, n = self.matrix.shape
        if m != n or n == 0:
            raise DomainError(f"{self.name}: representation matrix must be square")
        if n != self.ctx.ncoords:
            raise DomainError(f"{self.name}: {n}x{n} matrix but {self.ctx.ncoords} coordinates")
        for p in self.kind.parameters:
            if p not in self.ctx.parameters:
                raise DomainError(f"{self.name}: missing group parameter {p}")
        if not self.matrix.evaluate(self.kind.identity).is_scalar():
            raise DomainError(f"{self.name}: identity element does not act as a scalar")
        if not self.matrix.determinant():
            raise DomainError(f"{self.name}: determinant vanishes identically")

    @classmethod
    def from_rows(cls, name: str, kind: GroupKind, coordinates: Sequence[str],
                  rows: Sequence[Sequence[object]], extra_parameters: Sequence[str] = ()):
        ctx = VariableContext(tuple(coordinates), kind.parameters + tuple(extra_parameters))
        return cls(name, kind, PolyMatrix(ctx, rows))

    @property
    def ctx(self) -> VariableContext:
        return self.matrix.ctx

    @property
    def dim(self) -> int:
        return self.matrix.nrows

    @property
    def coordinates(self) -> tuple[str, ...]:
        return self.ctx.coordinates

    def at(self, **values) -> PolyMatrix:
        return self.matrix.evaluate(values)

    def __repr__(self):
        return f"Representation({self.name!r}, {self.kind.value}, {self.dim}x{self.dim})"


def _matrix_of(rep_or_matrix) -> PolyMatrix:
    if isinstance(rep_or_matrix, Representation):
        return rep_or_matrix.matrix
    if isinstance(rep_or_matrix, PolyMatrix):
        return rep_or_matrix
    raise TypeError(f"expected a Representation or PolyMatrix, got {type(rep_or_matrix).__name__}")


# -- projective comparison ----------------------------------------------------

@dataclass(frozen=True)
class ProportionalityResult:
    holds: bool
    scalar: tuple[Polynomial, Polynomial] | None = None  # first = (num/den) * second
    offending: int | None = None

    def __bool__(self):
        return self.holds


def projectively_equal(first: Sequence[Polynomial], second: Sequence[Polynomial]) -> ProportionalityResult:
    """Whether ``first = lambda * second`` for one nonzero rational function lambda."""
    if len(first) != len(second):
        raise DomainError("length mismatch")
    nz = [k for k, y in enumerate(second) if y]
    if not nz:
        return ProportionalityResult(not any(first), None, None if not any(first) else 0)
    k = min(nz, key=lambda i: (len(second[i]), i))
    num, den = first[k], second[k]
    if not num:
        return ProportionalityResult(False, None, k)
    for i, (x, y) in enumerate(zip(first, second)):
        if x * den != num * y:
            return ProportionalityResult(False, None, i)
    return ProportionalityResult(True, (num, den), None)


def _flat(M: PolyMatrix) -> list[Polynomial]:
    return [x for r in M.rows for x in r]


# -- group law ------------------------------------------------------------------

@dataclass(frozen=True)
class GroupLawResult:
    holds: bool
    scalar: tuple[Polynomial, Polynomial] | None
    offending: tuple[int, int] | None
    product: PolyMatrix
    expected: PolyMatrix

    def __bool__(self):
        return self.holds


def _substitute_fractions(M: PolyMatrix, images: Mapping[str, tuple[Polynomial, Polynomial]],
                          target: VariableContext) -> PolyMatrix:
    """Substitute ``p -> num/den`` in every entry, clearing one common denominator."""
    params = list(images)
    top = {p: max((x.degree([p]) for _, _, x in M.entries()), default=0) for p in params}
    cache: dict[tuple[str, int], Polynomial] = {}

    def factor(p, e):
        if (p, e) not in cache:
            num, den = images[p]
            cache[p, e] = num ** e * den ** (top[p] - e)
        return cache[p, e]

    def convert(x: Polynomial) -> Polynomial:
        out = target.zero()
        for exps, rest in x.split(params).items():
            term = rest.to_context(target)
            for p, e in zip(params, exps):
                term = term * factor(p, e)
            out = out + term
        return out

    return M.map(convert, target)


def check_group_law(rep: Representation, law: Mapping[str, tuple[str, str]] | None = None) -> GroupLawResult:
    """Check ``M(g1) M(g2) ~ M(g1 g2)`` with two fresh copies of the group parameters."""
    law = law or DEFAULT_LAWS[rep.kind]
    gp = rep.kind.parameters
    fresh = [f"{p}_{k}" for k in (1, 2) for p in gp]
    others = tuple(p for p in rep.ctx.parameters if p not in gp)
    clash = set(fresh) & set(rep.ctx.names)
    if clash:
        raise DomainError(f"fresh parameter names already in use: {sorted(clash)}")
    ctx = VariableContext(rep.coordinates, others + tuple(fresh))
    copies = []
    for k in (1, 2):
        images = {p: ctx.var(f"{p}_{k}") for p in gp}
        copies.append(rep.matrix.map(lambda x, im=images: x.compose(im, ctx), ctx))
    product = copies[0] @ copies[1]
    images = {p: (ctx.parse(num), ctx.parse(den)) for p, (num, den) in law.items()}
    expected = _substitute_fractions(rep.matrix, images, ctx)
    res = projectively_equal(_flat(product), _flat(expected))
    offending = None if res.offending is None else divmod(res.offending, rep.dim)
    return GroupLawResult(res.holds, res.scalar, offending, product, expected)


# -- polynomials under the action ----------------------------------------------

def act_on_polynomial(rep, f: Polynomial) -> Polynomial:
    """Pullback ``f(M x)``, with ``f`` re-expressed in the representation's context."""
    M = _matrix_of(rep)
    ctx = M.ctx
    missing = [n for n in f.variables() if n not in ctx.names]
    if missing:
        raise DomainError(f"variables {missing} are not coordinates or parameters of the action")
    f = f.to_context(ctx)
    xs = ctx.coordinate_vars()
    sigma = {name: img for name, img in zip(ctx.coordinates, M.apply(xs))}
    return substitute(f, sigma)


def coefficient_rows(polys: Iterable[Polynomial], degree: int) -> list[list[Polynomial]]:
    """Coefficients in the degree-``degree`` coordinate monomial basis.

    Entries are polynomials in the parameters of the (shared) context.
    """
    polys = list(polys)
    if not polys:
        return []
    ctx = polys[0].ctx
    basis = monomials_of_degree(ctx.ncoords, degree)
    rows = []
    for f in polys:
        parts = f.split(ctx.coordinates)
        extra = set(parts) - set(basis)
        if extra:
            raise DomainError(f"{f} is not homogeneous of degree {degree}")
        rows.append([parts.get(m, ctx.zero()) for m in basis])
    return rows


def _constant_rows(rows: list[list[Polynomial]]) -> list[list]:
    out = []
    for r in rows:
        if not all(x.is_constant() for x in r):
            raise DomainError("expected rational coefficients")
        out.append([x.constant_value() for x in r])
    return out


def _reduce_by_constant_span(target_row: list[Polynomial], R, pivots, T):
    """Express a parametric row against a constant RREF; return (coeffs, residual)."""
    ctx = target_row[0].ctx
    weights = [target_row[p] for p in pivots]
    residual = list(target_row)
    for w, r in zip(weights, R):
        if w:
            residual = [x - w * c if c else x for x, c in zip(residual, r)]
    ncols = len(T[0]) if T else 0
    coeffs = [ctx.zero()] * ncols
    for w, t in zip(weights, T):
        if w:
            coeffs = [x + w * c if c else x for x, c in zip(coeffs, t)]
    return coeffs, residual


# -- linear systems and surfaces -------------------------------------------------

@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Linearly independent homogeneous forms of a common degree."""

    basis: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if not self.basis:
            raise DomainError("empty linear system")
        ctx = self.basis[0].ctx
        degrees = set()
        for f in self.basis:
            if f.ctx != ctx:
                raise DomainError("basis members live in different contexts")
            ok, d = is_homogeneous(f)
            if not ok or d is None:
                raise DomainError(f"{f} is not a nonzero homogeneous form")
            degrees.add(d)
        if len(degrees) != 1:
            raise DomainError(f"basis members have degrees {sorted(degrees)}")
        if rank_over_fractions(coefficient_rows(self.basis, degrees.pop())) != len(self.basis):
            raise DomainError("basis members are linearly dependent")

    @classmethod
    def parse(cls, coordinates: Sequence[str], forms: Sequence[str]) -> "LinearSystem":
        ctx = VariableContext(tuple(coordinates))
        return cls(tuple(ctx.parse(s) for s in forms))

    @property
    def ctx(self) -> VariableContext:
        return self.basis[0].ctx

    @property
    def degree(self) -> int:
        return is_homogeneous(self.basis[0])[1]

    def __len__(self):
        return len(self.basis)

    def pulled_back(self, M: PolyMatrix) -> "LinearSystem":
        """The system ``{f(M x)}`` for a constant invertible ``M``."""
        return LinearSystem(tuple(act_on_polynomial(M, f.to_context(M.ctx)) for f in self.basis))


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    coords: tuple

    def __post_init__(self):
        coords = tuple(qdiv(Fraction(c), 1) for c in self.coords)
        if not any(coords):
            raise DomainError("the zero vector is not a projective point")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *coords) -> "ProjectivePoint":
        return cls(tuple(coords))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def normalized(self) -> tuple:
        lead = next(c for c in self.coords if c)
        return tuple(qdiv(c, lead) for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        if len(self) != len(other):
            return False
        p, q = self.coords, other.coords
        n = len(p)
        return all(p[i] * q[j] == p[j] * q[i] for i in range(n) for j in range(i + 1, n))

    def __hash__(self):
        return hash(self.normalized())

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class ProjectiveLine:
    """A line given by two distinct spanning points; equations are derived."""

    p: ProjectivePoint
    q: ProjectivePoint

    def __post_init__(self):
        if len(self.p) != len(self.q):
            raise DomainError("spanning points in different dimensions")
        if self.p == self.q:
            raise DomainError("spanning points coincide")

    @classmethod
    def through(cls, p, q) -> "ProjectiveLine":
        as_point = lambda x: x if isinstance(x, ProjectivePoint) else ProjectivePoint(tuple(x))
        return cls(as_point(p), as_point(q))

    @classmethod
    def from_equations(cls, forms: Sequence, n: int | None = None) -> "ProjectiveLine":
        """Line cut out by linear forms, given as Polynomials or coefficient vectors."""
        rows = []
        for f in forms:
            if isinstance(f, Polynomial):
                ok, d = is_homogeneous(f)
                if not ok or d != 1:
                    raise DomainError(f"{f} is not a linear form")
                rows.append(_constant_rows(coefficient_rows([f], 1))[0])
            else:
                rows.append(list(f))
        if n is None:
            if not rows:
                raise DomainError("dimension unknown")
            n = len(rows[0])
        kernel = nullspace_rational(rows, n)
        if len(kernel) != 2:
            raise DomainError(f"equations cut out a linear space of dimension {len(kernel) - 1}, not a line")
        return cls(ProjectivePoint(tuple(kernel[0])), ProjectivePoint(tuple(kernel[1])))

    @property
    def ambient(self) -> int:
        return len(self.p)

    @property
    def equations(self) -> list[list]:
        return nullspace_rational([list(self.p.coords), list(self.q.coords)])

    def contains(self, point: ProjectivePoint) -> bool:
        return all(sum(a * x for a, x in zip(eq, point.coords)) == 0 for eq in self.equations)

    def intersection(self, other: "ProjectiveLine") -> ProjectivePoint | None:
        """The unique common point, or None if the lines are disjoint or equal."""
        kernel = nullspace_rational(self.equations + other.equations, self.ambient)
        return ProjectivePoint(tuple(kernel[0])) if len(kernel) == 1 else None

    def parametrize(self, ctx: VariableContext) -> list[Polynomial]:
        """``s*p + u*q`` in a context whose coordinates are ``(s, u)``."""
        s, u = ctx.coordinate_vars()[:2]
        return [s * a + u * b for a, b in zip(self.p.coords, self.q.coords)]

    def __eq__(self, other):
        if not isinstance(other, ProjectiveLine):
            return NotImplemented
        return self.ambient == other.ambient and self.contains(other.p) and self.contains(other.q)

    def __hash__(self):
        return hash(self.ambient)

    def __str__(self):
        return f"line<{self.p}, {self.q}>"

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class CurveConfiguration:
    """Images in the plane of the negative curves: one line and points on it."""

    line: ProjectiveLine
    points: tuple[ProjectivePoint, ...]
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.line.ambient != 3:
            raise DomainError("configuration line must lie in the plane")
        for p in self.points:
            if not self.line.contains(p):
                raise DomainError(f"{p} is not on {self.line}")
        if len(set(self.points)) != len(self.points):
            raise DomainError("configuration points must be distinct")


@dataclass(frozen=True, eq=False)
class SurfaceModel:
    name: str
    ctx: VariableContext
    generators: tuple[Polynomial, ...]
    projection: tuple[int, ...] = ()
    inverse_map: LinearSystem | None = None
    singular_points: tuple[tuple[ProjectivePoint, str], ...] = ()
    lines: tuple[ProjectiveLine, ...] = ()
    configuration: CurveConfiguration | None = None

    def __post_init__(self):
        for attr in ("generators", "projection", "singular_points", "lines"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        for g in self.generators:
            if g.ctx != self.ctx:
                raise DomainError(f"{self.name}: generator in a foreign context")
            ok, d = is_homogeneous(g)
            if not ok or d is None:
                raise DomainError(f"{self.name}: generator {g} is not homogeneous")
        if any(not 0 <= i < self.ctx.ncoords for i in self.projection):
            raise DomainError(f"{self.name}: projection index out of range")
        for p, label in self.singular_points:
            if not self.contains_point(p):
                raise DomainError(f"{self.name}: singular point {p} ({label}) is not on the surface")
        for line in self.lines:
            if not self.contains_line(line):
                raise DomainError(f"{self.name}: {line} does not lie on the surface")

    @property
    def ambient_dim(self) -> int:
        return self.ctx.ncoords - 1

    def contains_point(self, p: ProjectivePoint) -> bool:
        if len(p) != self.ctx.ncoords:
            raise DomainError("dimension mismatch")
        return all(g(*p.coords) == 0 for g in self.generators)

    def contains_line(self, line: ProjectiveLine) -> bool:
        ctx = VariableContext(("s", "u"))
        param = dict(zip(self.ctx.coordinates, line.parametrize(ctx)))
        return all(not g.compose(param, ctx) for g in self.generators)

    def jacobian_rank(self, p: ProjectivePoint) -> int:
        rows = [[g.diff(x)(*p.coords) for x in self.ctx.coordinates] for g in self.generators]
        return len(rref_rational(rows)[1]) if rows else 0

    def is_singular_point(self, p: ProjectivePoint) -> bool:
        """On the surface with Jacobian rank below the codimension."""
        return self.contains_point(p) and self.jacobian_rank(p) < self.ambient_dim - 2


# -- invariance -----------------------------------------------------------------

@dataclass(frozen=True)
class IdealInvarianceResult:
    holds: bool
    failing_generator: int | None = None
    # per generator: {(generator index, multiplier monomial): coefficient}
    certificates: tuple[dict, ...] = ()
    residual: tuple[Polynomial, ...] = ()

    def __bool__(self):
        return self.holds


def is_ideal_invariant(surface: SurfaceModel, rep) -> IdealInvarianceResult:
    """Whether every generator's image lies in its graded piece of the ideal.

    Membership is decided by rank comparison over the parameter fraction field;
    the certificate writes each image as an explicit combination of monomial
    multiples of generators and is checked to leave zero remainder.
    """
    M = _matrix_of(rep)
    if M.nrows != surface.ctx.ncoords or M.ctx.coordinates != surface.ctx.coordinates:
        raise DomainError("representation and surface use different coordinates")
    ctx = M.ctx
    gens = [g.to_context(ctx) for g in surface.generators]
    degs = [is_homogeneous(g)[1] for g in gens]
    certs = []
    for gi, (g, d) in enumerate(zip(gens, degs)):
        spanning = []
        labels = []
        for j, (h, dh) in enumerate(zip(gens, degs)):
            if dh > d:
                continue
            for m in monomials_of_degree(ctx.ncoords, d - dh):
                mono = Polynomial(ctx, {m + (0,) * len(ctx.parameters): 1})
                spanning.append(mono * h)
                labels.append((j, m))
        image = act_on_polynomial(M, g)
        span_rows = coefficient_rows(spanning, d)
        (image_row,) = coefficient_rows([image], d)
        member = rank_over_fractions(span_rows + [image_row]) == rank_over_fractions(span_rows)
        R, pivots, T = rref_rational(_constant_rows(span_rows))
        coeffs, residual = _reduce_by_constant_span(image_row, R, pivots, T)
        if not member:
            return IdealInvarianceResult(False, gi, tuple(certs), tuple(residual))
        combo = sum((c * s for c, s in zip(coeffs, spanning) if c), ctx.zero())
        if combo != image or any(residual):
            raise ArithmeticError(f"membership certificate for generator {gi} does not verify")
        certs.append({labels[k]: c for k, c in enumerate(coeffs) if c})
    return IdealInvarianceResult(True, None, tuple(certs))


@dataclass(frozen=True)
class LinearSystemInvarianceResult:
    holds: bool
    rank: int
    size: int

    def __bool__(self):
        return self.holds


def is_linear_system_invariant(V: LinearSystem, rep) -> LinearSystemInvarianceResult:
    M = _matrix_of(rep)
    if M.ctx.coordinates != V.ctx.coordinates:
        raise DomainError(f"linear system in {V.ctx.coordinates}, action on {M.ctx.coordinates}")
    basis = [f.to_context(M.ctx) for f in V.basis]
    images = [act_on_polynomial(M, f) for f in basis]
    rank = rank_over_fractions(coefficient_rows(basis + images, V.degree))
    return LinearSystemInvarianceResult(rank == len(basis), rank, len(basis))


def induced_representation(V: LinearSystem, small: Representation, coordinates: Sequence[str],
                           name: str) -> Representation:
    """Matrix ``N`` with ``phi(M x) = N phi(x)``, where ``phi`` has components ``V.basis``."""
    if len(coordinates) != len(V):
        raise DomainError("one target coordinate per basis member is required")
    M = small.matrix
    if M.ctx.coordinates != V.ctx.coordinates:
        raise DomainError("linear system and action use different coordinates")
    basis = [f.to_context(M.ctx) for f in V.basis]
    R, pivots, T = rref_rational(_constant_rows(coefficient_rows(basis, V.degree)))
    rows = []
    for f in basis:
        (image_row,) = coefficient_rows([act_on_polynomial(M, f)], V.degree)
        coeffs, residual = _reduce_by_constant_span(image_row, R, pivots, T)
        if any(residual):
            raise DomainError(f"linear system is not invariant: image of {f} leaves the span")
        rows.append(coeffs)
    ctx = VariableContext(tuple(coordinates), M.ctx.parameters)
    return Representation(name, small.kind, PolyMatrix(ctx, [[c.to_context(ctx) for c in r] for r in rows]))


# -- the tau normal form ------------------------------------------------------------

def tau_matrix(ctx: VariableContext) -> PolyMatrix:
    return PolyMatrix(ctx, [[1, 0, 0], ["a", 1, 0], ["b", 0, 1]])


def conjugated_tau(A: PolyMatrix) -> Representation:
    """``A tau(a,b) A^-1`` for ``A`` with first row ``(1,0,0)``.

    The result is checked to have first column ``(1, a11 a + a12 b, a21 a + a22 b)``
    and identity elsewhere.
    """
    if A.shape != (3, 3):
        raise DomainError("A must be 3x3")
    if A.rows[0] != (A.ctx.one(), A.ctx.zero(), A.ctx.zero()):
        raise DomainError("A must have first row (1, 0, 0)")
    if not A.submatrix([1, 2], [1, 2]).determinant():
        raise DomainError("lower right 2x2 block of A must be invertible")
    clash = {"a", "b"} & set(A.ctx.names)
    if clash:
        raise DomainError(f"A must not use the group parameter names {sorted(clash)}")
    coords = A.ctx.coordinates or ("x0", "x1", "x2")
    ctx = VariableContext(coords, ("a", "b") + A.ctx.parameters)
    A = PolyMatrix(ctx, [[x.to_context(ctx) for x in r] for r in A.rows])
    adj, det = matrix_inverse(A)
    conj = A @ tau_matrix(ctx) @ adj
    a, b = ctx.var("a"), ctx.var("b")
    expected = PolyMatrix(ctx, [
        [1, 0, 0],
        [A[1, 1] * a + A[1, 2] * b, 1, 0],
        [A[2, 1] * a + A[2, 2] * b, 0, 1],
    ])
    if conj != expected * det:
        raise ArithmeticError("conjugated form does not match the expected normal form")
    return Representation("tau'", GroupKind.ADDITIVE, expected)


# -- generic unipotent obstruction -----------------------------------------------------

UNIPOTENT_PARAMETERS = ("u21", "u31", "u32")


def generic_unipotent(coordinates: Sequence[str]) -> PolyMatrix:
    ctx = VariableContext(tuple(coordinates), UNIPOTENT_PARAMETERS)
    return PolyMatrix(ctx, [[1, 0, 0], ["u21", 1, 0], ["u31", "u32", 1]])


@dataclass(frozen=True)
class ObstructionResult:
    status: str  # "certificate" | "invariant" | "inconclusive"
    # (basis index, monomial exponents, coefficient) for every nonzero obstruction
    obstructions: tuple[tuple[int, tuple[int, ...], Polynomial], ...] = ()

    @property
    def certificates(self):
        """Obstruction coefficients that are a single nonzero term in the u's."""
        return tuple(o for o in self.obstructions if o[2].is_monomial())

    def describe(self) -> str:
        if self.status != "certificate":
            return self.status
        i, m, c = self.certificates[0]
        return f"basis[{i}] image has coefficient {c} outside the span at exponent {m}"


def generic_unipotent_obstruction(V: LinearSystem) -> ObstructionResult:
    """Transverse coefficients of ``V`` under the generic lower unipotent matrix.

    A pure monomial coefficient in ``u21, u31, u32`` is nonzero whenever all
    three entries are, so it rules out invariance under every such matrix.
    """
    if V.ctx.ncoords != 3 or V.ctx.parameters:
        raise DomainError("expects a system in exactly three plane coordinates")
    U = generic_unipotent(V.ctx.coordinates)
    basis = [f.to_context(U.ctx) for f in V.basis]
    R, pivots, T = rref_rational(_constant_rows(coefficient_rows(basis, V.degree)))
    monos = monomials_of_degree(3, V.degree)
    found = []
    for i, f in enumerate(basis):
        (row,) = coefficient_rows([act_on_polynomial(U, f)], V.degree)
        _, residual = _reduce_by_constant_span(row, R, pivots, T)
        found.extend((i, monos[k], c) for k, c in enumerate(residual) if c)
    if not found:
        return ObstructionResult("invariant")
    result = ObstructionResult("certificate", tuple(found))
    return result if result.certificates else ObstructionResult("inconclusive", tuple(found))


# -- fixed loci -----------------------------------------------------------------------

def _image_of_point(M: PolyMatrix, p: ProjectivePoint) -> tuple[Polynomial, ...]:
    if len(p) != M.ncols:
        raise DomainError(f"point of length {len(p)} for a {M.ncols}x{M.ncols} action")
    return M.apply([M.ctx.constant(c) for c in p.coords])


def is_fixed_point(rep, p: ProjectivePoint) -> bool:
    """All 2x2 minors of ``[M p ; p]`` vanish identically."""
    M = _matrix_of(rep)
    img = _image_of_point(M, p)
    n = len(img)
    return all(img[i] * p.coords[j] == img[j] * p.coords[i] for i in range(n) for j in range(i + 1, n))


def _line_action(M: PolyMatrix, line: ProjectiveLine):
    """Coefficients with ``M p = al p + be q`` and ``M q = ga p + de q``; None if the line moves."""
    P, Q = line.p.coords, line.q.coords
    n = len(P)
    i, j = next((i, j) for i in range(n) for j in range(i + 1, n) if P[i] * Q[j] - P[j] * Q[i])
    d0 = P[i] * Q[j] - P[j] * Q[i]
    out = []
    for img in (_image_of_point(M, line.p), _image_of_point(M, line.q)):
        x = (img[i] * Q[j] - img[j] * Q[i]) / d0
        y = (img[j] * P[i] - img[i] * P[j]) / d0
        if any(v != x * pk + y * qk for v, pk, qk in zip(img, P, Q)):
            return None
        out.extend((x, y))
    return tuple(out)


def line_is_invariant(rep, line: ProjectiveLine) -> bool:
    """The line is mapped into itself, identically in the parameters."""
    M = _matrix_of(rep)
    if line.ambient != M.nrows:
        raise DomainError("line and action in different dimensions")
    return _line_action(M, line) is not None


@dataclass(frozen=True)
class LineFixedLocus:
    kind: str  # "all" | "finite" | "none"
    points: tuple[ProjectivePoint, ...] = ()
    irrational_roots: int = 0

    def __str__(self):
        if self.kind == "finite":
            extra = f" (+{self.irrational_roots} irrational)" if self.irrational_roots else ""
            return "{" + ", ".join(map(str, self.points)) + "}" + extra
        return self.kind


def fixed_points_on_line(rep, line: ProjectiveLine) -> LineFixedLocus:
    """Points of an invariant line fixed for all parameter values."""
    M = _matrix_of(rep)
    if line.ambient != M.nrows:
        raise DomainError("line and action in different dimensions")
    coeffs = _line_action(M, line)
    if coeffs is None:
        raise DomainError(f"{line} is not invariant")
    al, be, ga, de = coeffs
    # s*p + u*q is fixed iff be*s^2 + (de - al)*s*u - ga*u^2 = 0
    quad = [be, de - al, -ga]
    forms: dict[tuple, list] = {}
    for k, c in enumerate(quad):
        for e, v in c.terms.items():
            forms.setdefault(e, [0, 0, 0])[k] = v
    forms = [f for f in forms.values() if any(f)]
    if not forms:
        return LineFixedLocus("all")
    roots, irrational = _common_roots_binary(forms)
    if not roots and not irrational:
        return LineFixedLocus("none")
    points = []
    for s, u in roots:
        points.append(ProjectivePoint(tuple(s * a + u * b for a, b in zip(line.p.coords, line.q.coords))))
    return LineFixedLocus("finite", tuple(points), irrational)


def base_points_on_line(V: LinearSystem, line: ProjectiveLine) -> LineFixedLocus:
    """Common zeros of a linear system restricted to a line (rational ones listed)."""
    if line.ambient != V.ctx.ncoords:
        raise DomainError("line and linear system in different dimensions")
    ctx = VariableContext(("s", "u"))
    param = dict(zip(V.ctx.coordinates, line.parametrize(ctx)))
    d = V.degree
    forms = []
    for f in V.basis:
        g = f.compose(param, ctx)
        if g:
            forms.append([g.terms.get((d - k, k), 0) for k in range(d + 1)])
    if not forms:
        return LineFixedLocus("all")
    roots, irrational = _common_roots_binary(forms)
    if not roots and not irrational:
        return LineFixedLocus("none")
    pts = tuple(ProjectivePoint(tuple(s * a + u * b for a, b in zip(line.p.coords, line.q.coords)))
                for s, u in roots)
    return LineFixedLocus("finite", pts, irrational)


# -- binary forms over Q ---------------------------------------------------------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_mod(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b):
        q = qdiv(a[-1], b[-1])
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - q * c
        a = _trim(a[:-1]) if a[-1] == 0 else _trim(a)
    return a


def _poly_gcd(a: list, b: list) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    for k in range(1, math.isqrt(n) + 1):
        if n % k == 0:
            out.update((k, n // k))
    return sorted(out)


def _rational_roots(p: list) -> list[Fraction]:
    """Distinct rational roots of a univariate polynomial (coefficients low to high)."""
    p = _trim(p)
    roots = []
    if len(p) <= 1:
        return roots
    if p[0] == 0:
        roots.append(Fraction(0))
        while p and p[0] == 0:
            p = p[1:]
    if len(p) <= 1:
        return roots
    scale = math.lcm(*(Fraction(c).denominator for c in p))
    ints = [int(Fraction(c) * scale) for c in p]
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and sum(c * cand ** k for k, c in enumerate(ints)) == 0:
                    roots.append(cand)
    return roots


def _common_roots_binary(forms: list[list]) -> tuple[list[tuple], int]:
    """Common zeros in P^1 of binary forms given as ``[c_0, ..., c_d]`` for ``c_k s^(d-k) u^k``.

    Returns the rational roots as ``(s, u)`` pairs and the number of further
    roots that are not rational.
    """
    roots = []
    if all(f[0] == 0 for f in forms):
        roots.append((Fraction(1), Fraction(0)))
    # dehomogenize at u = 1: coefficient of s^j is c_{d-j}
    g: list = []
    for f in forms:
        g = _poly_gcd(g, list(reversed(f)))
    g = _trim(g)
    rational = _rational_roots(g)
    roots.extend((r, Fraction(1)) for r in rational)
    remaining = max(len(g) - 1, 0) - _rational_multiplicity(g, rational)
    return roots, remaining


def _rational_multiplicity(g: list, rational: list) -> int:
    """Degree of ``g`` accounted for by its rational roots, with multiplicity."""
    count = 0
    for r in rational:
        while len(_trim(g)) > 1:
            # synthetic division by (s - r)
            quot = [0] * (len(g) - 1)
            acc = 0
            for k in range(len(g) - 1, 0, -1):
                acc = acc * r + g[k]
                quot[k - 1] = acc
            if acc * r + g[0] != 0:
                break
            g = quot
            count += 1
    return count


# -- descent through a projection ---------------------------------------------------------

def projection_equivariance(big: Representation, small: Representation, coords: Sequence[int]) -> bool:
    """``pi(M_big x) ~ M_small pi(x)`` identically in ``x`` and the parameters."""
    coords = list(coords)
    if len(coords) != small.dim:
        raise DomainError(f"{len(coords)} projection coordinates for a {small.dim}-dimensional action")
    if any(not 0 <= i < big.dim for i in coords) or len(set(coords)) != len(coords):
        raise DomainError(f"projection indices {coords} out of range")
    params = big.ctx.parameters + tuple(p for p in small.ctx.parameters if p not in big.ctx.parameters)
    ctx = VariableContext(big.coordinates, params)
    Mb = big.matrix.to_context(ctx)
    xs = ctx.coordinate_vars()
    image = Mb.apply(xs)
    u = [image[i] for i in coords]
    rename = {small.coordinates[k]: xs[i] for k, i in enumerate(coords)}
    Ms = small.matrix.map(lambda x: x.compose(rename, ctx), ctx)
    v = list(Ms.apply([xs[i] for i in coords]))
    return projectively_equal(u, v).holds


def open_orbit_complement_check(surface: SurfaceModel, rep) -> bool:
    """Every listed line of the surface is invariant as a set."""
    if not is_ideal_invariant(surface, rep):
        raise DomainError(f"{surface.name} is not invariant under the action")
    return all(line_is_invariant(rep, line) for line in surface.lines)
