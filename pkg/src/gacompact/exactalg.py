"""Exact sparse polynomials over Q and fraction-free linear algebra.

Polynomials live in a :class:`VariableContext`, an ordered list of variable
names split into coordinates (``x0, x1, ...``) and parameters (``a, b, t``).
Every operation is exact; coefficients are ``int`` or normalized
``fractions.Fraction``.

>>> ctx = VariableContext(("x0", "x1", "x2"), ("a",))
>>> f = ctx.parse("x0*x1 - x2^2")
>>> sigma = {"x0": ctx.parse("x0"), "x1": ctx.parse("a^2*x0 + x1 + 2*a*x2"),
...          "x2": ctx.parse("a*x0 + x2")}
>>> substitute(f, sigma) == f
True
"""

from __future__ import annotations

import ast
import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "DomainError",
    "NotDivisibleError",
    "NotInvertibleError",
    "VariableContext",
    "Polynomial",
    "PolyMatrix",
    "substitute",
    "is_homogeneous",
    "rank_over_fractions",
    "echelon_profile",
    "matrix_product",
    "matrix_inverse",
    "monomials_of_degree",
    "rref_rational",
    "nullspace_rational",
    "qdiv",
]


class DomainError(ValueError):
    """Input outside an operation's domain."""


class NotDivisibleError(ArithmeticError):
    """Raised by :meth:`Polynomial.exact_div` when the quotient is not a polynomial."""


class NotInvertibleError(ArithmeticError):
    def __init__(self, determinant: "Polynomial"):
        super().__init__(f"matrix is not invertible (determinant {determinant})")
        self.determinant = determinant


Coeff = int | Fraction


def _coerce(c) -> Coeff:
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _coerce(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return _coerce(Fraction(c))
    raise TypeError(f"inexact or unsupported coefficient {c!r}")


def qdiv(a: Coeff, b: Coeff) -> Coeff:
    """Exact quotient of two rationals, kept as ``int`` when integral."""
    if b == 0:
        raise ZeroDivisionError("division by zero")
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return _coerce(Fraction(a) / Fraction(b))


def _grevlex_key(e: tuple[int, ...]):
    return (sum(e), tuple(-x for x in reversed(e)))


@dataclass(frozen=True)
class VariableContext:
    """Ordered variable names: coordinates first, then parameters."""

    coordinates: tuple[str, ...]
    parameters: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        names = self.coordinates + self.parameters
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate variable names in {names}")
        for name in names:
            if not name.isidentifier():
                raise DomainError(f"invalid variable name {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return self.coordinates + self.parameters

    @property
    def ncoords(self) -> int:
        return len(self.coordinates)

    def __len__(self) -> int:
        return len(self.coordinates) + len(self.parameters)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DomainError(f"unknown variable {name!r} in {self.names}") from None

    def is_coordinate(self, name: str) -> bool:
        return name in self.coordinates

    def zero(self) -> "Polynomial":
        return Polynomial(self)

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * len(self): c})

    def var(self, name: str) -> "Polynomial":
        e = [0] * len(self)
        e[self.index(name)] = 1
        return Polynomial._raw(self, {tuple(e): 1})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.var(n) for n in self.names)

    def coordinate_vars(self) -> tuple["Polynomial", ...]:
        return tuple(self.var(n) for n in self.coordinates)

    def with_parameters(self, extra: Iterable[str]) -> "VariableContext":
        extra = [p for p in extra if p not in self.parameters]
        return VariableContext(self.coordinates, self.parameters + tuple(extra))

    def parse(self, text: str) -> "Polynomial":
        """Parse ``+ - * ^ **`` expressions with integer literals and division by constants."""
        tree = ast.parse(text.replace("^", "**"), mode="eval")
        return _ParseVisitor(self).visit(tree.body)


class _ParseVisitor(ast.NodeVisitor):
    def __init__(self, ctx: VariableContext):
        self.ctx = ctx

    def generic_visit(self, node):
        raise DomainError(f"unsupported syntax: {ast.dump(node)}")

    def visit_Constant(self, node):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return self.ctx.constant(node.value)
        raise DomainError(f"unsupported literal {node.value!r}")

    def visit_Name(self, node):
        return self.ctx.var(node.id)

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        return self.generic_visit(node)

    def visit_BinOp(self, node):
        left = self.visit(node.left)
        right = self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Pow):
            if not right.is_constant() or not isinstance(right.constant_value(), int):
                raise DomainError("exponent must be a non-negative integer")
            return left ** right.constant_value()
        if isinstance(node.op, ast.Div):
            if not right.is_constant():
                raise DomainError("only division by constants is supported")
            return left / right.constant_value()
        return self.generic_visit(node)


class Polynomial:
    """Immutable sparse polynomial: exponent vector -> nonzero rational."""

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: VariableContext, terms: Mapping[Sequence[int], object] | None = None):
        n = len(ctx)
        clean: dict[tuple[int, ...], Coeff] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n or min(e, default=0) < 0:
                raise DomainError(f"bad exponent vector {e} for {ctx.names}")
            c = _coerce(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.ctx = ctx
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx, terms):
        p = cls.__new__(cls)
        p.ctx = ctx
        p._terms = terms
        p._hash = None
        return p

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple[int, ...], Coeff]:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple[tuple[int, ...], Coeff]]:
        """Terms in descending graded reverse-lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: _grevlex_key(kv[0]), reverse=True)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise DomainError(f"{self} is not constant")
        return next(iter(self._terms.values()), 0)

    def is_monomial(self) -> bool:
        """True for a single nonzero term ``c * m``."""
        return len(self._terms) == 1

    def variables(self) -> tuple[str, ...]:
        used = set()
        for e in self._terms:
            used.update(i for i, x in enumerate(e) if x)
        return tuple(self.ctx.names[i] for i in sorted(used))

    def degree(self, names: Iterable[str] | None = None) -> int:
        """Total degree, optionally restricted to ``names``; -1 for zero."""
        if names is None:
            idx = range(len(self.ctx))
        else:
            idx = [self.ctx.index(n) for n in names]
        return max((sum(e[i] for i in idx) for e in self._terms), default=-1)

    def coordinate_degrees(self) -> set[int]:
        k = self.ctx.ncoords
        return {sum(e[:k]) for e in self._terms}

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ctx != self.ctx:
                raise DomainError(f"context mismatch: {self.ctx.names} vs {other.ctx.names}")
            return other
        return self.ctx.constant(other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _coerce(s) if isinstance(s, Fraction) else s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ctx, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                c = _coerce(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Polynomial._raw(self.ctx, {})
            return Polynomial._raw(self.ctx, {e: _coerce(v * c) for e, v in self._terms.items()})
        other = self._lift(other)
        out: dict[tuple[int, ...], Coeff] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self.ctx, {e: _coerce(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            return self.exact_div(other)
        c = _coerce(other)
        return Polynomial._raw(self.ctx, {e: qdiv(v, c) for e, v in self._terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("exponent must be a non-negative integer")
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_div(self, g: "Polynomial") -> "Polynomial":
        """Quotient ``self / g``; raises :class:`NotDivisibleError` unless exact."""
        g = self._lift(g)
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        if g.is_constant():
            return self / g.constant_value()
        lead = max(g._terms, key=_grevlex_key)
        lc = g._terms[lead]
        rem = dict(self._terms)
        quot: dict[tuple[int, ...], Coeff] = {}
        while rem:
            m = max(rem, key=_grevlex_key)
            shift = tuple(x - y for x, y in zip(m, lead))
            if min(shift) < 0:
                raise NotDivisibleError(f"{g} does not divide {self}")
            q = qdiv(rem[m], lc)
            quot[shift] = q
            for e, c in g._terms.items():
                k = tuple(x + y for x, y in zip(shift, e))
                v = rem.get(k, 0) - q * c
                if v:
                    rem[k] = _coerce(v)
                else:
                    rem.pop(k, None)
        return Polynomial._raw(self.ctx, quot)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ctx == other.ctx and self._terms == other._terms
        try:
            c = _coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == ({(0,) * len(self.ctx): c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._terms.items())))
        return self._hash

    # -- evaluation and substitution ---------------------------------------

    def compose(self, images: Mapping[str, "Polynomial"], target: VariableContext | None = None) -> "Polynomial":
        """Replace named variables by polynomials in ``target``.

        Variables without an image map to the same-named variable of ``target``.
        """
        target = target or self.ctx
        gens: list[Polynomial] = []
        for name in self.ctx.names:
            if name in images:
                img = images[name]
                if not isinstance(img, Polynomial):
                    img = target.constant(img)
                if img.ctx != target:
                    raise DomainError(f"image of {name} lives in {img.ctx.names}, expected {target.names}")
                gens.append(img)
            else:
                gens.append(target.var(name))
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = gens[i] if k == 1 else power(i, k - 1) * gens[i]
            return powers[key]

        # pure variable renames skip polynomial multiplication
        renames = {}
        for i, g in enumerate(gens):
            if g.is_monomial():
                (e, c), = g._terms.items()
                if c == 1 and sum(e) == 1:
                    renames[i] = e.index(1)
        acc: dict[tuple[int, ...], Coeff] = {}
        for e, c in self._terms.items():
            base = [0] * len(target)
            term = None
            for i, k in enumerate(e):
                if not k:
                    continue
                if i in renames:
                    base[renames[i]] += k
                else:
                    term = power(i, k) if term is None else term * power(i, k)
            base_t = tuple(base)
            if term is None:
                acc[base_t] = acc.get(base_t, 0) + c
            else:
                for e2, c2 in term._terms.items():
                    k2 = tuple(x + y for x, y in zip(base_t, e2))
                    acc[k2] = acc.get(k2, 0) + c * c2
        return Polynomial._raw(target, {e: _coerce(v) for e, v in acc.items() if v})

    def to_context(self, target: VariableContext) -> "Polynomial":
        """Re-express in ``target``, matching variables by name."""
        if target == self.ctx:
            return self
        idx = [target.index(n) if any(e[i] for e in self._terms) else None
               for i, n in enumerate(self.ctx.names)]
        out = {}
        for e, c in self._terms.items():
            new = [0] * len(target)
            for i, k in enumerate(e):
                if k:
                    new[idx[i]] += k
            out[tuple(new)] = c
        return Polynomial._raw(target, out)

    def evaluate(self, values: Mapping[str, object]) -> "Polynomial":
        """Specialize some variables to rationals; the context is kept."""
        idx = {self.ctx.index(n): _coerce(v) for n, v in values.items()}
        acc: dict[tuple[int, ...], Coeff] = {}
        for e, c in self._terms.items():
            new = list(e)
            for i, v in idx.items():
                if new[i]:
                    c = c * v ** new[i]
                    new[i] = 0
            if c:
                t = tuple(new)
                acc[t] = acc.get(t, 0) + c
        return Polynomial._raw(self.ctx, {e: _coerce(v) for e, v in acc.items() if v})

    def __call__(self, *point) -> Coeff:
        """Evaluate at a full point (one value per context variable)."""
        if len(point) != len(self.ctx):
            raise DomainError(f"expected {len(self.ctx)} values, got {len(point)}")
        return self.evaluate(dict(zip(self.ctx.names, point))).constant_value()

    def diff(self, name: str) -> "Polynomial":
        i = self.ctx.index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                new = list(e)
                new[i] -= 1
                out[tuple(new)] = c * e[i]
        return Polynomial._raw(self.ctx, out)

    def split(self, names: Sequence[str]) -> dict[tuple[int, ...], "Polynomial"]:
        """Group terms by their exponents in ``names``; values keep the other variables."""
        idx = [self.ctx.index(n) for n in names]
        out: dict[tuple[int, ...], dict] = {}
        for e, c in self._terms.items():
            key = tuple(e[i] for i in idx)
            rest = list(e)
            for i in idx:
                rest[i] = 0
            out.setdefault(key, {})[tuple(rest)] = c
        return {k: Polynomial._raw(self.ctx, v) for k, v in out.items()}

    # -- display ------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ctx.names, e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def substitute(f: Polynomial, sigma: Mapping[str, Polynomial]) -> Polynomial:
    """Replace every coordinate variable of ``f`` by its image under ``sigma``.

    Parameters pass through unchanged. Images must live in ``f.ctx``.
    """
    for name in f.variables():
        if f.ctx.is_coordinate(name) and name not in sigma:
            raise DomainError(f"no substitution image for coordinate {name}")
    for name in sigma:
        if not f.ctx.is_coordinate(name):
            raise DomainError(f"{name} is not a coordinate variable")
    return f.compose(sigma)


def is_homogeneous(f: Polynomial) -> tuple[bool, int | None]:
    """``(True, d)`` if ``f`` is homogeneous of coordinate degree ``d``.

    The zero polynomial gives ``(True, None)``; a non-homogeneous one ``(False, None)``.
    """
    degrees = f.coordinate_degrees()
    if not degrees:
        return True, None
    if len(degrees) == 1:
        return True, degrees.pop()
    return False, None


def monomials_of_degree(nvars: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree ``d``, in descending grevlex order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out), key=_grevlex_key, reverse=True)


class PolyMatrix:
    """Rectangular matrix of polynomials sharing one context."""

    __slots__ = ("ctx", "_rows")

    def __init__(self, ctx: VariableContext, rows: Sequence[Sequence[object]]):
        built = []
        for row in rows:
            r = []
            for x in row:
                if isinstance(x, Polynomial):
                    if x.ctx != ctx:
                        raise DomainError("matrix entry in a foreign context")
                    r.append(x)
                elif isinstance(x, str):
                    r.append(ctx.parse(x))
                else:
                    r.append(ctx.constant(x))
            built.append(tuple(r))
        if built and len({len(r) for r in built}) != 1:
            raise DomainError("ragged matrix")
        self.ctx = ctx
        self._rows = tuple(built)

    @classmethod
    def identity(cls, ctx: VariableContext, n: int) -> "PolyMatrix":
        return cls(ctx, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ctx: VariableContext, m: int, n: int) -> "PolyMatrix":
        return cls(ctx, [[0] * n for _ in range(m)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), (len(self._rows[0]) if self._rows else 0)

    @property
    def nrows(self) -> int:
        return self.shape[0]

    @property
    def ncols(self) -> int:
        return self.shape[1]

    @property
    def rows(self) -> tuple[tuple[Polynomial, ...], ...]:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def column(self, j: int) -> tuple[Polynomial, ...]:
        return tuple(r[j] for r in self._rows)

    def entries(self) -> Iterator[tuple[int, int, Polynomial]]:
        for i, r in enumerate(self._rows):
            for j, x in enumerate(r):
                yield i, j, x

    def map(self, fn, ctx: VariableContext | None = None) -> "PolyMatrix":
        return PolyMatrix(ctx or self.ctx, [[fn(x) for x in r] for r in self._rows])

    def to_context(self, ctx: VariableContext) -> "PolyMatrix":
        return self.map(lambda x: x.to_context(ctx), ctx)

    def evaluate(self, values: Mapping[str, object]) -> "PolyMatrix":
        return self.map(lambda x: x.evaluate(values))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ctx, list(zip(*self._rows)))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.ctx, [[self._rows[i][j] for j in cols] for i in rows])

    def apply(self, vector: Sequence[Polynomial]) -> tuple[Polynomial, ...]:
        if len(vector) != self.ncols:
            raise DomainError("dimension mismatch")
        zero = self.ctx.zero()
        return tuple(sum((x * v for x, v in zip(r, vector)), zero) for r in self._rows)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.ctx != other.ctx:
            raise DomainError("context mismatch")
        if self.ncols != other.nrows:
            raise DomainError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [other.column(j) for j in range(other.ncols)]
        zero = self.ctx.zero()
        return PolyMatrix(self.ctx, [
            [sum((x * y for x, y in zip(r, c) if x and y), zero) for c in cols]
            for r in self._rows
        ])

    def __mul__(self, scalar) -> "PolyMatrix":
        return self.map(lambda x: x * scalar)

    __rmul__ = __mul__

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise DomainError("shape mismatch")
        return PolyMatrix(self.ctx, [[x + y for x, y in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.ctx == other.ctx and self._rows == other._rows

    def __hash__(self):
        return hash((self.ctx, self._rows))

    def is_zero(self) -> bool:
        return not any(x for _, _, x in self.entries())

    def is_scalar(self) -> bool:
        """Square with zero off-diagonal and equal diagonal entries."""
        m, n = self.shape
        if m != n:
            return False
        d = self._rows[0][0] if m else None
        return all((x == d) if i == j else not x for i, j, x in self.entries())

    def determinant(self) -> Polynomial:
        m, n = self.shape
        if m != n:
            raise DomainError("determinant of a non-square matrix")
        if n == 0:
            return self.ctx.one()
        rank, _, work, sign = _bareiss([list(r) for r in self._rows], self.ctx)
        if rank < n:
            return self.ctx.zero()
        return work[n - 1][n - 1] * sign

    def adjugate(self) -> "PolyMatrix":
        n, m = self.shape
        if n != m:
            raise DomainError("adjugate of a non-square matrix")
        if n == 1:
            return PolyMatrix.identity(self.ctx, 1)
        idx = range(n)
        cof = [[self.submatrix([r for r in idx if r != i], [c for c in idx if c != j]).determinant()
                * (-1) ** (i + j) for j in idx] for i in idx]
        return PolyMatrix(self.ctx, cof).transpose()

    def __str__(self):
        cells = [[str(x) for x in r] for r in self._rows]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)

    def __repr__(self):
        return f"PolyMatrix({[[str(x) for x in r] for r in self._rows]})"


def _bareiss(work: list[list[Polynomial]], ctx: VariableContext):
    """Fraction-free row echelon form, in place.

    Returns ``(rank, pivots, work, sign)`` where ``pivots`` lists (row, column)
    positions and ``sign`` records the parity of row swaps.
    """
    m = len(work)
    n = len(work[0]) if m else 0
    prev: Polynomial | None = None
    r = 0
    sign = 1
    pivots = []
    zero = ctx.zero()
    for c in range(n):
        if r == m:
            break
        candidates = [i for i in range(r, m) if work[i][c]]
        if not candidates:
            continue
        p = min(candidates, key=lambda i: (len(work[i][c]), i))
        if p != r:
            work[r], work[p] = work[p], work[r]
            sign = -sign
        piv = work[r][c]
        for i in range(r + 1, m):
            lead = work[i][c]
            row = work[i]
            prow = work[r]
            for j in range(c + 1, n):
                v = piv * row[j]
                if lead and prow[j]:
                    v = v - lead * prow[j]
                if prev is not None and v:
                    v = v.exact_div(prev)
                row[j] = v
            row[c] = zero
        prev = piv
        pivots.append((r, c))
        r += 1
    return r, pivots, work, sign


def _as_rows(M) -> tuple[list[list[Polynomial]], VariableContext]:
    if isinstance(M, PolyMatrix):
        return [list(r) for r in M.rows], M.ctx
    rows = [list(r) for r in M]
    for r in rows:
        for x in r:
            if isinstance(x, Polynomial):
                return rows, x.ctx
    raise DomainError("cannot infer a context from a matrix without polynomial entries")


def echelon_profile(M) -> tuple[int, list[tuple[int, int]]]:
    """Rank and pivot positions over the fraction field, via Bareiss elimination."""
    rows, ctx = _as_rows(M)
    if not rows:
        return 0, []
    rank, pivots, _, _ = _bareiss(rows, ctx)
    return rank, pivots


def rank_over_fractions(M) -> int:
    """Rank of ``M`` over the field of rational functions in its variables."""
    return echelon_profile(M)[0]


def matrix_product(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    return A @ B


def matrix_inverse(M: PolyMatrix) -> tuple[PolyMatrix, Polynomial]:
    """Return ``(adj(M), det(M))`` so that ``M @ adj == det * I``."""
    if M.nrows != M.ncols:
        raise DomainError("inverse of a non-square matrix")
    det = M.determinant()
    if not det:
        raise NotInvertibleError(det)
    return M.adjugate(), det


# -- linear algebra over Q --------------------------------------------------

def rref_rational(rows: Sequence[Sequence[object]]):
    """Reduced row echelon form over Q.

    Returns ``(R, pivots, T)`` with ``R = T @ rows`` restricted to the nonzero
    rows, ``pivots`` the pivot columns.
    """
    A = [[_coerce(x) for x in r] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    T = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        T[r], T[p] = T[p], T[r]
        inv = A[r][c]
        A[r] = [qdiv(x, inv) for x in A[r]]
        T[r] = [qdiv(x, inv) for x in T[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [_coerce(x - f * y) for x, y in zip(A[i], A[r])]
                T[i] = [_coerce(x - f * y) for x, y in zip(T[i], T[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots, T[:r]


def nullspace_rational(rows: Sequence[Sequence[object]], n: int | None = None) -> list[list[Coeff]]:
    """Basis of ``{v : rows @ v = 0}`` over Q."""
    if not rows:
        if n is None:
            raise DomainError("need the column count for an empty system")
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    n = len(rows[0])
    R, pivots, _ = rref_rational(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis
