"""Concrete actions and surface models.

Coordinates follow the anticanonical embeddings used throughout: the plane
carries ``l = {x0 = 0}`` and ``p1 = (0:0:1)`` after projection.
"""

from __future__ import annotations

from functools import cache
from typing import Sequence

from .exactalg import VariableContext
from .groupact import (
    CurveConfiguration,
    GroupKind,
    LinearSystem,
    ProjectiveLine,
    ProjectivePoint,
    Representation,
    SurfaceModel,
    induced_representation,
)

PLANE = ("x0", "x1", "x2")


def tau(coordinates: Sequence[str] = PLANE) -> Representation:
    return Representation.from_rows("tau", GroupKind.ADDITIVE, coordinates,
                                     [[1, 0, 0], ["a", 1, 0], ["b", 0, 1]])


def rho(coordinates: Sequence[str] = PLANE) -> Representation:
    return Representation.from_rows("rho", GroupKind.ADDITIVE, coordinates,
                                    [[1, 0, 0], ["a", 1, 0], ["b + a^2/2", "a", 1]])


def _coords(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(n))


def _point(*c) -> ProjectivePoint:
    return ProjectivePoint(tuple(c))


def _line(ctx: VariableContext, *forms: str) -> ProjectiveLine:
    return ProjectiveLine.from_equations([ctx.parse(f) for f in forms])


def _plane_config(*points, note: str = "") -> CurveConfiguration:
    ell = ProjectiveLine.through((0, 1, 0), (0, 0, 1))
    return CurveConfiguration(ell, tuple(_point(*p) for p in points), note)


# -- quartic D5 -----------------------------------------------------------------

D5_PLANE = ("x0", "x2", "x3")

D5_PHI = LinearSystem.parse(D5_PLANE, ["x0^3", "x0*x2^2", "x0^2*x2", "x0^2*x3", "x2^3 - x0*x3^2"])

# As printed; the last row has the wrong signs (see the d5-printed-matrix check).
D5_PRINTED_ROWS = [
    [1, 0, 0, 0, 0],
    ["a^2", 1, "2*a", 0, 0],
    ["a", 0, 1, 0, 0],
    ["b", 0, 0, 1, 0],
    ["b^2 - a^3", "-3*a", "-3*a^2", "2*b", 1],
]


@cache
def d5_representation() -> Representation:
    """The action on P^4 induced by tau through the inverse map."""
    return induced_representation(D5_PHI, tau(D5_PLANE), _coords(5), "D5")


@cache
def d5_printed_representation() -> Representation:
    return Representation.from_rows("D5-printed", GroupKind.ADDITIVE, _coords(5), D5_PRINTED_ROWS)


@cache
def d5_surface() -> SurfaceModel:
    ctx = VariableContext(_coords(5))
    return SurfaceModel(
        name="D5 quartic",
        ctx=ctx,
        generators=(ctx.parse("x0*x1 - x2^2"), ctx.parse("x0*x4 - x1*x2 + x3^2")),
        projection=(0, 2, 3),
        inverse_map=D5_PHI,
        singular_points=((_point(0, 0, 0, 0, 1), "D5"),),
        lines=(_line(ctx, "x0", "x2", "x3"),),
        configuration=_plane_config((0, 0, 1)),
    )


# -- quintic A3 -------------------------------------------------------------------

A3_ROWS = [
    [1, 0, 0, 0, 0, 0],
    ["a", 1, 0, 0, 0, 0],
    ["a^2", "2*a", 1, 0, 0, 0],
    ["a*b", "b", 0, 1, "a", 0],
    ["b", 0, 0, 0, 1, 0],
    ["-a^2*b - b^2", "-2*a*b", "-b", "-2*a", "-a^2 - 2*b", 1],
]


@cache
def a3_representation() -> Representation:
    return Representation.from_rows("A3", GroupKind.ADDITIVE, _coords(6), A3_ROWS)


@cache
def a3_surface() -> SurfaceModel:
    ctx = VariableContext(_coords(6))
    gens = ["x0*x2 - x1^2", "x0*x3 - x1*x4", "x2*x4 - x1*x3",
            "x2*x4 + x4^2 + x0*x5", "x2*x3 + x3*x4 + x1*x5"]
    return SurfaceModel(
        name="A3 quintic",
        ctx=ctx,
        generators=tuple(ctx.parse(g) for g in gens),
        projection=(0, 1, 4),
        singular_points=((_point(0, 0, 0, 0, 0, 1), "A3"),),
        lines=(_line(ctx, "x0", "x1", "x2", "x4"), _line(ctx, "x0", "x1", "x3", "x4")),
    )


# -- cubic E6 -----------------------------------------------------------------------

E6_PLANE = ("x0", "x2", "x3")

E6_PHI = LinearSystem.parse(E6_PLANE, ["x0^3", "-(x0*x3^2 + x2^3)", "x0^2*x2", "x0^2*x3"])


@cache
def e6_surface() -> SurfaceModel:
    ctx = VariableContext(_coords(4))
    return SurfaceModel(
        name="E6 cubic",
        ctx=ctx,
        generators=(ctx.parse("x1*x0^2 + x0*x3^2 + x2^3"),),
        projection=(0, 2, 3),
        inverse_map=E6_PHI,
        singular_points=((_point(0, 1, 0, 0), "E6"),),
        lines=(_line(ctx, "x0", "x2"),),
        configuration=_plane_config((0, 0, 1)),
    )


# -- quartic D4 (configuration only) ------------------------------------------------

D4_CONFIGURATION = _plane_config(
    (0, 0, 1), (0, 1, 0),
    note="equation not available; two distinct points on l normalized to (0:0:1), (0:1:0)",
)


# -- quartic A3+A1 with the semidirect action ----------------------------------------

# Multiplied through by t so every entry is a polynomial.
SEMIDIRECT_ROWS = [
    ["t", 0, "b*t^2", 0, 0],
    [0, "t^3", 0, 0, 0],
    [0, 0, "t^2", 0, 0],
    [0, 0, 0, "t", 0],
    ["-2*b*t", 0, "-b^2*t^2", "-b*t", 1],
]

SEMIDIRECT_PLANE_ROWS = [[1, 0, "b*t"], [0, "t^2", 0], [0, 0, "t"]]

SEMIDIRECT_PHI = LinearSystem.parse(
    ("y0", "y1", "y2"),
    ["y0*y1*y2", "y1^2*y2", "y1*y2^2", "y2^3", "-y0*(y2^2 + y0*y1)"],
)


@cache
def semidirect_representation() -> Representation:
    return Representation.from_rows("A3+A1", GroupKind.SEMIDIRECT, _coords(5), SEMIDIRECT_ROWS)


@cache
def semidirect_plane_representation() -> Representation:
    return Representation.from_rows("A3+A1-plane", GroupKind.SEMIDIRECT, PLANE, SEMIDIRECT_PLANE_ROWS)


@cache
def semidirect_plane_on_y() -> Representation:
    return Representation.from_rows("A3+A1-plane", GroupKind.SEMIDIRECT, ("y0", "y1", "y2"),
                                    SEMIDIRECT_PLANE_ROWS)


@cache
def a3a1_surface() -> SurfaceModel:
    ctx = VariableContext(_coords(5))
    return SurfaceModel(
        name="A3+A1 quartic",
        ctx=ctx,
        generators=(ctx.parse("x0^2 + x0*x3 + x2*x4"), ctx.parse("x1*x3 - x2^2")),
        projection=(0, 1, 2),
        inverse_map=SEMIDIRECT_PHI,
        singular_points=((_point(0, 0, 0, 0, 1), "A3"), (_point(0, 1, 0, 0, 0), "A1")),
        lines=(
            _line(ctx, "x0", "x1", "x2"),
            _line(ctx, "x0 + x3", "x1", "x2"),
            _line(ctx, "x0", "x2", "x3"),
        ),
    )


@cache
def plane() -> SurfaceModel:
    """P^2 itself, with ``{x1 = 0}`` listed as a line (not invariant under tau)."""
    ctx = VariableContext(PLANE)
    return SurfaceModel(name="P2", ctx=ctx, generators=(), lines=(_line(ctx, "x1"),))


def all_surfaces() -> tuple[SurfaceModel, ...]:
    return (d5_surface(), a3_surface(), e6_surface(), a3a1_surface(), plane())
