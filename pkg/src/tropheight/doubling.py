"""Doubling-stable subdivisions of a torus and the transfer system (4I - T) F = G.

For a complex whose cells are carried onto unions of cells by x -> 2x, the
pushforward of Lebesgue measure on a cell is a nonnegative combination of
cell measures.  The integrals of the canonical Weil function over the cells
then solve a finite rational linear system.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from . import linalg
from .errors import DimensionMismatch, OrbitBudgetExceeded, UnstableComplex
from .geometry import Lattice, RationalSimplex, normalized_volume, translates_meeting
from .pl import PLFunction, Violation, clip_triangle, dirac, integrate_pl

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class DoublingComplex:
    lattice: Lattice
    cells: tuple[RationalSimplex, ...]
    provenance: str = "user-supplied"

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        if any(c.ambient_dim != self.lattice.dim for c in self.cells):
            raise DimensionMismatch("cells and lattice in different dimensions")

    @property
    def dim(self) -> int:
        return self.lattice.dim


@dataclass(frozen=True)
class TransferSystem:
    complex: DoublingComplex
    matrix: tuple[tuple[Fraction, ...], ...]
    masses: tuple[Fraction, ...]


def doubling_orbit(points, budget: int = DEFAULT_BUDGET) -> list[Fraction]:
    """Forward orbit closure of circle points (in [0,1) coordinates) under t -> 2t mod 1."""
    seen: set[Fraction] = set()
    stack = []
    for p in points:
        p = linalg.rat(p)
        stack.append(p - floor(p))
    while stack:
        p = stack.pop()
        if p in seen:
            continue
        seen.add(p)
        if len(seen) > budget:
            raise OrbitBudgetExceeded(f"orbit closure exceeds {budget} points")
        q = 2 * p
        stack.append(q - floor(q))
    return sorted(seen)


def build_orbit_complex(breakpoints, lattice: Lattice, budget: int = DEFAULT_BUDGET) -> DoublingComplex:
    """Partition R/lattice by the forward doubling orbit of the breakpoints.

    An empty breakpoint list is treated as {0}.
    """
    if lattice.dim != 1:
        raise DimensionMismatch("orbit complexes are built on one-dimensional tori only")
    coords = [lattice.coords((linalg.rat(b),))[0] for b in breakpoints] or [Fraction(0)]
    pts = doubling_orbit(coords, budget)
    ends = pts + [pts[0] + 1]
    cells = tuple(
        RationalSimplex((lattice.ambient((a,)), lattice.ambient((b,))))
        for a, b in zip(ends, ends[1:]))
    return DoublingComplex(lattice, cells, "generated")


def contained_translates(cell: RationalSimplex, region: RationalSimplex, lattice: Lattice):
    """Lattice shifts k with cell + k·basis inside region."""
    out = []
    for k in translates_meeting(cell, region, lattice):
        if region.contains_simplex(cell.translate(lattice.vector(k))):
            out.append(k)
    return out


def decompose(region: RationalSimplex, cx: DoublingComplex) -> dict[int, int] | None:
    """Multiplicity of each cell in region, or None if region is not a union of cell translates."""
    mult: dict[int, int] = {}
    covered = Fraction(0)
    for j, cell in enumerate(cx.cells):
        ks = contained_translates(cell, region, cx.lattice)
        if ks:
            mult[j] = len(ks)
            covered += len(ks) * normalized_volume(cell)
    if covered != normalized_volume(region):
        return None
    return mult


def _overlap(a: RationalSimplex, b: RationalSimplex) -> bool:
    if a.ambient_dim == 1:
        lo = max(min(v[0] for v in a.vertices), min(v[0] for v in b.vertices))
        hi = min(max(v[0] for v in a.vertices), max(v[0] for v in b.vertices))
        return lo < hi
    return bool(clip_triangle(a, b, (Fraction(0),) * 2))


def verify_doubling_stable(cx: DoublingComplex) -> list[Violation]:
    """Structural checks plus doubling stability; an empty list means the complex is usable.

    Interior disjointness is checked for n <= 2; in higher dimension it is
    assumed, and the tiling check relies on volume bookkeeping.
    """
    out: list[Violation] = []
    n = cx.dim
    lat = cx.lattice
    for i, c in enumerate(cx.cells):
        if c.dim != n:
            out.append(Violation("not-full-dimensional", (i,), c.vertices[0], (),
                                 f"cell has dimension {c.dim} in a rank {n} torus"))
    if out:
        return out
    total = sum((normalized_volume(c) for c in cx.cells), Fraction(0))
    if total != lat.covolume:
        out.append(Violation("coverage", tuple(range(len(cx.cells))), (Fraction(0),) * n,
                             (total, lat.covolume), "cell volumes do not add up to the torus"))
    if n <= 2:
        for i, a in enumerate(cx.cells):
            for j, b in enumerate(cx.cells):
                if j < i:
                    continue
                for k in translates_meeting(b, a, lat):
                    if i == j and not any(k):
                        continue
                    if _overlap(a, b.translate(lat.vector(k))):
                        out.append(Violation("overlap", (i, j), a.barycenter, (),
                                             f"shift {k}"))
    for i, c in enumerate(cx.cells):
        doubled = c.scale(2)
        if decompose(doubled, cx) is None:
            out.append(Violation("not-doubling-stable", (i,), doubled.barycenter, (),
                                 f"2*cell {i} is not a union of cell translates"))
    return out


def transfer_matrix(cx: DoublingComplex) -> TransferSystem:
    problems = verify_doubling_stable(cx)
    if problems:
        raise UnstableComplex("; ".join(v.describe() for v in problems))
    n = cx.dim
    sheet = Fraction(1, 2**n)
    size = len(cx.cells)
    rows = []
    for c in cx.cells:
        mult = decompose(c.scale(2), cx)
        rows.append(tuple(sheet * mult.get(j, 0) for j in range(size)))
    masses = tuple(normalized_volume(c) for c in cx.cells)
    return TransferSystem(cx, tuple(rows), masses)


def canonical_rhs(sys: TransferSystem, g: PLFunction) -> list[Fraction]:
    """G_cell = integral of g against Lebesgue measure on each cell."""
    return [integrate_pl(g, dirac(c, sys.complex.lattice)) for c in sys.complex.cells]


def solve_canonical_integrals(sys: TransferSystem, g: PLFunction) -> list[Fraction]:
    """F with 4F - TF = G, i.e. the integrals of the canonical Weil function over the cells."""
    size = len(sys.masses)
    a = [[(4 if i == j else 0) - sys.matrix[i][j] for j in range(size)] for i in range(size)]
    return linalg.solve(a, canonical_rhs(sys, g))
