"""Lattices, torus points, rational simplices and affine maps.

All coordinates are Fractions.  Volumes are lattice-normalized: on the
affine span of a simplex, a fundamental cell of the induced integral lattice
has volume 1, so the standard d-simplex has volume 1/d!.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, factorial, floor, lcm
from typing import Iterator, Sequence

from . import linalg
from .errors import DegenerateImage, DegenerateSimplex, DimensionMismatch, SingularLattice

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice spanned by the rows of `basis`."""

    basis: tuple[Vector, ...]

    def __post_init__(self):
        basis = linalg.mat(self.basis)
        object.__setattr__(self, "basis", basis)
        n = len(basis)
        if n == 0 or any(len(row) != n for row in basis):
            raise DimensionMismatch("lattice basis must be a non-empty square matrix")
        if linalg.det(basis) == 0:
            raise SingularLattice(f"basis {basis} has determinant 0")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def determinant(self) -> Fraction:
        return linalg.det(self.basis)

    @cached_property
    def covolume(self) -> Fraction:
        return abs(self.determinant)

    @cached_property
    def inverse(self) -> tuple[Vector, ...]:
        return linalg.inverse(self.basis)

    def coords(self, x: Sequence[Fraction]) -> Vector:
        """Coordinates c with x = sum c_i basis_i."""
        if len(x) != self.dim:
            raise DimensionMismatch(f"point of dimension {len(x)} on a rank {self.dim} lattice")
        return linalg.vecmat(linalg.vec(x), self.inverse)

    def ambient(self, c: Sequence[Fraction]) -> Vector:
        return linalg.vecmat(c, self.basis)

    def vector(self, k: Sequence[int]) -> Vector:
        return self.ambient([Fraction(x) for x in k])


def lattice_new(basis) -> Lattice:
    return Lattice(tuple(tuple(r) for r in basis))


def integer_lattice(n: int) -> Lattice:
    return Lattice(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def scalar_lattice(length) -> Lattice:
    """The lattice length*Z in R."""
    return Lattice(((linalg.rat(length),),))


@dataclass(frozen=True)
class TorusPoint:
    """Canonical representative of a point of R^n / lattice.

    `coords` are the lattice-basis coordinates, each in [0, 1).
    """

    ambient: Vector
    lattice: Lattice = field(compare=False)
    coords: Vector = field(default=(), repr=False)

    @property
    def dim(self) -> int:
        return len(self.ambient)


def reduce_point(x: Sequence, lattice: Lattice) -> TorusPoint:
    c = lattice.coords(linalg.vec(x))
    frac = tuple(ci - floor(ci) for ci in c)
    return TorusPoint(lattice.ambient(frac), lattice, frac)


def point_from_coords(c: Sequence[Fraction], lattice: Lattice) -> TorusPoint:
    frac = tuple(ci - floor(ci) for ci in c)
    return TorusPoint(lattice.ambient(frac), lattice, frac)


@dataclass(frozen=True)
class RationalSimplex:
    """Convex hull of affinely independent rational points."""

    vertices: tuple[Vector, ...]

    def __post_init__(self):
        vs = tuple(linalg.vec(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if not vs:
            raise DegenerateSimplex("a simplex needs at least one vertex")
        n = len(vs[0])
        if any(len(v) != n for v in vs):
            raise DimensionMismatch("simplex vertices of different dimensions")
        if len(vs) - 1 > n:
            raise DegenerateSimplex(f"{len(vs)} vertices cannot be independent in R^{n}")
        if linalg.rank(self.edges) != len(vs) - 1:
            raise DegenerateSimplex(f"vertices {vs} are affinely dependent")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def edges(self) -> tuple[Vector, ...]:
        v0 = self.vertices[0]
        return tuple(tuple(a - b for a, b in zip(v, v0)) for v in self.vertices[1:])

    @cached_property
    def barycenter(self) -> Vector:
        k = len(self.vertices)
        return tuple(sum(col, Fraction(0)) / k for col in zip(*self.vertices))

    def translate(self, t: Sequence[Fraction]) -> "RationalSimplex":
        return RationalSimplex(tuple(tuple(a + b for a, b in zip(v, t)) for v in self.vertices))

    def scale(self, s) -> "RationalSimplex":
        s = linalg.rat(s)
        return RationalSimplex(tuple(tuple(s * a for a in v) for v in self.vertices))

    def barycentric(self, p: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
        """Barycentric coordinates of p, or None if p is off the affine span."""
        p = linalg.vec(p)
        if len(p) != self.ambient_dim:
            raise DimensionMismatch("point and simplex live in different dimensions")
        if self.dim == 0:
            return (Fraction(1),) if p == self.vertices[0] else None
        # least-norm-free approach: solve on a maximal independent set of rows
        v0 = self.vertices[0]
        e = self.edges
        rhs = tuple(a - b for a, b in zip(p, v0))
        rows = self._pivot_rows
        a = [[e[j][i] for j in range(self.dim)] for i in rows]
        t = linalg.solve(a, [rhs[i] for i in rows])
        for i in range(self.ambient_dim):
            if sum((t[j] * e[j][i] for j in range(self.dim)), Fraction(0)) != rhs[i]:
                return None
        return (1 - sum(t, Fraction(0)),) + tuple(t)

    @cached_property
    def _pivot_rows(self) -> tuple[int, ...]:
        chosen: list[int] = []
        cols = [[e[i] for e in self.edges] for i in range(self.ambient_dim)]
        for i in range(self.ambient_dim):
            if linalg.rank([cols[k] for k in chosen + [i]]) == len(chosen) + 1:
                chosen.append(i)
            if len(chosen) == self.dim:
                break
        return tuple(chosen)

    def contains(self, p: Sequence[Fraction]) -> bool:
        b = self.barycentric(p)
        return b is not None and all(x >= 0 for x in b)

    def contains_simplex(self, other: "RationalSimplex") -> bool:
        return all(self.contains(v) for v in other.vertices)

    def bbox(self) -> tuple[Vector, Vector]:
        cols = list(zip(*self.vertices))
        return tuple(min(c) for c in cols), tuple(max(c) for c in cols)


def simplex(*vertices) -> RationalSimplex:
    return RationalSimplex(tuple(tuple(v) if isinstance(v, (list, tuple)) else (v,) for v in vertices))


def normalized_volume(s: RationalSimplex) -> Fraction:
    """Lattice-normalized d-volume of a rational simplex."""
    d = s.dim
    if d == 0:
        return Fraction(1)
    e = s.edges
    den = lcm(1, *(x.denominator for row in e for x in row))
    m = [[int(x * den) for x in row] for row in e]
    return Fraction(linalg.maximal_minor_gcd(m), den**d * factorial(d))


def covolume_ratio(l1: Lattice, l2: Lattice) -> Fraction:
    if l1.dim != l2.dim:
        raise DimensionMismatch(f"lattices of rank {l1.dim} and {l2.dim}")
    return abs(l1.determinant / l2.determinant)


@dataclass(frozen=True)
class AffineMap:
    """x -> linear @ x + translation, with `linear` an m x n matrix."""

    linear: tuple[Vector, ...]
    translation: Vector

    def __post_init__(self):
        lin = linalg.mat(self.linear)
        tr = linalg.vec(self.translation)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tr)
        if len(lin) != len(tr) or len({len(r) for r in lin}) > 1:
            raise DimensionMismatch("affine map shape mismatch")

    @property
    def source_dim(self) -> int:
        return len(self.linear[0]) if self.linear else 0

    @property
    def target_dim(self) -> int:
        return len(self.linear)

    def __call__(self, x: Sequence[Fraction]) -> Vector:
        if len(x) != self.source_dim:
            raise DimensionMismatch(f"map from R^{self.source_dim} applied to a point of R^{len(x)}")
        return tuple(a + b for a, b in zip(linalg.matvec(self.linear, x), self.translation))

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (0,) * n)

    @classmethod
    def scaling(cls, n: int, s) -> "AffineMap":
        s = linalg.rat(s)
        return cls(tuple(tuple(s if i == j else 0 for j in range(n)) for i in range(n)), (0,) * n)

    def is_injective_on(self, s: RationalSimplex) -> bool:
        images = [linalg.matvec(self.linear, e) for e in s.edges]
        return linalg.rank(images) == s.dim if images else True


def apply_affine(a: AffineMap, s: RationalSimplex) -> RationalSimplex:
    try:
        return RationalSimplex(tuple(a(v) for v in s.vertices))
    except DegenerateSimplex as exc:
        raise DegenerateImage(f"image of {s.vertices} is degenerate") from exc


def translation_range(lo: Sequence[Fraction], hi: Sequence[Fraction],
                      tlo: Sequence[Fraction], thi: Sequence[Fraction]) -> Iterator[tuple[int, ...]]:
    """Integer shifts k with [lo + k, hi + k] meeting [tlo, thi] in every coordinate."""
    ranges = [range(ceil(a - d), floor(b - c) + 1) for c, d, a, b in zip(lo, hi, tlo, thi)]

    def rec(i, prefix):
        if i == len(ranges):
            yield tuple(prefix)
            return
        for k in ranges[i]:
            yield from rec(i + 1, prefix + [k])

    yield from rec(0, [])


def lattice_bbox(s: RationalSimplex, lattice: Lattice) -> tuple[Vector, Vector]:
    cs = [lattice.coords(v) for v in s.vertices]
    cols = list(zip(*cs))
    return tuple(min(c) for c in cols), tuple(max(c) for c in cols)


def translates_meeting(cell: RationalSimplex, target: RationalSimplex,
                       lattice: Lattice) -> Iterator[tuple[int, ...]]:
    """Lattice shifts k (in basis coordinates) for which cell + k·basis can meet target."""
    lo, hi = lattice_bbox(cell, lattice)
    tlo, thi = lattice_bbox(target, lattice)
    return translation_range(lo, hi, tlo, thi)
