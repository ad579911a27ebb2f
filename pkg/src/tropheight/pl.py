"""Piecewise-linear functions on tropical tori and simplicial measures.

A PLFunction is a list of affine pieces, each on a cell given by a
representative simplex in R^n.  With a lattice attached the function lives
on R^n / lattice and points are matched against every lattice translate of
every cell; without one it is an ordinary function on the union of cells.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from math import lcm
from typing import Iterable, Sequence

from . import linalg
from .errors import (DimensionMismatch, NotContained, OutsideSupport,
                     RefinementUnsupported)
from .geometry import (AffineMap, Lattice, RationalSimplex, TorusPoint, apply_affine,
                       integer_lattice, lattice_bbox, normalized_volume, reduce_point,
                       translates_meeting, translation_range)

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class AffinePiece:
    cell: RationalSimplex
    gradient: Vector
    constant: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gradient", linalg.vec(self.gradient))
        object.__setattr__(self, "constant", linalg.rat(self.constant))
        if len(self.gradient) != self.cell.ambient_dim:
            raise DimensionMismatch("gradient and cell dimensions differ")

    def __call__(self, x: Sequence[Fraction]) -> Fraction:
        return sum((g * xi for g, xi in zip(self.gradient, x)), self.constant)

    def scaled(self, s) -> "AffinePiece":
        s = linalg.rat(s)
        return AffinePiece(self.cell, tuple(s * g for g in self.gradient), s * self.constant)


@dataclass(frozen=True)
class _Entry:
    piece: int
    shift: tuple[int, ...]
    # integer barycentric rows: point a/q is inside iff R·a + S·q >= 0 for all rows;
    # for lower-dimensional cells `rows` is None and the exact slow test is used
    rows: tuple[tuple[tuple[int, ...], int], ...] | None
    weights: tuple[int, ...]
    offset: int


class _Locator:
    """Cell lookup for points given in lattice coordinates over a common denominator."""

    def __init__(self, f: "PLFunction"):
        self.f = f
        lat = f.lattice or integer_lattice(f.dim)
        self.lattice = lat
        n = f.dim
        raw = []
        for i, p in enumerate(f.pieces):
            w = linalg.matvec(lat.basis, p.gradient)  # gradient in lattice coordinates
            if f.lattice is None:
                shifts = [(0,) * n]
            else:
                lo, hi = lattice_bbox(p.cell, lat)
                shifts = list(translation_range(lo, hi, (0,) * n, (1,) * n))
            us = [lat.coords(v) for v in p.cell.vertices]
            for k in shifts:
                const = p.constant - sum((wi * ki for wi, ki in zip(w, k)), Fraction(0))
                rows = None
                if p.cell.dim == n:
                    m = [[u[r] + k[r] for u in us] for r in range(n)] + [[Fraction(1)] * (n + 1)]
                    inv = linalg.inverse(m)
                    rows = []
                    for row in inv:
                        den = lcm(1, *(x.denominator for x in row))
                        ints = tuple(int(x * den) for x in row)
                        rows.append((ints[:n], ints[n]))
                    rows = tuple(rows)
                raw.append((i, k, rows, w, const))
        self.scale = lcm(1, *(x.denominator for _, _, _, w, c in raw for x in (*w, c)))
        self.entries = [
            _Entry(i, k, rows, tuple(int(x * self.scale) for x in w), int(c * self.scale))
            for i, k, rows, w, c in raw
        ]

    def find(self, a: Sequence[int], q: int) -> _Entry | None:
        if len(a) == 1:
            a0 = a[0]
            for e in self.entries:
                if e.rows is None:
                    if self._slow_contains(e, a, q):
                        return e
                    continue
                for (r,), s in e.rows:
                    if r * a0 + s * q < 0:
                        break
                else:
                    return e
            return None
        for e in self.entries:
            if e.rows is None:
                if self._slow_contains(e, a, q):
                    return e
                continue
            for rv, s in e.rows:
                acc = s * q
                for r, x in zip(rv, a):
                    acc += r * x
                if acc < 0:
                    break
            else:
                return e
        return None

    def _slow_contains(self, e: _Entry, a: Sequence[int], q: int) -> bool:
        c = tuple(Fraction(x, q) for x in a)
        x = self.lattice.ambient(tuple(ci - ki for ci, ki in zip(c, e.shift)))
        return self.f.pieces[e.piece].cell.contains(x)

    def eval_scaled(self, a: Sequence[int], q: int) -> int:
        """Numerator N with f(a/q) = N / (scale * q); `a` in lattice coordinates."""
        e = self.find(a, q)
        if e is None:
            raise OutsideSupport(f"lattice coordinates {[Fraction(x, q) for x in a]} not covered")
        acc = e.offset * q
        for w, x in zip(e.weights, a):
            acc += w * x
        return acc


@dataclass(frozen=True)
class PLFunction:
    pieces: tuple[AffinePiece, ...]
    lattice: Lattice | None = None

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise ValueError("a PL function needs at least one piece")
        n = self.pieces[0].cell.ambient_dim
        if any(p.cell.ambient_dim != n for p in self.pieces):
            raise DimensionMismatch("pieces in different ambient dimensions")
        if self.lattice is not None and self.lattice.dim != n:
            raise DimensionMismatch("lattice and cells in different dimensions")

    @property
    def dim(self) -> int:
        return self.pieces[0].cell.ambient_dim

    @cached_property
    def locator(self) -> _Locator:
        return _Locator(self)

    @cached_property
    def sup_abs(self) -> Fraction:
        # affine functions attain their extrema at vertices
        return max(abs(p(v)) for p in self.pieces for v in p.cell.vertices)

    def scaled(self, s) -> "PLFunction":
        return PLFunction(tuple(p.scaled(s) for p in self.pieces), self.lattice)

    def __add__(self, other: "PLFunction") -> "PLFunction":
        """Sum of two PL functions on the same cells."""
        if [p.cell for p in self.pieces] != [p.cell for p in other.pieces]:
            raise ValueError("can only add PL functions on identical cells")
        return PLFunction(tuple(
            AffinePiece(a.cell, tuple(x + y for x, y in zip(a.gradient, b.gradient)), a.constant + b.constant)
            for a, b in zip(self.pieces, other.pieces)), self.lattice)


def constant_function(c, lattice: Lattice) -> PLFunction:
    """The constant c on R^n / lattice, one piece per simplex of a fundamental domain."""
    n = lattice.dim
    c = linalg.rat(c)
    cells = _fundamental_simplices(lattice)
    return PLFunction(tuple(AffinePiece(s, (0,) * n, c) for s in cells), lattice)


def _fundamental_simplices(lattice: Lattice) -> list[RationalSimplex]:
    """Staircase triangulation of the fundamental parallelotope into n! simplices."""
    n = lattice.dim
    out = []
    for perm in permutations(range(n)):
        pts = [[Fraction(0)] * n]
        for i in perm:
            nxt = list(pts[-1])
            nxt[i] += 1
            pts.append(nxt)
        out.append(RationalSimplex(tuple(lattice.ambient(p) for p in pts)))
    return out


def _point_key(f: PLFunction, x) -> tuple[tuple[int, ...], int]:
    if isinstance(x, TorusPoint):
        if f.lattice is None:
            c = x.ambient
        else:
            c = x.coords if x.lattice == f.lattice and x.coords else reduce_point(x.ambient, f.lattice).coords
    else:
        x = linalg.vec(x)
        c = x if f.lattice is None else reduce_point(x, f.lattice).coords
    if len(c) != f.dim:
        raise DimensionMismatch(f"point of dimension {len(c)} for a function on R^{f.dim}")
    q = lcm(1, *(ci.denominator for ci in c))
    return tuple(int(ci * q) for ci in c), q


def pl_eval(f: PLFunction, x) -> Fraction:
    """Value of f at x (a TorusPoint or a coordinate vector).

    On shared faces the lowest-index containing cell is used.
    """
    a, q = _point_key(f, x)
    return Fraction(f.locator.eval_scaled(a, q), f.locator.scale * q)


def eval_lift(f: PLFunction, x: Sequence[Fraction]) -> Fraction | None:
    """Value at an ambient point using untranslated cells first, then the torus.

    Returns None when x is not covered.
    """
    x = linalg.vec(x)
    for p in f.pieces:
        if p.cell.contains(x):
            return p(x)
    if f.lattice is None:
        return None
    try:
        return pl_eval(f, x)
    except OutsideSupport:
        return None


@dataclass(frozen=True)
class Violation:
    kind: str
    cells: tuple[int, ...]
    point: Vector
    values: tuple[Fraction, ...] = ()
    detail: str = ""

    def describe(self) -> str:
        pt = "(" + ", ".join(str(x) for x in self.point) + ")"
        vals = ", ".join(str(v) for v in self.values)
        msg = f"{self.kind} between cells {self.cells} at {pt}"
        if vals:
            msg += f": values {vals}"
        if self.detail:
            msg += f" [{self.detail}]"
        return msg


def _cell_hits(f: PLFunction, j: int, x: Vector) -> list[tuple[int, ...]]:
    """Lattice shifts k with x in cell_j + k·basis."""
    cell = f.pieces[j].cell
    if f.lattice is None:
        return [(0,) * f.dim] if cell.contains(x) else []
    c = f.lattice.coords(x)
    lo, hi = lattice_bbox(cell, f.lattice)
    hits = []
    for k in translation_range(lo, hi, c, c):
        if cell.contains(tuple(a - b for a, b in zip(x, f.lattice.vector(k)))):
            hits.append(k)
    return hits


def pl_validate(f: PLFunction) -> list[Violation]:
    """Face agreement and lattice periodicity, checked exactly at cell vertices.

    Exact for conforming complexes and for any complex in dimension <= 2.
    """
    out: list[Violation] = []
    seen = set()
    for i, p in enumerate(f.pieces):
        for v in p.cell.vertices:
            here = p(v)
            for j, q in enumerate(f.pieces):
                for k in _cell_hits(f, j, v):
                    if j == i and not any(k):
                        continue
                    shift = f.lattice.vector(k) if f.lattice is not None else (Fraction(0),) * f.dim
                    there = q(tuple(a - b for a, b in zip(v, shift)))
                    if there == here:
                        continue
                    where = reduce_point(v, f.lattice).coords if f.lattice is not None else v
                    key = (min(i, j), max(i, j), where)
                    if key in seen:
                        continue
                    seen.add(key)
                    kind = "face-mismatch" if not any(k) else "periodicity"
                    out.append(Violation(kind, (i, j), v, (here, there),
                                         f"shift {k}" if any(k) else ""))
    return out


@dataclass(frozen=True)
class SimplicialMeasure:
    """Signed combination sum c_i * (lattice-normalized Lebesgue measure on simplex_i)."""

    terms: tuple[tuple[Fraction, RationalSimplex], ...]
    lattice: Lattice | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((linalg.rat(c), s) for c, s in self.terms))

    def __add__(self, other: "SimplicialMeasure") -> "SimplicialMeasure":
        return SimplicialMeasure(self.terms + other.terms, self.lattice or other.lattice)

    def scaled(self, s) -> "SimplicialMeasure":
        s = linalg.rat(s)
        return SimplicialMeasure(tuple((s * c, d) for c, d in self.terms), self.lattice)


def dirac(s: RationalSimplex, lattice: Lattice | None = None, coefficient=1) -> SimplicialMeasure:
    return SimplicialMeasure(((linalg.rat(coefficient), s),), lattice)


def total_mass(mu: SimplicialMeasure) -> Fraction:
    return sum((c * normalized_volume(s) for c, s in mu.terms), Fraction(0))


def integrate_affine(piece: AffinePiece, s: RationalSimplex) -> Fraction:
    if not piece.cell.contains_simplex(s):
        raise NotContained(f"{s.vertices} is not inside the cell {piece.cell.vertices}")
    return normalized_volume(s) * piece(s.barycenter)


def _shift(f: PLFunction, k) -> Vector:
    if f.lattice is None:
        return (Fraction(0),) * f.dim
    return f.lattice.vector(k)


def _candidate_translates(f: PLFunction, s: RationalSimplex):
    for j, p in enumerate(f.pieces):
        if f.lattice is None:
            yield j, (0,) * f.dim
        else:
            for k in translates_meeting(p.cell, s, f.lattice):
                yield j, k


def _integrate_simplex(f: PLFunction, s: RationalSimplex) -> Fraction:
    # whole simplex inside one cell translate
    for j, k in _candidate_translates(f, s):
        sh = _shift(f, k)
        moved = s.translate(tuple(-x for x in sh))
        if f.pieces[j].cell.contains_simplex(moved):
            return integrate_affine(f.pieces[j], moved)
    if s.dim == 0:
        raise OutsideSupport(f"point {s.vertices[0]} not covered")
    if f.dim > 2:
        raise RefinementUnsupported(
            f"simplex {s.vertices} straddles cells in dimension {f.dim}; supply a pre-refined measure")
    if s.dim == 1:
        return _integrate_segment(f, s)
    return _integrate_polygon(f, s)


def _halfplanes(cell: RationalSimplex, shift: Vector):
    """Barycentric coordinates of a full-dimensional cell translate as affine forms (a, b)."""
    n = cell.ambient_dim
    m = [[v[r] + shift[r] for v in cell.vertices] for r in range(n)] + [[Fraction(1)] * (n + 1)]
    inv = linalg.inverse(m)
    return [(row[:n], row[n]) for row in inv]


def _integrate_segment(f: PLFunction, s: RationalSimplex) -> Fraction:
    p0, p1 = s.vertices
    d = tuple(b - a for a, b in zip(p0, p1))
    cuts = {Fraction(0), Fraction(1)}
    tiles = []
    for j, k in _candidate_translates(f, s):
        cell = f.pieces[j].cell
        if cell.dim != f.dim:
            continue
        sh = _shift(f, k)
        lo, hi = Fraction(0), Fraction(1)
        for a, b in _halfplanes(cell, sh):
            # a·(p0 + t d) + b >= 0
            c0 = sum((x * y for x, y in zip(a, p0)), b)
            c1 = sum((x * y for x, y in zip(a, d)), Fraction(0))
            if c1 == 0:
                if c0 < 0:
                    lo, hi = Fraction(1), Fraction(0)
            elif c1 > 0:
                lo = max(lo, -c0 / c1)
            else:
                hi = min(hi, -c0 / c1)
        if lo < hi:
            cuts.update((lo, hi))
            tiles.append((j, sh))
    ts = sorted(t for t in cuts if 0 <= t <= 1)
    total = Fraction(0)
    for t0, t1 in zip(ts, ts[1:]):
        mid = tuple(a + (t0 + t1) / 2 * b for a, b in zip(p0, d))
        for j, sh in tiles:
            if f.pieces[j].cell.contains(tuple(a - b for a, b in zip(mid, sh))):
                sub = RationalSimplex(tuple(
                    tuple(a + t * b - c for a, b, c in zip(p0, d, sh)) for t in (t0, t1)))
                total += integrate_affine(f.pieces[j], sub)
                break
        else:
            raise OutsideSupport(f"part of segment {s.vertices} near {mid} is not covered")
    return total


def _clip(poly: list[Vector], a: Vector, b: Fraction) -> list[Vector]:
    """Sutherland-Hodgman step: keep the part of a convex polygon with a·x + b >= 0."""
    out: list[Vector] = []
    m = len(poly)
    for idx in range(m):
        cur, nxt = poly[idx], poly[(idx + 1) % m]
        vc = a[0] * cur[0] + a[1] * cur[1] + b
        vn = a[0] * nxt[0] + a[1] * nxt[1] + b
        if vc >= 0:
            out.append(cur)
        if (vc > 0 and vn < 0) or (vc < 0 and vn > 0):
            t = vc / (vc - vn)
            out.append((cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])))
    dedup: list[Vector] = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def _area2(a: Vector, b: Vector, c: Vector) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def clip_triangle(tri: RationalSimplex, cell: RationalSimplex, shift: Vector) -> list[RationalSimplex]:
    """Fan triangulation of tri ∩ (cell + shift), both 2-simplices in the plane."""
    poly = list(tri.vertices)
    for a, b in _halfplanes(cell, shift):
        poly = _clip(poly, a, b)
        if len(poly) < 3:
            return []
    out = []
    for i in range(1, len(poly) - 1):
        if _area2(poly[0], poly[i], poly[i + 1]) != 0:
            out.append(RationalSimplex((poly[0], poly[i], poly[i + 1])))
    return out


def _integrate_polygon(f: PLFunction, s: RationalSimplex) -> Fraction:
    total = Fraction(0)
    covered = Fraction(0)
    for j, k in _candidate_translates(f, s):
        cell = f.pieces[j].cell
        if cell.dim != 2:
            continue
        sh = _shift(f, k)
        for t in clip_triangle(s, cell, sh):
            back = t.translate(tuple(-x for x in sh))
            total += integrate_affine(f.pieces[j], back)
            covered += normalized_volume(t)
    if covered != normalized_volume(s):
        raise OutsideSupport(f"cells cover {covered} of the {normalized_volume(s)} of {s.vertices}")
    return total


def integrate_pl(f: PLFunction, mu: SimplicialMeasure) -> Fraction:
    """Exact integral of f against a signed simplicial measure."""
    total = Fraction(0)
    for c, s in mu.terms:
        if c == 0:
            continue
        if s.ambient_dim != f.dim:
            raise DimensionMismatch("measure and function in different dimensions")
        total += c * _integrate_simplex(f, s)
    return total


def pushforward_affine(mu: SimplicialMeasure, a: AffineMap,
                       lattice: Lattice | None = None) -> SimplicialMeasure:
    """Push mu forward along a; each image carries the same mass as its source."""
    terms = []
    for c, s in mu.terms:
        img = apply_affine(a, s)
        terms.append((c * normalized_volume(s) / normalized_volume(img), img))
    if lattice is None and mu.lattice is not None and mu.lattice.dim == a.target_dim:
        lattice = mu.lattice
    return SimplicialMeasure(tuple(terms), lattice)


def breakpoints_1d(f: PLFunction) -> list[Fraction]:
    """Cell endpoints of a function on a circle, reduced into the fundamental interval."""
    if f.dim != 1:
        raise DimensionMismatch("breakpoints_1d needs a one-dimensional function")
    pts = set()
    for p in f.pieces:
        for v in p.cell.vertices:
            pts.add(reduce_point(v, f.lattice).ambient[0] if f.lattice else v[0])
    return sorted(pts)


def interval_function(lattice: Lattice | None, pieces: Iterable[tuple]) -> PLFunction:
    """Build a function on the line from (start, end, slope, intercept) tuples."""
    out = []
    for a, b, slope, c in pieces:
        out.append(AffinePiece(RationalSimplex(((linalg.rat(a),), (linalg.rat(b),))), (slope,), c))
    return PLFunction(tuple(out), lattice)
