"""The canonical Weil function lambda = -log||s|| restricted to the skeleton.

lambda is pinned down by 4*lambda(x) - lambda(2x) = g(x), where g is the
tropicalization of the rational function s^4 / [2]^*s.  Pointwise values
come from the doubling orbit (exact at rational points) or from the
truncated series sum 4^-(k+1) g(2^k x); integrals against cell measures
come from the transfer system.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, lcm
from typing import Callable, Iterable, Sequence

from . import linalg
from .doubling import DEFAULT_BUDGET, TransferSystem, decompose, solve_canonical_integrals
from .errors import (DimensionMismatch, NotContained, OrbitBudgetExceeded,
                     RefinementUnsupported, UnstableComplex)
from .geometry import Lattice, RationalSimplex, TorusPoint, reduce_point, scalar_lattice
from .pl import (PLFunction, SimplicialMeasure, Violation, eval_lift, integrate_pl,
                 interval_function, pl_eval, pl_validate)


@dataclass(frozen=True)
class CanonicalDatum:
    lattice: Lattice
    g: PLFunction

    def __post_init__(self):
        if self.g.dim != self.lattice.dim:
            raise DimensionMismatch("datum lattice and g in different dimensions")
        if self.g.lattice is not None and self.g.lattice != self.lattice:
            raise ValueError("g is periodic for a different lattice")
        bad = pl_validate(self.g)
        if bad:
            raise ValueError("g is not a valid PL function: " + "; ".join(v.describe() for v in bad))

    def scaled(self, s) -> "CanonicalDatum":
        """Datum for the divisor multiplied by s."""
        return CanonicalDatum(self.lattice, self.g.scaled(s))


def tate_datum(length, multiplicity=1) -> CanonicalDatum:
    """g for the divisor multiplicity*(O) on the circle R / length*Z."""
    ell = linalg.rat(length)
    if ell <= 0:
        raise ValueError("circle length must be positive")
    lat = scalar_lattice(ell)
    g = interval_function(lat, [
        (0, ell / 2, -1, ell / 4),
        (ell / 2, ell, 1, -3 * ell / 4),
    ])
    return CanonicalDatum(lat, g.scaled(multiplicity))


def tate_oracle(length, x) -> Fraction:
    """(length/2) * B2({x/length}) with B2(t) = t^2 - t + 1/6."""
    ell = linalg.rat(length)
    if ell <= 0:
        raise ValueError("circle length must be positive")
    t = linalg.rat(x) / ell
    t -= floor(t)
    return ell / 2 * (t * t - t + Fraction(1, 6))


def lattice_key(datum: CanonicalDatum, x) -> tuple[tuple[int, ...], int]:
    if isinstance(x, TorusPoint) and x.lattice == datum.lattice and x.coords:
        c = x.coords
    else:
        amb = x.ambient if isinstance(x, TorusPoint) else linalg.vec(x)
        c = reduce_point(amb, datum.lattice).coords
    q = lcm(1, *(ci.denominator for ci in c))
    return tuple(int(ci * q) for ci in c), q


def doubling_orbit_coords(a: tuple[int, ...], q: int, budget: int = DEFAULT_BUDGET):
    """Orbit of a/q under doubling mod 1, as (points, index where the cycle starts)."""
    index: dict[tuple[int, ...], int] = {}
    pts: list[tuple[int, ...]] = []
    cur = a
    while cur not in index:
        if len(pts) >= budget:
            raise OrbitBudgetExceeded(f"doubling orbit of {[Fraction(x, q) for x in a]} exceeds {budget} points")
        index[cur] = len(pts)
        pts.append(cur)
        cur = tuple(2 * x % q for x in cur)
    return pts, index[cur]


def lambda_exact_periodic(datum: CanonicalDatum, x, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Exact lambda(x) at a rational point by solving the recurrence along its orbit."""
    a, q = lattice_key(datum, x)
    pts, start = doubling_orbit_coords(a, q, budget)
    loc = datum.g.locator
    vals = [loc.eval_scaled(p, q) for p in pts]
    cyc = len(pts) - start
    acc = 0
    for v in vals[start:]:
        acc = 4 * acc + v
    lam = Fraction(acc, loc.scale * q * (4**cyc - 1))
    for v in reversed(vals[:start]):
        lam = (Fraction(v, loc.scale * q) + lam) / 4
    return lam


def lambda_series(datum: CanonicalDatum, x, terms: int) -> tuple[Fraction, Fraction]:
    """Truncated series and its certified tail bound.

    value = sum_{k<terms} 4^-(k+1) g(2^k x);  |lambda(x) - value| <= bound.
    """
    if terms < 1:
        raise ValueError("need at least one series term")
    a, q = lattice_key(datum, x)
    loc = datum.g.locator
    acc = 0
    cur = a
    for _ in range(terms):
        acc = 4 * acc + loc.eval_scaled(cur, q)
        cur = tuple(2 * y % q for y in cur)
    value = Fraction(acc, loc.scale * q * 4**terms)
    bound = datum.g.sup_abs / 3 / 4**terms
    return value, bound


def double_point(datum: CanonicalDatum, x) -> TorusPoint:
    amb = x.ambient if isinstance(x, TorusPoint) else linalg.vec(x)
    return reduce_point(tuple(2 * y for y in amb), datum.lattice)


def check_functional_equation(datum: CanonicalDatum, lam: Callable[[TorusPoint], Fraction],
                              samples: Iterable) -> Fraction:
    """Largest |4 lam(x) - lam(2x) - g(x)| over the samples."""
    worst = Fraction(0)
    for x in samples:
        p = x if isinstance(x, TorusPoint) else reduce_point(linalg.vec(x), datum.lattice)
        r = abs(4 * lam(p) - lam(double_point(datum, p)) - pl_eval(datum.g, p))
        worst = max(worst, r)
    return worst


@dataclass(frozen=True)
class CocycleDatum:
    """Per lattice generator t (basis row order): z_t as (gradient, constant) and c_t = -log|c(t)|."""

    z_gradients: tuple[tuple[Fraction, ...], ...]
    z_constants: tuple[Fraction, ...]
    c: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "z_gradients", linalg.mat(self.z_gradients))
        object.__setattr__(self, "z_constants", linalg.vec(self.z_constants))
        object.__setattr__(self, "c", linalg.vec(self.c))
        if not (len(self.z_gradients) == len(self.z_constants) == len(self.c)):
            raise DimensionMismatch("cocycle needs one entry per generator")

    @classmethod
    def trivial(cls, n: int) -> "CocycleDatum":
        return cls(tuple((0,) * n for _ in range(n)), (0,) * n, (0,) * n)

    def z(self, i: int, x: Sequence[Fraction]) -> Fraction:
        return sum((a * b for a, b in zip(self.z_gradients[i], x)), self.z_constants[i])


def cocycle_check(datum: CanonicalDatum, cocycle: CocycleDatum) -> list[Violation]:
    """Check phi(x + t) - phi(x) = z_t(x) + c_t at every cell vertex where both sides are defined."""
    if len(cocycle.c) != datum.lattice.dim:
        raise DimensionMismatch("cocycle generator count differs from lattice rank")
    out = []
    g = datum.g
    seen = set()
    for p in g.pieces:
        for v in p.cell.vertices:
            if v in seen:
                continue
            seen.add(v)
            here = eval_lift(g, v)
            for i, t in enumerate(datum.lattice.basis):
                there = eval_lift(g, tuple(a + b for a, b in zip(v, t)))
                if here is None or there is None:
                    continue
                want = cocycle.z(i, v) + cocycle.c[i]
                if there - here != want:
                    out.append(Violation("cocycle", (i,), v, (there - here, want),
                                         f"generator {i}"))
    return out


@dataclass(frozen=True)
class CorrectionTerm:
    """A model-metric PL term on a source simplex, entering the local integral with a sign."""

    simplex: RationalSimplex
    pl: PLFunction
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


@dataclass(frozen=True)
class LocalBreakdown:
    skeleton: Fraction
    pointwise: Fraction
    corrections: tuple[Fraction, ...]
    cell_weights: tuple[Fraction, ...] = field(default=())
    cell_integrals: tuple[Fraction, ...] = field(default=())

    @property
    def total(self) -> Fraction:
        return self.skeleton + self.pointwise + sum(self.corrections, Fraction(0))


def local_integral_breakdown(datum: CanonicalDatum, sys: TransferSystem,
                             skeleton: SimplicialMeasure,
                             corrections: Sequence[tuple[CorrectionTerm, SimplicialMeasure]] = (),
                             budget: int = DEFAULT_BUDGET) -> LocalBreakdown:
    cx = sys.complex
    n = datum.lattice.dim
    weights = [Fraction(0)] * len(cx.cells)
    pointwise = Fraction(0)
    for c, s in skeleton.terms:
        if s.ambient_dim != n:
            raise DimensionMismatch("skeleton measure and torus in different dimensions")
        if s.dim == 0:
            pointwise += c * lambda_exact_periodic(datum, s.vertices[0], budget)
        elif s.dim == n:
            mult = decompose(s, cx)
            if mult is None:
                raise UnstableComplex(f"{s.vertices} is not a union of cells of the doubling complex")
            for j, m in mult.items():
                weights[j] += c * m
        else:
            raise RefinementUnsupported(
                f"{s.dim}-simplex in a rank {n} torus needs a complex built from its own span")
    if any(weights):
        F = solve_canonical_integrals(sys, datum.g)
    else:
        F = [Fraction(0)] * len(cx.cells)
    sk = sum((w * f for w, f in zip(weights, F)), Fraction(0))
    corr = []
    for term, mu in corrections:
        for _, s in mu.terms:
            if not term.simplex.contains_simplex(s):
                raise NotContained(f"correction measure simplex {s.vertices} leaves {term.simplex.vertices}")
        corr.append(term.sign * integrate_pl(term.pl, mu))
    return LocalBreakdown(sk, pointwise, tuple(corr), tuple(weights), tuple(F))


def local_integral(datum: CanonicalDatum, sys: TransferSystem, skeleton: SimplicialMeasure,
                   corrections: Sequence[tuple[CorrectionTerm, SimplicialMeasure]] = (),
                   budget: int = DEFAULT_BUDGET) -> Fraction:
    """Integral of lambda against the local canonical measure, split as

    skeleton term (transfer solve, or orbit values for point masses)
    + sum of signed integrals of the PL correction terms.
    """
    return local_integral_breakdown(datum, sys, skeleton, corrections, budget).total
