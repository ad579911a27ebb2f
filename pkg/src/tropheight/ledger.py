"""Global assembly of a Néron-Tate height from local integrals.

<L^{d+1} | Z> = <L^d | Z . div(s)> + sum over places of the local integral,
and the height is that intersection number over (d + 1) deg_L(Z).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .doubling import DEFAULT_BUDGET
from .metric import CanonicalDatum, lattice_key, doubling_orbit_coords, lambda_exact_periodic


@dataclass(frozen=True)
class PlaceRecord:
    place_id: str
    local_integral: Fraction

    def __post_init__(self):
        object.__setattr__(self, "local_integral", linalg.rat(self.local_integral))


@dataclass(frozen=True)
class HeightProblem:
    d: int
    degL: int
    lower_term: Fraction
    places: tuple[PlaceRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lower_term", linalg.rat(self.lower_term))
        object.__setattr__(self, "places", tuple(self.places))
        if self.d < 0:
            raise ValueError("dimension must be nonnegative")
        if self.degL < 1:
            raise ValueError("deg_L(Z) must be at least 1")
        ids = [p.place_id for p in self.places]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate place ids in {ids}")


@dataclass(frozen=True)
class HeightResult:
    intersection: Fraction
    height: Fraction
    ledger: tuple[tuple[str, Fraction], ...]
    d: int
    degL: int


def induction_step(p: HeightProblem) -> HeightResult:
    ledger = [("lower-term", p.lower_term)]
    total = p.lower_term
    for place in sorted(p.places, key=lambda r: r.place_id):
        ledger.append((f"place:{place.place_id}", place.local_integral))
        total += place.local_integral
    height = total / ((p.d + 1) * p.degL)
    return HeightResult(total, height, tuple(ledger), p.d, p.degL)


def assert_rational(r: HeightResult) -> dict:
    """The exact fraction and its ledger, in output-document form."""
    h = linalg.rat(r.height)
    return {
        "height": linalg.fmt(h),
        "numerator": str(h.numerator),
        "denominator": str(h.denominator),
        "intersection": linalg.fmt(r.intersection),
        "normalization": f"(d+1)*degL = {(r.d + 1) * r.degL}",
        "ledger": [{"term": name, "value": linalg.fmt(v)} for name, v in r.ledger],
    }


@dataclass(frozen=True)
class ProbeRow:
    n: int
    value: Fraction
    gap: Fraction


def tate_limit_probe(datum: CanonicalDatum, x, n_max: int,
                     budget: int = DEFAULT_BUDGET) -> list[ProbeRow]:
    """Partial sums sum_{k<n} 4^-(k+1) g(2^k x) for n = 0..n_max and their exact gaps to lambda(x).

    The n-th partial sum is 4^-n times the n-step telescoped naive height.
    """
    target = lambda_exact_periodic(datum, x, budget)
    a, q = lattice_key(datum, x)
    doubling_orbit_coords(a, q, budget)  # budget guard on the orbit itself
    loc = datum.g.locator
    rows = [ProbeRow(0, Fraction(0), target)]
    value = Fraction(0)
    cur = a
    for n in range(1, n_max + 1):
        value += Fraction(loc.eval_scaled(cur, q), loc.scale * q * 4**n)
        cur = tuple(2 * y % q for y in cur)
        rows.append(ProbeRow(n, value, target - value))
    return rows


def preperiod(datum: CanonicalDatum, x, budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """(pre-period, period) of the doubling orbit of x."""
    a, q = lattice_key(datum, x)
    pts, start = doubling_orbit_coords(a, q, budget)
    return start, len(pts) - start

