"""Canonical measures from semistable strata data.

Each non-degenerate stratum S contributes t_S times Lebesgue measure on its
skeleton simplex, t_S = d!/(d-e)! * deg_H(S) * covol(Lambda_S^L)/covol(Lambda_S);
the result is then pushed to the torus along the strata's affine maps.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import linalg
from .errors import DegenerateStratum, DimensionMismatch
from .geometry import AffineMap, Lattice, RationalSimplex, covolume_ratio
from .pl import SimplicialMeasure, pushforward_affine, total_mass

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StratumDatum:
    name: str
    e: int
    simplex: RationalSimplex
    degree: int
    lattice_L: Lattice | None
    lattice: Lattice | None
    map: AffineMap
    nondegenerate: bool | None = None

    def __post_init__(self):
        if self.e < 0:
            raise ValueError(f"stratum {self.name}: negative dimension")
        k = self.simplex.dim
        for lat in (self.lattice_L, self.lattice):
            if lat is None:
                if k != 0:
                    raise DimensionMismatch(f"stratum {self.name}: lattices required for a {k}-simplex")
            elif lat.dim != k:
                raise DimensionMismatch(
                    f"stratum {self.name}: lattice of rank {lat.dim} on a {k}-simplex")
        if self.map.source_dim != self.simplex.ambient_dim:
            raise DimensionMismatch(f"stratum {self.name}: map source is R^{self.map.source_dim}")
        injective = self.map.is_injective_on(self.simplex)
        if self.nondegenerate is None:
            object.__setattr__(self, "nondegenerate", injective)
        elif self.nondegenerate != injective:
            raise ValueError(f"stratum {self.name}: flagged nondegenerate={self.nondegenerate} "
                             f"but the map is {'injective' if injective else 'not injective'}")

    @property
    def lattice_ratio(self) -> Fraction:
        if self.simplex.dim == 0:
            return Fraction(1)
        return covolume_ratio(self.lattice_L, self.lattice)


@dataclass(frozen=True)
class StrataBundle:
    d: int
    mapping_degree: int
    strata: tuple[StratumDatum, ...]
    expected_mass: int

    def __post_init__(self):
        object.__setattr__(self, "strata", tuple(self.strata))
        if self.mapping_degree < 1:
            raise ValueError("mapping degree must be positive")
        for s in self.strata:
            if s.e > self.d:
                raise ValueError(f"stratum {s.name} has e={s.e} > d={self.d}")


def gubler_coefficient(d: int, s: StratumDatum) -> Fraction:
    if not 0 <= s.e <= d:
        raise ValueError(f"need 0 <= e <= d, got e={s.e}, d={d}")
    if not s.nondegenerate:
        raise DegenerateStratum(f"stratum {s.name} is degenerate and carries no mass")
    return Fraction(factorial(d), factorial(d - s.e)) * s.degree * s.lattice_ratio


def assemble_measure(bundle: StrataBundle) -> SimplicialMeasure:
    """Sum of t_S * Lebesgue(Delta_S) over non-degenerate strata, on the source skeleton."""
    terms = []
    for s in bundle.strata:
        if not s.nondegenerate:
            log.info("stratum %s is degenerate; skipped", s.name)
            continue
        terms.append((gubler_coefficient(bundle.d, s), s.simplex))
    return SimplicialMeasure(tuple(terms))


def pushforward_measure(bundle: StrataBundle, mu: SimplicialMeasure | None = None,
                        torus: Lattice | None = None) -> SimplicialMeasure:
    """deg(f) times the termwise pushforward along each stratum's map.

    Terms are matched to strata by their simplex.
    """
    if mu is None:
        mu = assemble_measure(bundle)
    by_simplex = {}
    for s in bundle.strata:
        if s.nondegenerate:
            by_simplex.setdefault(s.simplex, s)
    out = SimplicialMeasure((), torus)
    for c, simp in mu.terms:
        s = by_simplex.get(simp)
        if s is None:
            raise ValueError(f"no non-degenerate stratum has simplex {simp.vertices}")
        part = pushforward_affine(SimplicialMeasure(((c, simp),)), s.map)
        out = out + part.scaled(bundle.mapping_degree)
    return SimplicialMeasure(out.terms, torus)


@dataclass(frozen=True)
class MassReport:
    ok: bool
    mass: Fraction
    expected: Fraction

    @property
    def discrepancy(self) -> Fraction:
        return self.mass - self.expected


def mass_check(bundle: StrataBundle, mu: SimplicialMeasure) -> MassReport:
    m = total_mass(mu)
    expected = linalg.rat(bundle.expected_mass)
    return MassReport(m == expected, m, expected)
