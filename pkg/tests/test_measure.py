import logging
import random
from fractions import Fraction

import pytest

from tropheight.errors import DegenerateStratum, DimensionMismatch
from tropheight.geometry import AffineMap, RationalSimplex, lattice_new, scalar_lattice, simplex
from tropheight.measure import (StrataBundle, StratumDatum, assemble_measure, gubler_coefficient,
                                mass_check, pushforward_measure)
from tropheight.pl import SimplicialMeasure, total_mass

F = Fraction


def stratum(name="s", e=0, simp=None, degree=1, lat_l=None, lat=None, amap=None, **kw):
    simp = simp or simplex(0, 1)
    k = simp.dim
    eye = [[int(i == j) for j in range(k)] for i in range(k)]
    lat_l = lat_l or (lattice_new(eye) if k else None)
    lat = lat or (lattice_new(eye) if k else None)
    amap = amap or AffineMap.identity(simp.ambient_dim)
    return StratumDatum(name, e, simp, degree, lat_l, lat, amap, **kw)


def tate_bundle(length=5, degree=2, mapping_degree=1):
    s = stratum("node", 0, simplex(0, length), degree, scalar_lattice(1), scalar_lattice(length))
    return StrataBundle(1, mapping_degree, (s,), 2)


def test_coefficient_examples():
    assert gubler_coefficient(1, stratum(e=0, degree=2)) == 2
    assert gubler_coefficient(2, stratum(e=1, degree=3, lat=scalar_lattice(3))) == 2
    assert gubler_coefficient(1, stratum(e=1, degree=1)) == 1


def test_coefficient_guards():
    with pytest.raises(ValueError):
        gubler_coefficient(0, stratum(e=1))
    flat = stratum(simp=simplex((0, 0), (0, 1)), lat_l=scalar_lattice(1), lat=scalar_lattice(1),
                   amap=AffineMap(((1, 0), (0, 0)), (0, 0)))
    assert flat.nondegenerate is False
    with pytest.raises(DegenerateStratum):
        gubler_coefficient(1, flat)
    with pytest.raises(ValueError):
        stratum(amap=AffineMap(((0,),), (0,)), nondegenerate=True)
    with pytest.raises(DimensionMismatch):
        stratum(simp=simplex((0, 0), (1, 0), (0, 1)), lat_l=scalar_lattice(1))


@pytest.mark.parametrize("seed", range(20))
def test_lattice_index_scaling(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    vertices = [tuple(int(i == j) for j in range(k)) for i in range(k)] + [(0,) * k]
    simp = RationalSimplex(vertices)
    base = [[rng.randint(-3, 3) + (4 if i == j else 0) for j in range(k)] for i in range(k)]
    lat = lattice_new(base)
    index = rng.randint(2, 6)
    sub = lattice_new([[index * x for x in base[0]]] + base[1:])
    d, e, deg = k + rng.randint(0, 2), k, rng.randint(1, 5)
    t = gubler_coefficient(d, stratum(e=e, simp=simp, degree=deg, lat_l=lat, lat=lat))
    # a coarser-by-k Lambda_L has k times the covolume, so t_S grows by k
    assert gubler_coefficient(d, stratum(e=e, simp=simp, degree=deg, lat_l=sub, lat=lat)) == index * t
    assert gubler_coefficient(d, stratum(e=e, simp=simp, degree=deg, lat_l=lat, lat=sub)) == t / index


def test_assemble_examples(caplog):
    assert assemble_measure(StrataBundle(1, 1, (), 0)).terms == ()
    mu = assemble_measure(tate_bundle())
    assert mu.terms == ((F(2, 5), simplex(0, 5)),)
    assert total_mass(mu) == 2
    flat = stratum("flat", simp=simplex((0, 0), (0, 1)), lat_l=scalar_lattice(1), lat=scalar_lattice(1),
                   amap=AffineMap(((1, 0), (0, 0)), (0, 0)))
    with caplog.at_level(logging.INFO, logger="tropheight.measure"):
        assert assemble_measure(StrataBundle(1, 1, (flat,), 0)).terms == ()
    assert "flat" in caplog.text


def test_pushforward_examples():
    ident = StrataBundle(1, 1, (stratum(),), 1)
    mu = assemble_measure(ident)
    assert pushforward_measure(ident).terms == mu.terms
    stretched = StrataBundle(1, 3, (stratum(amap=AffineMap.scaling(1, 2)),), 1)
    assert pushforward_measure(stretched).terms == ((F(3, 2), simplex(0, 2)),)
    tate = tate_bundle()
    out = pushforward_measure(tate, torus=scalar_lattice(5))
    assert out.terms == ((F(2, 5), simplex(0, 5)),) and out.lattice == scalar_lattice(5)
    assert total_mass(out) == 2


def test_pushforward_unknown_simplex():
    with pytest.raises(ValueError):
        pushforward_measure(tate_bundle(), SimplicialMeasure(((1, simplex(0, 1)),)))


def test_mass_check_examples():
    good = tate_bundle()
    assert mass_check(good, pushforward_measure(good)).ok
    corrupt = tate_bundle(degree=3)
    rep = mass_check(corrupt, pushforward_measure(corrupt))
    assert not rep.ok and rep.discrepancy == 1
    assert mass_check(StrataBundle(1, 1, (), 0), SimplicialMeasure(())).ok


def random_stratum(rng, name):
    k = rng.randint(0, 2)
    n = max(k, rng.randint(1, 3))
    while True:
        try:
            simp = RationalSimplex([tuple(F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n))
                                    for _ in range(k + 1)])
            break
        except ValueError:
            continue
    lat_l = lattice_new([[rng.randint(1, 3) if i == j else rng.randint(0, 2) * (j > i) for j in range(k)]
                         for i in range(k)]) if k else None
    lat = lattice_new([[rng.randint(1, 3) if i == j else 0 for j in range(k)] for i in range(k)]) if k else None
    while True:
        amap = AffineMap([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)],
                         [F(rng.randint(-4, 4), 3) for _ in range(n)])
        if amap.is_injective_on(simp):
            break
    return stratum(name, rng.randint(k, k + 1), simp, rng.randint(0, 4), lat_l, lat, amap)


@pytest.mark.parametrize("seed", range(30))
def test_pushforward_mass_scales_by_degree(seed):
    rng = random.Random(seed)
    strata = tuple(random_stratum(rng, f"s{i}") for i in range(rng.randint(1, 4)))
    bundle = StrataBundle(3, rng.randint(1, 4), strata, 0)
    src = assemble_measure(bundle)
    assert total_mass(pushforward_measure(bundle)) == bundle.mapping_degree * total_mass(src)
    assert all(isinstance(c, Fraction) for c, _ in pushforward_measure(bundle).terms)


@pytest.mark.parametrize("seed", range(10))
def test_assemble_is_additive(seed):
    rng = random.Random(100 + seed)
    a = tuple(random_stratum(rng, f"a{i}") for i in range(2))
    b = tuple(random_stratum(rng, f"b{i}") for i in range(2))
    whole = assemble_measure(StrataBundle(3, 1, a + b, 0))
    parts = assemble_measure(StrataBundle(3, 1, a, 0)) + assemble_measure(StrataBundle(3, 1, b, 0))
    assert whole.terms == parts.terms
