import json
import random
from fractions import Fraction
from math import floor

import hypothesis.strategies as st
import pytest
from hypothesis import given

from tropheight.errors import NotContained, OutsideSupport, RefinementUnsupported
from tropheight.geometry import (AffineMap, RationalSimplex, integer_lattice, normalized_volume,
                                 scalar_lattice, simplex)
from tropheight.metric import tate_datum
from tropheight.pl import (AffinePiece, SimplicialMeasure, constant_function, dirac,
                           integrate_affine, integrate_pl, interval_function, pl_eval, pl_validate,
                           pushforward_affine, total_mass)
from tropheight.problem import LocalProblem

from conftest import rationals

F = Fraction
Z = scalar_lattice(1)


@pytest.fixture
def g():
    return tate_datum(1).g


def test_eval_examples(g):
    assert pl_eval(constant_function(0, Z), (F(3, 7),)) == 0
    assert pl_eval(g, (F(1, 3),)) == F(-1, 12)
    # u = 1/2 from both sides
    assert g.pieces[0]((F(1, 2),)) == g.pieces[1]((F(1, 2),)) == F(-1, 4)
    assert pl_eval(g, (F(1, 2),)) == F(-1, 4)
    # periodic evaluation
    assert pl_eval(g, (F(4, 3),)) == F(-1, 12)
    assert pl_eval(g, (F(1),)) == F(1, 4)


def test_eval_outside_support():
    f = interval_function(None, [(0, 1, 1, 0)])
    with pytest.raises(OutsideSupport):
        pl_eval(f, (F(2),))


def test_validate_examples(g):
    assert pl_validate(g) == []
    bad = interval_function(Z, [(0, F(1, 2), -1, F(1, 4)), (F(1, 2), 1, 1, F(-1, 2))])
    v = pl_validate(bad)
    assert any(x.point == (F(1, 2),) and x.kind == "face-mismatch" for x in v)
    assert pl_validate(constant_function(3, Z)) == []
    assert pl_validate(constant_function(3, integer_lattice(2))) == []


def test_integrate_affine_examples(g):
    piece0, piece1 = g.pieces
    assert integrate_affine(AffinePiece(simplex(0, 1), (0,), 5), simplex(F(1, 4), F(3, 4))) == F(5, 2)
    assert integrate_affine(piece0, simplex(0, F(1, 4))) == F(1, 32)
    assert integrate_affine(piece1, simplex(F(3, 4), 1)) == F(1, 32)
    with pytest.raises(NotContained):
        integrate_affine(piece0, simplex(F(1, 4), F(3, 4)))


def test_integrate_pl_examples(g):
    assert integrate_pl(constant_function(0, Z), dirac(simplex(0, F(1, 3)), Z)) == 0
    assert integrate_pl(g, dirac(simplex(0, 1), Z)) == 0
    assert integrate_pl(g, dirac(simplex(0, F(1, 4)), Z)) == F(1, 32)
    quarters = [integrate_pl(g, dirac(simplex(F(i, 4), F(i + 1, 4)), Z)) for i in range(4)]
    assert quarters == [F(1, 32), F(-1, 32), F(-1, 32), F(1, 32)]


def closed_form_integral(a, b):
    """Integral of the Tate g (length 1) over [a, b] via its antiderivative, period by period."""
    def G(u):
        # one full period integrates to 0, so only the fractional part matters
        t = u - floor(u)
        if t <= F(1, 2):
            return t / 4 - t * t / 2
        return t * t / 2 - 3 * t / 4 + F(1, 4)
    return G(b) - G(a)


@given(rationals(12, -3, 3), rationals(12, -3, 3))
def test_integrate_pl_straddling_matches_antiderivative(a, b):
    if a == b:
        return
    a, b = min(a, b), max(a, b)
    g = tate_datum(1).g
    assert integrate_pl(g, dirac(simplex(a, b), Z)) == closed_form_integral(a, b)


@given(rationals(20, 0, 1), rationals(20, 0, 1), rationals(20, 0, 1), rationals(8), rationals(8))
def test_linearity(a, b, c, s, t):
    g = tate_datum(1).g
    if len({a, b, c}) < 3:
        return
    m1 = dirac(simplex(min(a, b), max(a, b)), Z, s)
    m2 = dirac(simplex(min(b, c), max(b, c)), Z, t)
    assert integrate_pl(g, m1 + m2) == integrate_pl(g, m1) + integrate_pl(g, m2)


def test_pushforward_examples():
    mu = dirac(simplex(0, 1), Z)
    assert pushforward_affine(mu, AffineMap.identity(1)).terms == mu.terms
    out = pushforward_affine(mu, AffineMap.scaling(1, 2))
    assert out.terms == ((F(1, 2), simplex(0, 2)),)
    emb = pushforward_affine(dirac(simplex(0, 1)), AffineMap(((3,), (4,)), (0, 0)))
    assert emb.terms == ((F(1), simplex((0, 0), (3, 4))),)


def test_total_mass_examples():
    assert total_mass(SimplicialMeasure(())) == 0
    assert total_mass(dirac(simplex(0, 1), Z)) == 1
    assert total_mass(dirac(simplex(0, 5), scalar_lattice(5), F(2, 5))) == 2


@pytest.mark.parametrize("seed", range(25))
def test_pushforward_conserves_mass(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 3), rng.randint(1, 3)
    if m < n:
        n, m = m, n
    terms = []
    while len(terms) < 3:
        d = rng.randint(0, n)
        try:
            s = RationalSimplex([tuple(F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n))
                                 for _ in range(d + 1)])
        except ValueError:
            continue
        terms.append((F(rng.randint(-7, 7), rng.randint(1, 5)), s))
    mu = SimplicialMeasure(tuple(terms))
    while True:
        a = AffineMap([[F(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)] for _ in range(m)],
                      [rng.randint(-2, 2) for _ in range(m)])
        if all(a.is_injective_on(s) for _, s in terms):
            break
    assert total_mass(pushforward_affine(mu, a)) == total_mass(mu)


def left_riemann(piece, a, b, steps):
    h = (b - a) / steps
    return sum(piece((a + i * h,)) * h for i in range(steps))


@given(rationals(10), rationals(10), rationals(10, 0, 1), rationals(10, 0, 1), st.integers(1, 200))
def test_affine_integral_vs_riemann(slope, c, a, b, steps):
    if a == b:
        return
    a, b = min(a, b), max(a, b)
    piece = AffinePiece(simplex(0, 1), (slope,), c)
    exact = integrate_affine(piece, simplex(a, b))
    # left sums of a line are off by exactly slope * len^2 / (2 * steps); the bound is its absolute value
    bound = abs(slope) * (b - a) ** 2 / (2 * steps)
    assert abs(exact - left_riemann(piece, a, b, steps)) <= bound


def test_affine_integral_vs_triangle_subdivision():
    # midpoint-of-subtriangles rule is exact for affine functions, so the sum must match exactly
    rng = random.Random(7)
    for _ in range(10):
        tri = simplex((0, 0), (F(rng.randint(1, 5), 3), 0), (0, F(rng.randint(1, 5), 2)))
        piece = AffinePiece(simplex((-10, -10), (30, -10), (-10, 30)),
                            (F(rng.randint(-5, 5), 3), F(rng.randint(-5, 5), 7)), F(rng.randint(-3, 3)))
        k = 4
        p0, p1, p2 = tri.vertices
        total = F(0)
        for i in range(k):
            for j in range(k - i):
                def pt(a, b):
                    return tuple(p0[t] + (p1[t] - p0[t]) * F(a, k) + (p2[t] - p0[t]) * F(b, k) for t in range(2))
                subs = [(pt(i, j), pt(i + 1, j), pt(i, j + 1))]
                if i + j < k - 1:
                    subs.append((pt(i + 1, j), pt(i + 1, j + 1), pt(i, j + 1)))
                for s in subs:
                    sub = RationalSimplex(s)
                    total += normalized_volume(sub) * piece(sub.barycenter)
        assert total == integrate_affine(piece, tri)


def test_pl_2d_product_eval_and_validate(problems_dir):
    local = LocalProblem(json.loads((problems_dir / "torus2d.json").read_text()))
    g2 = local.g
    assert pl_validate(g2) == []
    g1 = tate_datum(1).g
    rng = random.Random(3)
    for _ in range(50):
        x, y = F(rng.randint(-20, 20), rng.randint(1, 12)), F(rng.randint(-20, 20), rng.randint(1, 12))
        assert pl_eval(g2, (x, y)) == pl_eval(g1, (x,)) + pl_eval(g1, (y,))


def test_integrate_2d_straddling_triangle(problems_dir):
    g2 = LocalProblem(json.loads((problems_dir / "torus2d.json").read_text())).g
    # a square split into two triangles; the product structure reduces it to the 1D antiderivative
    lo, hi = F(1, 5), F(4, 3)
    a = RationalSimplex(((lo, lo), (hi, lo), (hi, hi)))
    b = RationalSimplex(((lo, lo), (hi, hi), (lo, hi)))
    mu = SimplicialMeasure(((1, a), (1, b)), integer_lattice(2))
    side = hi - lo
    expected = 2 * side * closed_form_integral(lo, hi)
    assert integrate_pl(g2, mu) == expected


def test_refinement_unsupported_in_3d():
    lat = integer_lattice(3)
    f = constant_function(1, lat)
    s = RationalSimplex(((F(1, 3), F(1, 5), F(1, 7)), (F(5, 3), F(1, 5), F(1, 7)),
                         (F(1, 3), F(6, 5), F(1, 7)), (F(1, 3), F(1, 5), F(8, 7))))
    with pytest.raises(RefinementUnsupported):
        integrate_pl(f, dirac(s, lat))
    small = RationalSimplex(((0, 0, 0), (F(1, 2), 0, 0), (F(1, 2), F(1, 2), 0), (F(1, 2), F(1, 2), F(1, 2))))
    assert integrate_pl(f, dirac(small, lat)) == F(1, 48)
