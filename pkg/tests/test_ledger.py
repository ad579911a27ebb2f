import random
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from tropheight.ledger import (HeightProblem, PlaceRecord, assert_rational, induction_step, preperiod,
                               tate_limit_probe)
from tropheight.metric import CanonicalDatum, lambda_exact_periodic, tate_datum
from tropheight.geometry import scalar_lattice
from tropheight.pl import constant_function

from conftest import rationals

F = Fraction


def height(d, deg, lower, values):
    places = [PlaceRecord(f"v{i}", v) for i, v in enumerate(values)]
    return induction_step(HeightProblem(d, deg, lower, places))


def test_height_examples():
    assert height(1, 1, 0, []).height == 0
    r = height(1, 2, 0, [0])
    assert (r.intersection, r.height) == (0, 0)
    r = height(0, 1, 0, [F(1, 12), F(-1, 36)])
    assert r.height == F(1, 18)


def test_certificate_format():
    cert = assert_rational(height(0, 1, 0, [F(1, 12), F(-1, 36)]))
    assert cert["height"] == "1/18"
    assert [row["term"] for row in cert["ledger"]] == ["lower-term", "place:v0", "place:v1"]
    assert assert_rational(height(1, 2, 0, [0]))["height"] == "0/1"
    neg = assert_rational(height(0, 1, 0, [F(-7, 300)]))
    assert (neg["height"], neg["numerator"], neg["denominator"]) == ("-7/300", "-7", "300")


def test_problem_guards():
    with pytest.raises(ValueError):
        HeightProblem(0, 1, 0, [PlaceRecord("v", 1), PlaceRecord("v", 2)])
    with pytest.raises(ValueError):
        HeightProblem(-1, 1, 0, [])
    with pytest.raises(ValueError):
        HeightProblem(0, 0, 0, [])


def test_ledger_order_is_by_place_id():
    a = induction_step(HeightProblem(0, 1, 0, [PlaceRecord("b", 1), PlaceRecord("a", 2)]))
    assert [name for name, _ in a.ledger] == ["lower-term", "place:a", "place:b"]


@given(st.integers(0, 4), st.integers(1, 6), rationals(50), st.lists(rationals(50), max_size=5),
       st.integers(0, 4), rationals(50))
def test_additivity(d, deg, lower, values, where, split):
    base = height(d, deg, lower, values + [F(0)])
    i = where % (len(values) + 1)
    vals = values + [F(0)]
    parts = vals[:i] + [split, vals[i] - split] + vals[i + 1:]
    assert height(d, deg, lower, parts).height == base.height


@given(st.integers(0, 4), st.integers(1, 6), rationals(50), st.lists(rationals(50), max_size=5),
       st.integers(1, 9))
def test_scaling(d, deg, lower, values, k):
    assert height(d, deg * k, lower * k, [v * k for v in values]).height == height(d, deg, lower, values).height


def test_probe_zero_datum():
    zero = CanonicalDatum(scalar_lattice(1), constant_function(0, scalar_lattice(1)))
    rows = tate_limit_probe(zero, (F(3, 7),), 10)
    assert [r.n for r in rows] == list(range(11))
    assert all(r.value == 0 and r.gap == 0 for r in rows)


def test_probe_one_third():
    rows = tate_limit_probe(tate_datum(1), (F(1, 3),), 20)
    assert rows[0].gap == F(-1, 36)
    assert all(b.gap * 4 == a.gap for a, b in zip(rows, rows[1:]))


def test_probe_zero_point():
    rows = tate_limit_probe(tate_datum(1), (F(0),), 20)
    values = [r.value for r in rows]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert all(r.gap == F(1, 12) / 4 ** r.n for r in rows)


def test_preperiod():
    tate = tate_datum(1)
    assert preperiod(tate, (F(0),)) == (0, 1)
    assert preperiod(tate, (F(1, 3),)) == (0, 2)
    assert preperiod(tate, (F(1, 12),)) == (2, 2)
    assert preperiod(tate, (F(1, 5),)) == (0, 4)


@pytest.mark.parametrize("seed", range(20))
def test_probe_contracts_per_cycle(seed):
    # gap_n = 4^-n lambda(2^n x), so gaps contract by 4^period over one full cycle
    rng = random.Random(seed)
    length = rng.choice([F(1), F(2), F(5), F(7, 3)])
    datum = tate_datum(length)
    x = (F(rng.randint(0, 999), rng.randint(1, 120)) * length,)
    pre, period = preperiod(datum, x)
    rows = tate_limit_probe(datum, x, pre + 3 * period + 2)
    for a in rows[pre:]:
        if a.n + period < len(rows):
            assert rows[a.n + period].gap * 4 ** period == a.gap
    for r in rows:
        y = tuple(2 ** r.n * c for c in x)
        assert r.gap == lambda_exact_periodic(datum, y) / 4 ** r.n
