from fractions import Fraction
from pathlib import Path

import hypothesis.strategies as st
import pytest
from hypothesis import settings

from tropheight.geometry import RationalSimplex

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parent.parent
PROBLEMS = ROOT / "problems"


def rationals(max_den=30, lo=-5, hi=5):
    """Rationals in [lo, hi] with denominator at most max_den."""
    return st.integers(1, max_den).flatmap(
        lambda q: st.integers(lo * q, hi * q).map(lambda p: Fraction(p, q)))


def unit_rationals(max_den=10**4):
    """Rationals in [0, 1) with bounded denominator."""
    return st.integers(1, max_den).flatmap(
        lambda q: st.integers(0, q - 1).map(lambda p: Fraction(p, q)))


def random_unimodular(rng, n, steps=6):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.randint(-3, 3)
        for col in range(n):
            m[i][col] += k * m[j][col]
        if rng.random() < 0.3:
            m[i] = [-x for x in m[i]]
    return m


def random_simplex(rng, n, d, den=6):
    while True:
        verts = [tuple(Fraction(rng.randint(-12, 12), rng.randint(1, den)) for _ in range(n)) for _ in range(d + 1)]
        try:
            return RationalSimplex(verts)
        except ValueError:
            continue


@pytest.fixture
def problems_dir():
    return PROBLEMS


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
