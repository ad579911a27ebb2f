"""Exact linear algebra over the rationals.

Everything goes through fraction-free (Bareiss) elimination on integer
matrices obtained by clearing denominators row by row, so intermediate
entries stay integral and no gcd work happens inside the inner loop.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from numbers import Rational
from typing import Sequence

from .errors import SingularSystem

Matrix = Sequence[Sequence[Fraction]]


def rat(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to Fraction.  Floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(ch in s for ch in ".eE"):
            raise ValueError(f"not an exact rational literal: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def vec(xs) -> tuple[Fraction, ...]:
    return tuple(rat(x) for x in xs)


def mat(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(vec(r) for r in rows)


def _integer_rows(rows: Matrix) -> list[list[int]]:
    out = []
    for row in rows:
        m = lcm(1, *(x.denominator for x in row))
        out.append([int(x * m) for x in row])
    return out


def _bareiss(a: list[list[int]], ncols: int, full_pivot: bool = True):
    """In-place fraction-free forward elimination on the first `ncols` columns.

    Returns (rank, column permutation, sign of the permutations applied).
    Columns past `ncols` (an augmented right-hand side) are carried along.
    """
    nrows = len(a)
    perm = list(range(len(a[0]) if a else 0))
    sign = 1
    prev = 1
    r = 0
    for k in range(min(nrows, ncols)):
        piv = None
        if full_pivot:
            best = 0
            for i in range(k, nrows):
                for j in range(k, ncols):
                    v = abs(a[i][j])
                    # smallest nonzero magnitude keeps numbers short
                    if v and (best == 0 or v < best):
                        best, piv = v, (i, j)
        else:
            for i in range(k, nrows):
                if a[i][k]:
                    piv = (i, k)
                    break
        if piv is None:
            break
        i, j = piv
        if i != k:
            a[k], a[i] = a[i], a[k]
            sign = -sign
        if j != k:
            for row in a:
                row[k], row[j] = row[j], row[k]
            perm[k], perm[j] = perm[j], perm[k]
            sign = -sign
        p = a[k][k]
        rowk = a[k]
        for i in range(k + 1, nrows):
            rowi = a[i]
            f = rowi[k]
            for jj in range(k + 1, len(rowi)):
                rowi[jj] = (p * rowi[jj] - f * rowk[jj]) // prev
            rowi[k] = 0
        prev = p
        r += 1
    return r, perm, sign


def det(m: Matrix) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    scale = 1
    rows = []
    for row in m:
        d = lcm(1, *(rat(x).denominator for x in row))
        scale *= d
        rows.append([int(rat(x) * d) for x in row])
    r, _, sign = _bareiss(rows, n)
    if r < n:
        return Fraction(0)
    return Fraction(sign * rows[n - 1][n - 1], scale)


def rank(m: Matrix) -> int:
    if not m:
        return 0
    rows = _integer_rows([vec(r) for r in m])
    r, _, _ = _bareiss(rows, len(rows[0]))
    return r


def solve(a: Matrix, b: Sequence[Fraction]) -> list[Fraction]:
    """Solve the square system a x = b exactly with full pivoting."""
    n = len(a)
    if len(b) != n or any(len(row) != n for row in a):
        raise ValueError("solve expects a square system")
    aug = _integer_rows([tuple(rat(x) for x in row) + (rat(bi),) for row, bi in zip(a, b)])
    r, perm, _ = _bareiss(aug, n)
    if r < n:
        raise SingularSystem(f"matrix of size {n} has rank {r}")
    y = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(aug[i][n])
        for j in range(i + 1, n):
            s -= aug[i][j] * y[j]
        y[i] = s / aug[i][i]
    x = [Fraction(0)] * n
    for k, col in enumerate(perm[:n]):
        x[col] = y[k]
    return x


def inverse(a: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    n = len(a)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        cols.append(solve(a, e))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def matvec(m: Matrix, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m)


def vecmat(v: Sequence[Fraction], m: Matrix) -> tuple[Fraction, ...]:
    if not m:
        return ()
    return tuple(sum((v[i] * m[i][j] for i in range(len(v))), Fraction(0)) for j in range(len(m[0])))


def matmul(a: Matrix, b: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(vecmat(row, b) for row in a)


def transpose(m: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(zip(*m)) if m else ()


def maximal_minor_gcd(m: Sequence[Sequence[int]]) -> int:
    """gcd of the r x r minors of an integer r x n matrix of full row rank.

    Equals the index of the row lattice inside its saturation in Z^n.
    """
    r = len(m)
    if r == 0:
        return 1
    n = len(m[0])
    g = 0
    for cols in combinations(range(n), r):
        minor = det([[Fraction(row[c]) for c in cols] for row in m])
        g = gcd(g, int(minor))
        if g == 1:
            break
    return g


def fmt(x) -> str:
    """Canonical "p/q" spelling; the sign sits on the numerator and q >= 1 always appears."""
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"
