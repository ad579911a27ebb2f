"""Solve (4I - T)F = G on random orbit complexes and check F against exact Bernoulli integrals."""
import argparse
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from tropheight.doubling import build_orbit_complex, solve_canonical_integrals, transfer_matrix
from tropheight.metric import tate_datum


@dataclass
class SweepConfig:
    complexes: int = 50
    max_cells: int = 64
    seed: int = 0


def bernoulli_integral(length, a, b):
    def prim(x):
        t = x / length
        return length * length / 2 * (t ** 3 / 3 - t ** 2 / 2 + t / 6)
    return prim(b) - prim(a)


def cell_oracle(length, cell):
    a, b = sorted(v[0] for v in cell.vertices)
    shift = (a // length) * length
    a, b = a - shift, b - shift
    if b <= length:
        return bernoulli_integral(length, a, b)
    return bernoulli_integral(length, a, length) + bernoulli_integral(length, 0, b - length)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--complexes", type=int, default=SweepConfig.complexes)
    ap.add_argument("--max-cells", type=int, default=SweepConfig.max_cells)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    cfg = SweepConfig(**vars(ap.parse_args()))
    rng = random.Random(cfg.seed)
    done = 0
    print(f"{'length':>6} {'cells':>5} {'oracle':>6} {'ms':>8}")
    while done < cfg.complexes:
        length = rng.choice([Fraction(1), Fraction(2), Fraction(5), Fraction(7, 3)])
        den = rng.choice([3, 5, 7, 9, 11, 13, 15, 21, 31, 33, 63]) * 2 ** rng.randint(0, 3)
        datum = tate_datum(length)
        bps = [Fraction(rng.randint(0, den - 1), den) * length for _ in range(rng.randint(1, 6))]
        cx = build_orbit_complex(bps + [0, length / 2], datum.lattice)
        if len(cx.cells) > cfg.max_cells:
            continue
        t0 = time.perf_counter()
        fv = solve_canonical_integrals(transfer_matrix(cx), datum.g)
        ms = 1000 * (time.perf_counter() - t0)
        ok = all(f == cell_oracle(length, c) for c, f in zip(cx.cells, fv))
        print(f"{str(length):>6} {len(cx.cells):>5} {str(ok):>6} {ms:>8.1f}")
        done += 1


if __name__ == "__main__":
    main()
