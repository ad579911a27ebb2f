"""Compare the orbit evaluator with the Bernoulli closed form on random circle points.

    python scripts/tate_sweep.py --points 500 --max-den 10000
"""
import argparse
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from tropheight.ledger import preperiod
from tropheight.metric import lambda_exact_periodic, lambda_series, tate_datum, tate_oracle


@dataclass
class SweepConfig:
    lengths: list[Fraction] = field(default_factory=lambda: [Fraction(1), Fraction(2), Fraction(5), Fraction(7, 3)])
    points: int = 200
    max_den: int = 10**4
    series_terms: int = 20
    seed: int = 0


def sweep(cfg: SweepConfig):
    rng = random.Random(cfg.seed)
    for length in cfg.lengths:
        datum = tate_datum(length)
        worst_period = mismatches = 0
        series_ok = True
        t0 = time.perf_counter()
        for _ in range(cfg.points):
            q = rng.randint(1, cfg.max_den)
            x = (Fraction(rng.randint(0, q - 1), q) * length,)
            lam = lambda_exact_periodic(datum, x)
            mismatches += lam != tate_oracle(length, x[0])
            value, bound = lambda_series(datum, x, cfg.series_terms)
            series_ok &= abs(value - lam) <= bound
            worst_period = max(worst_period, preperiod(datum, x)[1])
        dt = time.perf_counter() - t0
        yield length, mismatches, series_ok, worst_period, dt


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=SweepConfig.points)
    ap.add_argument("--max-den", type=int, default=SweepConfig.max_den)
    ap.add_argument("--series-terms", type=int, default=SweepConfig.series_terms)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    args = ap.parse_args()
    cfg = SweepConfig(points=args.points, max_den=args.max_den, series_terms=args.series_terms, seed=args.seed)
    print(f"{'length':>8} {'mismatch':>9} {'series':>7} {'max period':>11} {'seconds':>8}")
    for length, bad, ok, period, dt in sweep(cfg):
        print(f"{str(length):>8} {bad:>9} {str(ok):>7} {period:>11} {dt:>8.2f}")


if __name__ == "__main__":
    main()
