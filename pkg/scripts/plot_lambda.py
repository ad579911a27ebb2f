"""Write (x, lambda(x)) samples for a problem file as CSV, for plotting elsewhere.

    python scripts/plot_lambda.py problems/tate_curve.json --resolution 60 > lambda.csv
"""
import argparse
import csv
import sys
from pathlib import Path

from tropheight.cli import emit_plot_data
from tropheight.problem import LocalProblem, load_problem


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("problem", type=Path)
    ap.add_argument("--resolution", type=int, default=48)
    args = ap.parse_args()
    datum = LocalProblem(load_problem(args.problem.read_text())).datum
    table = emit_plot_data(datum, args.resolution)
    out = csv.writer(sys.stdout)
    out.writerow(["x", "x_decimal", "lambda", "lambda_decimal"])
    for row in table["rows"]:
        out.writerow([row["x"], row["x_decimal"], row["lambda"], row["lambda_decimal"]])


if __name__ == "__main__":
    main()
