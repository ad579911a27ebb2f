"""Regenerate the bundled problem files in problems/."""
import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "problems"


def tate_pieces(ell: str, mult: int = 1):
    from fractions import Fraction
    L = Fraction(ell)
    f = lambda x: f"{Fraction(x).numerator}/{Fraction(x).denominator}"
    return [
        {"cell": [["0"], [f(L / 2)]], "gradient": [str(-mult)], "constant": f(mult * L / 4)},
        {"cell": [[f(L / 2)], [f(L)]], "gradient": [str(mult)], "constant": f(-3 * mult * L / 4)},
    ]


def product_2d():
    # g(x, y) = g1(x) + g1(y) on R^2/Z^2, cut along x = 1/2, y = 1/2 and the diagonals x - y = const
    pieces = []
    for i in range(2):
        for j in range(2):
            x0, y0 = i / 2, j / 2
            sx, cx = (-1, "1/4") if i == 0 else (1, "-3/4")
            sy, cy = (-1, "1/4") if j == 0 else (1, "-3/4")
            from fractions import Fraction
            c = Fraction(cx) + Fraction(cy)
            s = lambda v: str(Fraction(v).limit_denominator())
            sq = [(x0, y0), (x0 + .5, y0), (x0 + .5, y0 + .5), (x0, y0 + .5)]
            for tri in ([sq[0], sq[1], sq[2]], [sq[0], sq[2], sq[3]]):
                pieces.append({"cell": [[s(a), s(b)] for a, b in tri], "gradient": [str(sx), str(sy)],
                               "constant": f"{c.numerator}/{c.denominator}"})
    return pieces


def main():
    OUT.mkdir(exist_ok=True)
    files = {
        "tate_curve.json": {
            "version": "tropheight/1",
            "torus": {"basis": [["5"]]},
            "canonical_datum": {"pieces": tate_pieces("5", 2)},
            "strata": {"d": 1, "mapping_degree": 1, "expected_mass": 2, "strata": [
                {"name": "node", "e": 0, "simplex": [["0"], ["5"]], "degree": 2,
                 "lattice_L": [["1"]], "lattice": [["5"]],
                 "map": {"linear": [["1"]], "translation": ["0"]}}]},
            "corrections": [
                {"simplex": [["0"], ["5"]], "sign": 1,
                 "pl": {"pieces": [{"cell": [["0"], ["5"]], "gradient": ["1/3"], "constant": "-1/2"}]},
                 "measure": [{"coefficient": "2/5", "simplex": [["0"], ["5"]]}]},
                {"simplex": [["0"], ["5"]], "sign": -1,
                 "pl": {"pieces": [{"cell": [["0"], ["5"]], "gradient": ["1/3"], "constant": "-1/2"}]},
                 "measure": [{"coefficient": "2/5", "simplex": [["0"], ["5"]]}]},
            ],
            "ledger": {"d": 1, "degL": 2, "lower_term": "0", "places": [{"id": "v", "local": "top"}]},
            "options": {"tate_multiplicity": "2", "grid": 10},
        },
        "tate_points.json": {
            "version": "tropheight/1",
            "ledger": {"d": 0, "degL": 1, "lower_term": "0", "places": [
                {"id": "v1", "local": {"torus": {"basis": [["1"]]},
                                       "canonical_datum": {"pieces": tate_pieces("1")},
                                       "skeleton_measure": [{"coefficient": "1", "simplex": [["0"]]}]}},
                {"id": "v2", "local": {"torus": {"basis": [["1"]]},
                                       "canonical_datum": {"pieces": tate_pieces("1")},
                                       "skeleton_measure": [{"coefficient": "1", "simplex": [["1/3"]]}]}},
            ]},
        },
        "quarters.json": {
            "version": "tropheight/1",
            "torus": {"basis": [["1"]]},
            "canonical_datum": {"pieces": tate_pieces("1")},
            "complex": {"breakpoints": ["0", "1/4", "1/2", "3/4"]},
            "skeleton_measure": [{"coefficient": "1", "simplex": [["0"], ["1/4"]]}],
            "options": {"resolution": 3},
        },
        "nonperiodic.json": {
            "version": "tropheight/1",
            "torus": {"basis": [["1"]]},
            "canonical_datum": {"pieces": [
                {"cell": [["0"], ["1/2"]], "gradient": ["-1"], "constant": "1/4"},
                {"cell": [["1/2"], ["1"]], "gradient": ["1"], "constant": "-1/2"}]},
        },
        "torus2d.json": {
            "version": "tropheight/1",
            "torus": {"basis": [["1", "0"], ["0", "1"]]},
            "canonical_datum": {"pieces": product_2d()},
            "complex": {"cells": [p["cell"] for p in product_2d()]},
            "skeleton_measure": [{"coefficient": "1", "simplex": [["0", "0"], ["1", "0"], ["1", "1"]]},
                                 {"coefficient": "1", "simplex": [["0", "0"], ["1", "1"], ["0", "1"]]}],
        },
    }
    for name, doc in files.items():
        (OUT / name).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        print("wrote", OUT / name)


if __name__ == "__main__":
    main()
