"""Batch front-end: `tropheight <command> --input problem.json [--output out.json]`.

Exit codes: 0 success, 2 validation failure, 3 unsupported refinement,
4 orbit budget exceeded, 5 parse error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from . import linalg
from .doubling import DEFAULT_BUDGET, canonical_rhs, solve_canonical_integrals, transfer_matrix, \
    verify_doubling_stable
from .errors import ProblemParseError, TropError
from .geometry import point_from_coords, reduce_point
from .ledger import HeightProblem, PlaceRecord, assert_rational, induction_step
from .measure import assemble_measure, gubler_coefficient, mass_check, pushforward_measure
from .metric import (CanonicalDatum, cocycle_check, lambda_exact_periodic, lambda_series,
                     local_integral_breakdown, tate_oracle)
from .pl import pl_validate, total_mass
from .problem import LocalProblem, dumps, load_problem, parse_pl

COMMANDS = ("solve-transfer", "integrate-canonical", "assemble-measure", "local-integral",
            "height", "tate-check", "validate", "plot-data")


@dataclass
class RunConfig:
    budget: int = DEFAULT_BUDGET
    series_depth: int = 64
    resolution: int = 12
    grid: int = 24


class ValidationFailed(TropError):
    code = "validation-failed"

    def __init__(self, message: str, doc: dict):
        super().__init__(message)
        self.doc = doc


def decimal_str(x: Fraction, digits: int = 20) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def emit_plot_data(datum: CanonicalDatum, resolution: int, budget: int = DEFAULT_BUDGET) -> dict:
    """(x, lambda(x)) at `resolution` evenly spaced points of a circle, exact and decimal."""
    if datum.lattice.dim != 1:
        raise ValueError("plot data is only produced for one-dimensional tori")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    rows = []
    for k in range(resolution):
        p = point_from_coords((Fraction(k, resolution),), datum.lattice)
        lam = lambda_exact_periodic(datum, p, budget)
        rows.append({"x": linalg.fmt(p.ambient[0]), "x_decimal": decimal_str(p.ambient[0]),
                     "lambda": linalg.fmt(lam), "lambda_decimal": decimal_str(lam)})
    return {"columns": ["x", "lambda"], "rows": rows}


def _transfer(local: LocalProblem, cfg: RunConfig, measure=None):
    cx = local.complex(cfg.budget, measure)
    return transfer_matrix(cx)


def _local_doc(local: LocalProblem, cfg: RunConfig) -> dict:
    datum = local.datum
    mu = local.skeleton_measure
    sys_ = _transfer(local, cfg, mu)
    br = local_integral_breakdown(datum, sys_, mu, local.corrections, cfg.budget)
    return {
        "local_integral": br.total,
        "skeleton_term": br.skeleton,
        "point_mass_term": br.pointwise,
        "correction_terms": list(br.corrections),
        "cells": list(sys_.complex.cells),
        "cell_weights": list(br.cell_weights),
        "F": list(br.cell_integrals),
    }


def cmd_solve_transfer(doc, cfg):
    local = LocalProblem(doc)
    sys_ = _transfer(local, cfg)
    g = local.g
    return {"cells": list(sys_.complex.cells), "provenance": sys_.complex.provenance,
            "T": [list(r) for r in sys_.matrix], "masses": list(sys_.masses),
            "G": canonical_rhs(sys_, g), "F": solve_canonical_integrals(sys_, g)}


def cmd_integrate_canonical(doc, cfg):
    out = _local_doc(LocalProblem({k: v for k, v in doc.items() if k != "corrections"}), cfg)
    return {"integral": out["skeleton_term"] + out["point_mass_term"], "cells": out["cells"],
            "cell_weights": out["cell_weights"], "F": out["F"]}


def cmd_assemble_measure(doc, cfg):
    local = LocalProblem(doc)
    bundle = local.bundle
    if bundle is None:
        raise ProblemParseError("assemble-measure needs a 'strata' block")
    src = assemble_measure(bundle)
    torus = local.torus if "torus" in doc else None
    pushed = pushforward_measure(bundle, src, torus)
    report = mass_check(bundle, pushed)
    coeffs = []
    for s in bundle.strata:
        coeffs.append({"name": s.name, "nondegenerate": s.nondegenerate,
                       "t": gubler_coefficient(bundle.d, s) if s.nondegenerate else None})
    return {"coefficients": coeffs, "source_measure": src, "source_mass": total_mass(src),
            "torus_measure": pushed, "mass": report.mass, "expected_mass": report.expected,
            "mass_ok": report.ok}


def cmd_local_integral(doc, cfg):
    return _local_doc(LocalProblem(doc), cfg)


def cmd_height(doc, cfg):
    if "ledger" not in doc:
        raise ProblemParseError("height needs a 'ledger' block")
    led = doc["ledger"]
    places = []
    details = {}
    for p in led["places"]:
        if "local_integral" in p:
            places.append(PlaceRecord(p["id"], linalg.rat(p["local_integral"])))
            continue
        block = doc if p["local"] == "top" else {"version": doc["version"], **p["local"]}
        out = _local_doc(LocalProblem(block), cfg)
        details[p["id"]] = out
        places.append(PlaceRecord(p["id"], out["local_integral"]))
    result = induction_step(HeightProblem(led["d"], led["degL"], linalg.rat(led["lower_term"]), tuple(places)))
    cert = assert_rational(result)
    cert["places"] = {pid: {"local_integral": d["local_integral"], "skeleton_term": d["skeleton_term"],
                            "point_mass_term": d["point_mass_term"],
                            "correction_terms": d["correction_terms"]}
                      for pid, d in sorted(details.items())}
    return cert


def cmd_tate_check(doc, cfg):
    local = LocalProblem(doc)
    datum = local.datum
    if datum.lattice.dim != 1:
        raise ProblemParseError("tate-check needs a one-dimensional torus")
    ell = abs(datum.lattice.basis[0][0])
    mult = linalg.rat(doc.get("options", {}).get("tate_multiplicity", 1))
    pts = [point_from_coords((Fraction(k, cfg.grid),), datum.lattice) for k in range(cfg.grid)]
    pts += [reduce_point(linalg.vec(s), datum.lattice) for s in doc.get("options", {}).get("samples", [])]
    rows = []
    agree = True
    for p in pts:
        lam = lambda_exact_periodic(datum, p, cfg.budget)
        ref = mult * tate_oracle(ell, p.ambient[0])
        value, bound = lambda_series(datum, p, cfg.series_depth)
        ok = lam == ref
        agree &= ok
        rows.append({"x": p.ambient[0], "lambda": lam, "oracle": ref, "agree": ok,
                     "series": value, "series_bound": bound, "series_ok": abs(value - lam) <= bound})
    doc_out = {"length": ell, "multiplicity": mult, "agreement": agree, "rows": rows}
    if not agree:
        raise ValidationFailed("lambda disagrees with the Tate oracle", doc_out)
    return doc_out


def cmd_validate(doc, cfg):
    local = LocalProblem(doc)
    report: dict = {}
    bad = False
    if "canonical_datum" in doc:
        g = local.g
        v = pl_validate(g)
        report["pl_validate"] = [x.describe() for x in v]
        bad |= bool(v)
        cocycle = local.cocycle
        if cocycle is not None and not v:
            c = cocycle_check(local.datum, cocycle)
            report["cocycle_check"] = [x.describe() for x in c]
            bad |= bool(c)
    if "torus" in doc and ("complex" in doc or "canonical_datum" in doc):
        try:
            cx = local.complex(cfg.budget)
        except TropError as exc:
            report["verify_doubling_stable"] = [str(exc)]
            bad = True
        else:
            v = verify_doubling_stable(cx)
            report["verify_doubling_stable"] = [x.describe() for x in v]
            bad |= bool(v)
    for i, c in enumerate(doc.get("corrections", [])):
        v = pl_validate(parse_pl(c["pl"], None))
        report[f"correction_{i}"] = [x.describe() for x in v]
        bad |= bool(v)
    if "strata" in doc:
        bundle = local.bundle
        torus = local.torus if "torus" in doc else None
        r = mass_check(bundle, pushforward_measure(bundle, torus=torus))
        report["mass_check"] = {"ok": r.ok, "mass": r.mass, "expected": r.expected,
                                "discrepancy": r.discrepancy}
        bad |= not r.ok
    report["valid"] = not bad
    if bad:
        raise ValidationFailed("validation found violations", report)
    return report


def cmd_plot_data(doc, cfg):
    return emit_plot_data(LocalProblem(doc).datum, cfg.resolution, cfg.budget)


HANDLERS = {
    "solve-transfer": cmd_solve_transfer,
    "integrate-canonical": cmd_integrate_canonical,
    "assemble-measure": cmd_assemble_measure,
    "local-integral": cmd_local_integral,
    "height": cmd_height,
    "tate-check": cmd_tate_check,
    "validate": cmd_validate,
    "plot-data": cmd_plot_data,
}


def run(command: str, text: str, budget: int | None = None,
        series_depth: int | None = None) -> tuple[int, str]:
    """Run one command on the text of a problem file; returns (exit status, output document).

    Explicit budget / series_depth arguments override the file's options block.
    """
    try:
        doc = load_problem(text)
        opts = {k: v for k, v in doc.get("options", {}).items()
                if k in ("budget", "series_depth", "resolution", "grid")}
        if budget is not None:
            opts["budget"] = budget
        if series_depth is not None:
            opts["series_depth"] = series_depth
        cfg = RunConfig(**opts)
        body = HANDLERS[command](doc, cfg)
    except ValidationFailed as exc:
        return exc.exit_status, dumps({"command": command, "status": "error", "code": exc.code,
                                       "message": str(exc), "report": exc.doc})
    except TropError as exc:
        return exc.exit_status, dumps({"command": command, "status": "error", "code": exc.code,
                                       "message": str(exc)})
    except ValueError as exc:
        return 2, dumps({"command": command, "status": "error", "code": "invalid-data",
                         "message": str(exc)})
    return 0, dumps({"command": command, "status": "ok", **body})


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="tropheight", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, type=Path)
    ap.add_argument("--output", type=Path)
    ap.add_argument("--budget", type=int, help=f"orbit budget in states (default {DEFAULT_BUDGET})")
    ap.add_argument("--series-depth", type=int, help="series terms for tate-check (default 64)")
    args = ap.parse_args(argv)
    try:
        text = args.input.read_text(encoding="utf-8")
    except OSError as exc:
        status, out = 5, dumps({"command": args.command, "status": "error", "code": "parse-error",
                                "message": str(exc)})
    else:
        status, out = run(args.command, text, args.budget, args.series_depth)
    if args.output:
        args.output.write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
