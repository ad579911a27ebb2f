"""JSON problem files: schema, parsing into library objects, and encoding of results.

Every number is an exact rational written as an integer or a "p/q" string.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import jsonschema

from . import linalg
from .doubling import DoublingComplex, build_orbit_complex
from .errors import DimensionMismatch, ProblemParseError
from .geometry import AffineMap, Lattice, RationalSimplex
from .measure import StrataBundle, StratumDatum, pushforward_measure
from .metric import CanonicalDatum, CocycleDatum, CorrectionTerm
from .pl import AffinePiece, PLFunction, SimplicialMeasure

VERSION = "tropheight/1"

_RAT = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}
_VEC = {"type": "array", "items": _RAT}
_MAT = {"type": "array", "items": _VEC, "minItems": 1}
_SIMPLEX = {"type": "array", "items": _VEC, "minItems": 1}
_PIECE = {
    "type": "object", "additionalProperties": False,
    "required": ["cell", "gradient", "constant"],
    "properties": {"cell": _SIMPLEX, "gradient": _VEC, "constant": _RAT},
}
_PL = {
    "type": "object", "additionalProperties": False, "required": ["pieces"],
    "properties": {"pieces": {"type": "array", "items": _PIECE, "minItems": 1},
                   "periodic": {"type": "boolean"}},
}
_MEASURE = {
    "type": "array",
    "items": {"type": "object", "additionalProperties": False, "required": ["coefficient", "simplex"],
              "properties": {"coefficient": _RAT, "simplex": _SIMPLEX}},
}
_MAP = {
    "type": "object", "additionalProperties": False, "required": ["linear", "translation"],
    "properties": {"linear": _MAT, "translation": _VEC},
}
_STRATUM = {
    "type": "object", "additionalProperties": False,
    "required": ["name", "e", "simplex", "degree", "map"],
    "properties": {
        "name": {"type": "string"}, "e": {"type": "integer", "minimum": 0},
        "simplex": _SIMPLEX, "degree": {"type": "integer"},
        "lattice_L": {"oneOf": [_MAT, {"type": "null"}]},
        "lattice": {"oneOf": [_MAT, {"type": "null"}]},
        "map": _MAP, "nondegenerate": {"type": "boolean"},
    },
}
_STRATA = {
    "type": "object", "additionalProperties": False,
    "required": ["d", "mapping_degree", "expected_mass", "strata"],
    "properties": {"d": {"type": "integer", "minimum": 0},
                   "mapping_degree": {"type": "integer", "minimum": 1},
                   "expected_mass": {"type": "integer", "minimum": 0},
                   "strata": {"type": "array", "items": _STRATUM}},
}
_CORRECTION = {
    "type": "object", "additionalProperties": False,
    "required": ["simplex", "sign", "pl", "measure"],
    "properties": {"simplex": _SIMPLEX, "sign": {"enum": [1, -1]}, "pl": _PL, "measure": _MEASURE},
}
_COMPLEX = {
    "type": "object", "additionalProperties": False,
    "properties": {"breakpoints": _VEC, "cells": {"type": "array", "items": _SIMPLEX, "minItems": 1}},
}
_COCYCLE = {
    "type": "object", "additionalProperties": False, "required": ["z_gradients", "z_constants", "c"],
    "properties": {"z_gradients": _MAT, "z_constants": _VEC, "c": _VEC},
}
_LOCAL_PROPS = {
    "torus": {"type": "object", "additionalProperties": False, "required": ["basis"],
              "properties": {"basis": _MAT}},
    "canonical_datum": _PL,
    "complex": _COMPLEX,
    "strata": _STRATA,
    "corrections": {"type": "array", "items": _CORRECTION},
    "skeleton_measure": _MEASURE,
    "cocycle": _COCYCLE,
}
_LOCAL = {"type": "object", "additionalProperties": False, "properties": _LOCAL_PROPS}
_PLACE = {
    "type": "object", "additionalProperties": False, "required": ["id"],
    "properties": {"id": {"type": "string"}, "local_integral": _RAT,
                   "local": {"oneOf": [{"const": "top"}, _LOCAL]}},
    "oneOf": [{"required": ["local_integral"]}, {"required": ["local"]}],
}
_LEDGER = {
    "type": "object", "additionalProperties": False, "required": ["d", "degL", "lower_term", "places"],
    "properties": {"d": {"type": "integer", "minimum": 0}, "degL": {"type": "integer", "minimum": 1},
                   "lower_term": _RAT, "places": {"type": "array", "items": _PLACE}},
}
_OPTIONS = {
    "type": "object", "additionalProperties": False,
    "properties": {
        "budget": {"type": "integer", "minimum": 1},
        "series_depth": {"type": "integer", "minimum": 1},
        "resolution": {"type": "integer", "minimum": 1},
        "grid": {"type": "integer", "minimum": 1},
        "samples": {"type": "array", "items": _VEC},
        "tate_multiplicity": _RAT,
    },
}
SCHEMA = {
    "type": "object", "additionalProperties": False, "required": ["version"],
    "properties": {"version": {"const": VERSION}, **_LOCAL_PROPS, "ledger": _LEDGER, "options": _OPTIONS},
}


def _simplex(rows) -> RationalSimplex:
    return RationalSimplex(tuple(linalg.vec(r) for r in rows))


def parse_pl(doc, lattice: Lattice | None) -> PLFunction:
    periodic = doc.get("periodic", lattice is not None)
    pieces = tuple(AffinePiece(_simplex(p["cell"]), linalg.vec(p["gradient"]), linalg.rat(p["constant"]))
                   for p in doc["pieces"])
    return PLFunction(pieces, lattice if periodic else None)


def _measure(doc, lattice: Lattice | None = None) -> SimplicialMeasure:
    return SimplicialMeasure(tuple((linalg.rat(t["coefficient"]), _simplex(t["simplex"])) for t in doc), lattice)


def _lattice(rows) -> Lattice | None:
    return None if rows is None else Lattice(linalg.mat(rows))


@dataclass
class LocalProblem:
    """The local (one place) part of a problem file, parsed lazily."""

    doc: dict

    @property
    def torus(self) -> Lattice:
        if "torus" not in self.doc:
            raise ProblemParseError("this command needs a 'torus' block")
        return Lattice(linalg.mat(self.doc["torus"]["basis"]))

    @property
    def g(self) -> PLFunction:
        if "canonical_datum" not in self.doc:
            raise ProblemParseError("this command needs a 'canonical_datum' block")
        return parse_pl(self.doc["canonical_datum"], self.torus)

    @property
    def datum(self) -> CanonicalDatum:
        return CanonicalDatum(self.torus, self.g)

    @property
    def bundle(self) -> StrataBundle | None:
        s = self.doc.get("strata")
        if s is None:
            return None
        strata = tuple(
            StratumDatum(t["name"], t["e"], _simplex(t["simplex"]), t["degree"],
                         _lattice(t.get("lattice_L")), _lattice(t.get("lattice")),
                         AffineMap(linalg.mat(t["map"]["linear"]), linalg.vec(t["map"]["translation"])),
                         t.get("nondegenerate"))
            for t in s["strata"])
        return StrataBundle(s["d"], s["mapping_degree"], strata, s["expected_mass"])

    @property
    def skeleton_measure(self) -> SimplicialMeasure:
        if "skeleton_measure" in self.doc:
            return _measure(self.doc["skeleton_measure"], self.torus)
        bundle = self.bundle
        if bundle is None:
            raise ProblemParseError("need 'skeleton_measure' or 'strata' to know what to integrate against")
        return pushforward_measure(bundle, torus=self.torus)

    @property
    def corrections(self) -> list[tuple[CorrectionTerm, SimplicialMeasure]]:
        out = []
        for c in self.doc.get("corrections", []):
            term = CorrectionTerm(_simplex(c["simplex"]), parse_pl(c["pl"], None), c["sign"])
            out.append((term, _measure(c["measure"])))
        return out

    @property
    def cocycle(self) -> CocycleDatum | None:
        c = self.doc.get("cocycle")
        if c is None:
            return None
        return CocycleDatum(linalg.mat(c["z_gradients"]), linalg.vec(c["z_constants"]), linalg.vec(c["c"]))

    def complex(self, budget: int, extra_measure: SimplicialMeasure | None = None) -> DoublingComplex:
        lat = self.torus
        block = self.doc.get("complex", {})
        if "cells" in block:
            return DoublingComplex(lat, tuple(_simplex(c) for c in block["cells"]), "user-supplied")
        if lat.dim != 1:
            raise DimensionMismatch("complexes on tori of rank >= 2 must be supplied as 'cells'")
        pts = [linalg.rat(b) for b in block.get("breakpoints", [])]
        if "canonical_datum" in self.doc:
            pts += [v[0] for p in self.g.pieces for v in p.cell.vertices]
        if extra_measure is not None:
            pts += [v[0] for _, s in extra_measure.terms if s.dim > 0 for v in s.vertices]
        return build_orbit_complex(pts, lat, budget)


def load_problem(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemParseError(f"invalid JSON: {exc}") from exc
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ProblemParseError(f"{where}: {exc.message}") from exc
    return doc


def enc(x: Any) -> Any:
    """Recursively encode Fractions as "p/q" strings."""
    if isinstance(x, Fraction):
        return linalg.fmt(x)
    if isinstance(x, RationalSimplex):
        return [enc(v) for v in x.vertices]
    if isinstance(x, SimplicialMeasure):
        return [{"coefficient": enc(c), "simplex": enc(s)} for c, s in x.terms]
    if isinstance(x, dict):
        return {k: enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [enc(v) for v in x]
    return x


def dumps(doc: dict) -> str:
    return json.dumps(enc(doc), indent=2, ensure_ascii=False) + "\n"


def decode_rationals(x: Any) -> Any:
    """Inverse of enc for rational strings; leaves other strings alone."""
    if isinstance(x, str):
        try:
            return linalg.rat(x) if "/" in x else x
        except (ValueError, ZeroDivisionError):
            return x
    if isinstance(x, dict):
        return {k: decode_rationals(v) for k, v in x.items()}
    if isinstance(x, list):
        return [decode_rationals(v) for v in x]
    return x
