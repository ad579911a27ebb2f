"""Exact canonical local heights and canonical measures on tropical tori."""
from .doubling import (DoublingComplex, TransferSystem, build_orbit_complex, canonical_rhs,
                       solve_canonical_integrals, transfer_matrix, verify_doubling_stable)
from .geometry import (AffineMap, Lattice, RationalSimplex, TorusPoint, apply_affine,
                       covolume_ratio, lattice_new, normalized_volume, reduce_point, simplex)
from .ledger import (HeightProblem, HeightResult, PlaceRecord, assert_rational, induction_step,
                     tate_limit_probe)
from .measure import (StrataBundle, StratumDatum, assemble_measure, gubler_coefficient,
                      mass_check, pushforward_measure)
from .metric import (CanonicalDatum, CocycleDatum, CorrectionTerm, check_functional_equation,
                     cocycle_check, lambda_exact_periodic, lambda_series, local_integral,
                     tate_datum, tate_oracle)
from .pl import (AffinePiece, PLFunction, SimplicialMeasure, integrate_affine, integrate_pl,
                 pl_eval, pl_validate, pushforward_affine, total_mass)

__all__ = [
    "DoublingComplex",
    "TransferSystem",
    "build_orbit_complex",
    "canonical_rhs",
    "solve_canonical_integrals",
    "transfer_matrix",
    "verify_doubling_stable",
    "AffineMap",
    "Lattice",
    "RationalSimplex",
    "TorusPoint",
    "apply_affine",
    "covolume_ratio",
    "lattice_new",
    "normalized_volume",
    "reduce_point",
    "simplex",
    "HeightProblem",
    "HeightResult",
    "PlaceRecord",
    "assert_rational",
    "induction_step",
    "tate_limit_probe",
    "StrataBundle",
    "StratumDatum",
    "assemble_measure",
    "gubler_coefficient",
    "mass_check",
    "pushforward_measure",
    "CanonicalDatum",
    "CocycleDatum",
    "CorrectionTerm",
    "check_functional_equation",
    "cocycle_check",
    "lambda_exact_periodic",
    "lambda_series",
    "local_integral",
    "tate_datum",
    "tate_oracle",
    "AffinePiece",
    "PLFunction",
    "SimplicialMeasure",
    "integrate_affine",
    "integrate_pl",
    "pl_eval",
    "pl_validate",
    "pushforward_affine",
    "total_mass",
]
