"""Exception types.  Each carries a machine-readable code and a CLI exit status."""


class TropError(Exception):
    code = "error"
    exit_status = 2


class SingularLattice(TropError, ValueError):
    code = "singular-lattice"


class DimensionMismatch(TropError, ValueError):
    code = "dimension-mismatch"


class DegenerateSimplex(TropError, ValueError):
    code = "degenerate-simplex"


class DegenerateImage(TropError, ValueError):
    code = "degenerate-image"


class OutsideSupport(TropError, ValueError):
    code = "outside-support"


class NotContained(TropError, ValueError):
    code = "not-contained"


class RefinementUnsupported(TropError):
    code = "refinement-unsupported"
    exit_status = 3


class OrbitBudgetExceeded(TropError):
    code = "budget-exceeded"
    exit_status = 4


class UnstableComplex(TropError, ValueError):
    code = "unstable-complex"


class SingularSystem(TropError, ArithmeticError):
    code = "singular-system"


class DegenerateStratum(TropError, ValueError):
    code = "degenerate-stratum"


class ProblemParseError(TropError, ValueError):
    code = "parse-error"
    exit_status = 5
