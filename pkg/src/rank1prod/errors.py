"""Exception types and the centralized numeric tolerances."""

# Structural invariants (unitarity, determinant, J-isometry): Frobenius scale.
STRUCT_TOL = 1e-10
# Algebraic identities (associativity, homomorphism, adjoint rules).
ALG_TOL = 1e-12
# Rank decision threshold for QR pivots.
PIVOT_TOL = 1e-12
# Default Kolmogorov-Smirnov acceptance threshold at N >= 1e5 samples.
KS_THRESHOLD = 0.01


class Rank1Error(Exception):
    """Base class for all package errors."""


class FieldMismatchError(Rank1Error):
    """Operands live over different scalar fields or have unequal shapes."""


class SingularInputError(Rank1Error):
    """Matrix is rank-deficient beyond the pivot tolerance."""


class TagMismatchError(Rank1Error):
    """A group element does not carry the tag an operation requires."""


class ConfigurationError(Rank1Error):
    """Invalid pair/mode/parameter combination (usage error, exit code 2)."""


class NumericalError(Rank1Error):
    """Numerical failure: truncation, non-integrable kernel, degenerate input."""


class TruncationError(NumericalError):
    """A series failed to contract below tolerance before the term cap."""

    def __init__(self, message: str, achieved: float | None = None,
                 truncation_m: int | None = None):
        super().__init__(message)
        self.achieved = achieved
        self.truncation_m = truncation_m
