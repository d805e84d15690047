"""Products of spherical classes in classical rank-one symmetric pairs.

Library + CLI for computing, sampling, and empirically validating the
distribution of products of random matrices drawn from fixed spherical
classes, and for measuring the rate at which repeated products approach
Haar measure on the special unitary group.
"""

__version__ = "0.1.0"

from .errors import (ConfigurationError, FieldMismatchError, NumericalError,
                     Rank1Error, SingularInputError, TagMismatchError,
                     TruncationError)
from .linalg import (DenseMatrix, Field, GroupElement, GroupKind, GroupTag,
                     adjoint, exp_radial, mat_mul, qr_positive)
from .pairs import (Curvature, Family, Mode, PairDescriptor, SphericalClass,
                    delta, delta0, radial_codomain, radial_u)
from .quaternion import Quaternion
from .rng import RngStream

__all__ = [
    "ConfigurationError", "Curvature", "DenseMatrix", "Family", "Field",
    "FieldMismatchError", "GroupElement", "GroupKind", "GroupTag", "Mode",
    "NumericalError", "PairDescriptor", "Quaternion", "Rank1Error",
    "RngStream", "SingularInputError", "SphericalClass", "TagMismatchError",
    "TruncationError", "adjoint", "delta", "delta0", "exp_radial", "mat_mul",
    "qr_positive", "radial_codomain", "radial_u",
]
