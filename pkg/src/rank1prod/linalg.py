"""Exact-shape dense linear algebra over real, complex and quaternion scalars.

All values are immutable after construction and every operation is a pure
function, so matrices can be shared freely across threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Union

import numpy as np

from .errors import (PIVOT_TOL, STRUCT_TOL, FieldMismatchError,
                     SingularInputError, TagMismatchError)
from . import quaternion as qt
from .quaternion import QArray

if TYPE_CHECKING:
    from .pairs import PairDescriptor


class Field(Enum):
    REAL = "real"
    COMPLEX = "complex"
    QUATERNION = "quaternion"


class GroupKind(Enum):
    U = "U"
    SU = "SU"
    SO = "SO"
    SP = "Sp"
    SU_NC = "SU(1,n)"
    SO_NC = "SO(1,n)"
    SP_NC = "Sp(1,n)"

    @property
    def compact(self) -> bool:
        return self in (GroupKind.U, GroupKind.SU, GroupKind.SO, GroupKind.SP)

    @property
    def field(self) -> Field:
        if self in (GroupKind.SO, GroupKind.SO_NC):
            return Field.REAL
        if self in (GroupKind.SP, GroupKind.SP_NC):
            return Field.QUATERNION
        return Field.COMPLEX


@dataclass(frozen=True)
class GroupTag:
    kind: GroupKind
    dim: int  # matrix dimension (noncompact kinds: 1 + n)

    def __str__(self) -> str:
        return f"{self.kind.value}({self.dim})"


class DenseMatrix:
    """Square dense matrix over one of the three scalar fields.

    Real/complex entries are a single ndarray; quaternion entries are the
    complex pair (A, B) with q = A + B j.
    """

    __slots__ = ("field", "dim", "_data")

    def __init__(self, field: Field, data: Union[np.ndarray, QArray]):
        self.field = field
        if field is Field.QUATERNION:
            a, b = data
            a = np.asarray(a, dtype=np.complex128)
            b = np.asarray(b, dtype=np.complex128)
            if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
                raise FieldMismatchError("quaternion matrix must be a square pair")
            if not (np.isfinite(a).all() and np.isfinite(b).all()):
                raise FieldMismatchError("entries must be finite")
            self._data = (a, b)
            self.dim = a.shape[0]
        else:
            dtype = np.float64 if field is Field.REAL else np.complex128
            arr = np.asarray(data, dtype=dtype)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise FieldMismatchError("matrix must be square")
            if not np.isfinite(arr).all():
                raise FieldMismatchError("entries must be finite")
            self._data = arr
            self.dim = arr.shape[0]

    # -- constructors -------------------------------------------------------

    @staticmethod
    def identity(field: Field, dim: int) -> "DenseMatrix":
        if field is Field.QUATERNION:
            return DenseMatrix(field, qt.qeye(dim))
        return DenseMatrix(field, np.eye(dim))

    @staticmethod
    def from_quaternions(entries) -> "DenseMatrix":
        """Build from a nested sequence of Quaternion scalars."""
        rows = list(entries)
        n = len(rows)
        a = np.zeros((n, n), dtype=np.complex128)
        b = np.zeros((n, n), dtype=np.complex128)
        for i, row in enumerate(rows):
            for j, q in enumerate(row):
                a[i, j], b[i, j] = q.as_pair()
        return DenseMatrix(Field.QUATERNION, (a, b))

    # -- accessors ----------------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        if self.field is Field.QUATERNION:
            raise FieldMismatchError("quaternion matrices expose .pair, not .array")
        return self._data

    @property
    def pair(self) -> QArray:
        if self.field is not Field.QUATERNION:
            raise FieldMismatchError(".pair is quaternion-only")
        return self._data

    def entry(self, i: int, j: int):
        """Entry as float / complex / Quaternion depending on the field."""
        if self.field is Field.QUATERNION:
            return qt.q_scalar_get(self._data, i, j)
        return self._data[i, j]

    def as_complex_block(self) -> np.ndarray:
        """2n x 2n complex view of a quaternion matrix (cross-checks only)."""
        if self.field is not Field.QUATERNION:
            raise FieldMismatchError("complex-block view is quaternion-only")
        return qt.q_to_complex_block(self._data)

    def frobenius_distance(self, other: "DenseMatrix") -> float:
        _check_same_shape(self, other)
        if self.field is Field.QUATERNION:
            da = self._data[0] - other._data[0]
            db = self._data[1] - other._data[1]
            return float(np.sqrt((np.abs(da) ** 2 + np.abs(db) ** 2).sum()))
        return float(np.linalg.norm(self._data - other._data))


@dataclass(frozen=True)
class GroupElement:
    matrix: DenseMatrix
    group: GroupTag

    def __post_init__(self):
        defect = group_defect(self.matrix, self.group)
        if defect > STRUCT_TOL:
            raise TagMismatchError(
                f"matrix violates {self.group} invariant: defect {defect:.3e}")


def _check_same_shape(a: DenseMatrix, b: DenseMatrix) -> None:
    if a.field is not b.field or a.dim != b.dim:
        raise FieldMismatchError(
            f"operands disagree: {a.field.value}[{a.dim}] vs {b.field.value}[{b.dim}]")


def mat_mul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Matrix product; quaternion entries multiply left-to-right (Hamilton)."""
    _check_same_shape(a, b)
    if a.field is Field.QUATERNION:
        return DenseMatrix(a.field, qt.qmatmul(a.pair, b.pair))
    return DenseMatrix(a.field, a.array @ b.array)


def adjoint(a: DenseMatrix) -> DenseMatrix:
    """Conjugate transpose; plain transpose over the reals."""
    if a.field is Field.QUATERNION:
        return DenseMatrix(a.field, qt.qadjoint(a.pair))
    return DenseMatrix(a.field, a.array.conj().T)


def qr_positive(a: DenseMatrix) -> tuple[DenseMatrix, DenseMatrix]:
    """QR with strictly positive real diagonal of R (unique factorization).

    Householder-based throughout: LAPACK for real/complex, the quaternion
    kernel from .quaternion otherwise. Uniqueness of the positive-diagonal
    factorization is what makes Gaussian -> Q exactly Haar.
    """
    if a.field is Field.QUATERNION:
        (qa, qb), (ra, rb) = qt.qr_positive_quaternion(a.pair)
        return DenseMatrix(a.field, (qa, qb)), DenseMatrix(a.field, (ra, rb))
    q, r = np.linalg.qr(a.array)
    d = np.diagonal(r).copy()
    if np.any(np.abs(d) < PIVOT_TOL):
        raise SingularInputError(f"rank-deficient input: pivot below {PIVOT_TOL}")
    ph = d / np.abs(d)
    q = q * ph[None, :]
    r = r * np.conj(ph)[:, None]
    if a.field is Field.REAL:
        q, r = q.real, r.real
    return DenseMatrix(a.field, q), DenseMatrix(a.field, r)


# ---------------------------------------------------------------------------
# group invariants
# ---------------------------------------------------------------------------

def _signature_form(field: Field, dim: int):
    j = np.ones(dim)
    j[0] = -1.0
    return j


def group_defect(m: DenseMatrix, tag: GroupTag) -> float:
    """Frobenius-scale violation of the tag's defining equations."""
    if m.dim != tag.dim:
        return float("inf")
    if tag.kind.field is not m.field:
        return float("inf")
    if m.field is Field.QUATERNION:
        A, B = m.pair
        Aa, Ab = qt.qadjoint(m.pair)
        if tag.kind.compact:
            pa, pb = qt.qmatmul((Aa, Ab), (A, B))
            pa = pa - np.eye(m.dim)
            return float(np.sqrt((np.abs(pa) ** 2 + np.abs(pb) ** 2).sum()))
        j = _signature_form(m.field, m.dim)
        pa, pb = qt.qmatmul((Aa * j[None, :], Ab * j[None, :]), (A, B))
        pa = pa - np.diag(j)
        return float(np.sqrt((np.abs(pa) ** 2 + np.abs(pb) ** 2).sum()))

    g = m.array
    if tag.kind.compact:
        defect = np.linalg.norm(g.conj().T @ g - np.eye(m.dim))
        if tag.kind in (GroupKind.SU, GroupKind.SO):
            defect = max(defect, abs(np.linalg.det(g) - 1.0))
        return float(defect)
    j = _signature_form(m.field, m.dim)
    gram = g.conj().T * j[None, :] @ g
    return float(np.linalg.norm(gram - np.diag(j)))


# ---------------------------------------------------------------------------
# the one-parameter radial subgroups
# ---------------------------------------------------------------------------

def exp_radial_array(pair: "PairDescriptor", t: float):
    """Raw-array form of exp(tH) for the pair's radial generator H."""
    dim = pair.group_dim
    compact = pair.is_compact
    c, s = (np.cos(t), np.sin(t)) if compact else (np.cosh(t), np.sinh(t))

    if pair.family.value == "symplectic":
        # H couples quaternion coordinates 0,1 through the -j direction
        a, b = qt.qeye(dim)
        a[0, 0] = a[1, 1] = c
        if compact:
            b[0, 1] = b[1, 0] = -1j * s
        else:
            b[0, 1] = -1j * s
            b[1, 0] = 1j * s
        return a, b

    dtype = np.float64 if pair.family.value == "orthogonal" else np.complex128
    g = np.eye(dim, dtype=dtype)
    g[0, 0] = g[1, 1] = c
    if compact:
        g[0, 1], g[1, 0] = s, -s  # plane rotation, Givens form
    else:
        g[0, 1] = g[1, 0] = s  # hyperbolic boost
    return g


def exp_radial(pair: "PairDescriptor", t: float) -> GroupElement:
    """Closed-form exponential of the pair's radial generator.

    Compact pairs get the plane rotation by angle t in the two coordinates
    the generator couples; noncompact pairs the cosh/sinh boost. The result
    carries the pair's G tag.
    """
    data = exp_radial_array(pair, float(t))
    field = pair.field
    return GroupElement(DenseMatrix(field, data), pair.group_tag)
