"""Quaternion scalars and batched quaternion-matrix kernels.

A quaternion w + xi + yj + zk is stored in "complex pair" form (a, b) with
a = w + xi and b = y + zi, so that q = a + b j. The pair form turns Hamilton
products of whole matrices into four complex matmuls:

    (a1 + b1 j)(a2 + b2 j) = (a1 a2 - b1 conj(b2)) + (a1 b2 + b1 conj(a2)) j

Arrays of quaternions are (A, B) pairs of equal-shape complex128 ndarrays.
All kernels broadcast over leading batch dimensions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .errors import PIVOT_TOL, SingularInputError

QArray = tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class Quaternion:
    """Scalar quaternion with Hamilton multiplication."""

    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    ZERO: ClassVar["Quaternion"]
    ONE: ClassVar["Quaternion"]
    I: ClassVar["Quaternion"]
    J: ClassVar["Quaternion"]
    K: ClassVar["Quaternion"]

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        p, q = self, other
        return Quaternion(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2)

    def as_pair(self) -> tuple[complex, complex]:
        return complex(self.w, self.x), complex(self.y, self.z)

    @staticmethod
    def from_pair(a: complex, b: complex) -> "Quaternion":
        return Quaternion(a.real, a.imag, b.real, b.imag)


Quaternion.ZERO = Quaternion(0.0)
Quaternion.ONE = Quaternion(1.0)
Quaternion.I = Quaternion(0.0, 1.0)
Quaternion.J = Quaternion(0.0, 0.0, 1.0)
Quaternion.K = Quaternion(0.0, 0.0, 0.0, 1.0)


# ---------------------------------------------------------------------------
# array kernels (complex-pair form)
# ---------------------------------------------------------------------------

def qarr(a, b) -> QArray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError("pair components must share a shape")
    return a, b


def qzeros(shape) -> QArray:
    return np.zeros(shape, dtype=np.complex128), np.zeros(shape, dtype=np.complex128)


def qeye(n: int, batch: tuple = ()) -> QArray:
    a = np.broadcast_to(np.eye(n, dtype=np.complex128), batch + (n, n)).copy()
    return a, np.zeros(batch + (n, n), dtype=np.complex128)


def qmul(p: QArray, q: QArray) -> QArray:
    """Elementwise Hamilton product."""
    a1, b1 = p
    a2, b2 = q
    return a1 * a2 - b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2)


def qconj(p: QArray) -> QArray:
    a, b = p
    return np.conj(a), -b


def qnorm2(p: QArray) -> np.ndarray:
    a, b = p
    return (a * np.conj(a)).real + (b * np.conj(b)).real


def qnorm(p: QArray) -> np.ndarray:
    return np.sqrt(qnorm2(p))


def qmatmul(m1: QArray, m2: QArray) -> QArray:
    """Quaternion matrix product over (..., n, k) @ (..., k, m)."""
    a1, b1 = m1
    a2, b2 = m2
    return (a1 @ a2 - b1 @ np.conj(b2), a1 @ b2 + b1 @ np.conj(a2))


def qadjoint(m: QArray) -> QArray:
    """Conjugate transpose: entry (i, j) becomes conj(q_ji)."""
    a, b = m
    return np.conj(np.swapaxes(a, -1, -2)), -np.swapaxes(b, -1, -2)


def qfrobenius2(m: QArray) -> np.ndarray:
    return qnorm2(m).sum(axis=(-1, -2))


def q_scalar_get(m: QArray, i: int, j: int) -> Quaternion:
    a, b = m
    return Quaternion.from_pair(complex(a[..., i, j]), complex(b[..., i, j]))


def q_from_components(w, x, y, z) -> QArray:
    w = np.asarray(w, dtype=np.float64)
    return qarr(w + 1j * np.asarray(x, dtype=np.float64),
                np.asarray(y, dtype=np.float64) + 1j * np.asarray(z, dtype=np.float64))


def q_components(m: QArray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    a, b = m
    return a.real, a.imag, b.real, b.imag


def q_to_complex_block(m: QArray) -> np.ndarray:
    """View an (..., n, n) quaternion matrix as a (..., 2n, 2n) complex one.

    Uses the block embedding q = a + bj -> [[a, b], [-conj(b), conj(a)]];
    cross-check only, the pair form stays canonical.
    """
    a, b = m
    top = np.concatenate([a, b], axis=-1)
    bot = np.concatenate([-np.conj(b), np.conj(a)], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def qr_positive_quaternion(m: QArray) -> tuple[QArray, QArray]:
    """Householder QR with positive real diagonal, batched over leading dims.

    The positive-diagonal convention makes the factorization unique, which is
    what makes Gaussian -> Q a Haar draw on Sp(n).
    """
    a, b = m
    n = a.shape[-1]
    if a.shape[-2] != n:
        raise ValueError("square matrices required")
    ra, rb = a.copy(), b.copy()
    qa, qb = qeye(n, batch=a.shape[:-2])

    for k in range(n):
        # column tail x = R[k:, k]
        xa, xb = ra[..., k:, k], rb[..., k:, k]
        colnorm = np.sqrt((np.abs(xa) ** 2 + np.abs(xb) ** 2).sum(axis=-1))
        head = np.sqrt(np.abs(xa[..., 0]) ** 2 + np.abs(xb[..., 0]) ** 2)
        if np.any(colnorm < PIVOT_TOL):
            raise SingularInputError(f"rank-deficient input: pivot {k} below {PIVOT_TOL}")
        # unit quaternion phase of the head entry (1 when the head vanishes)
        safe = np.maximum(head, 1e-300)
        ua = np.where(head > 0, xa[..., 0] / safe, 1.0 + 0j)
        ub = np.where(head > 0, xb[..., 0] / safe, 0.0 + 0j)
        # v = x + u * |x| e1  =>  H x = -u |x| e1
        va, vb = xa.copy(), xb.copy()
        va[..., 0] += ua * colnorm
        vb[..., 0] += ub * colnorm
        vnorm2 = (np.abs(va) ** 2 + np.abs(vb) ** 2).sum(axis=-1)
        vnorm2 = np.maximum(vnorm2, 1e-300)

        # R[k:, k:] -= v (2/|v|^2) (v^* R[k:, k:]); conj(v)_i = conj(va_i) - vb_i j
        sa, sb = ra[..., k:, k:], rb[..., k:, k:]
        row = (np.conj(va)[..., None, :], (-vb)[..., None, :])
        wa, wb = qmatmul(row, (sa, sb))
        scale = (2.0 / vnorm2)[..., None, None]
        upd_a, upd_b = qmatmul((va[..., :, None], vb[..., :, None]), (wa, wb))
        ra[..., k:, k:] = sa - scale * upd_a
        rb[..., k:, k:] = sb - scale * upd_b

        # Q[:, k:] -= (Q v) (2/|v|^2) v^*
        ta, tb = qa[..., :, k:], qb[..., :, k:]
        qv_a, qv_b = qmatmul((ta, tb), (va[..., :, None], vb[..., :, None]))
        vrow = (np.conj(va)[..., None, :], (-vb)[..., None, :])
        upd_a, upd_b = qmatmul((qv_a, qv_b), vrow)
        qa[..., :, k:] = ta - scale * upd_a
        qb[..., :, k:] = tb - scale * upd_b

    # normalize: R <- D* R, Q <- Q D with D = diag(r_kk / |r_kk|)
    for k in range(n):
        da, db = ra[..., k, k].copy(), rb[..., k, k].copy()
        mod = np.sqrt(np.abs(da) ** 2 + np.abs(db) ** 2)
        if np.any(mod < PIVOT_TOL):
            raise SingularInputError(f"rank-deficient input: pivot {k} below {PIVOT_TOL}")
        da, db = da / mod, db / mod
        # row k of R scaled on the left by conj(d)
        rowa, rowb = ra[..., k, :], rb[..., k, :]
        na, nb = qmul((np.conj(da)[..., None], -db[..., None]), (rowa, rowb))
        ra[..., k, :], rb[..., k, :] = na, nb
        # column k of Q scaled on the right by d
        cola, colb = qa[..., :, k], qb[..., :, k]
        na, nb = qmul((cola, colb), (da[..., None], db[..., None]))
        qa[..., :, k], qb[..., :, k] = na, nb

    # clean strictly-lower residuals (|.| ~ machine eps after reflections)
    tril = np.tril(np.ones((n, n), dtype=bool), k=-1)
    ra[..., tril] = 0.0
    rb[..., tril] = 0.0
    return (qa, qb), (ra, rb)
