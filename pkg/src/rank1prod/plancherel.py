"""Spherical representation theory of SU(n) with K = S(U(1) x U(n-1)).

Supplies the exact Weyl dimensions d(m, n) of the spherical representations,
the elementary spherical functions phi_m, the squared-L2 distance

    c_n(l) = sum_{m >= 1} d(m, n) (phi_m(t1) phi_m(t2))^(2l)

of the 2l-fold alternating convolution power from the uniform density, the
minimal mixing length l*, and the log-n scaling fit.

phi_m(exp tH) is the terminating hypergeometric series
F(-m, m+n-1; n-1; sin^2 t), equivalently the Jacobi polynomial
P_m^(n-2, 0)(cos 2t) normalized to 1 at t = 0. This parameterization is the
one that satisfies the spherical product-average functional equation for
SU(n)/S(U(1) x U(n-1)) (the montecarlo module verifies it at group level),
and it makes the matrix-coefficient orthogonality relation
int phi_m phi_m' delta = delta_mm' / d(m, n) exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, TruncationError

_DIRECT_SUM_MAX = 50    # switchover to the three-term recurrence
_CN_CAP = 100_000
_LSTAR_CAP = 10_000


@dataclass(frozen=True)
class SphericalRep:
    """One spherical representation: label m, group size n, exact dimension."""

    m: int
    n: int
    dim: int


@dataclass(frozen=True)
class PlancherelSum:
    n: int
    t1: float
    t2: float
    l: int
    value: float
    truncation_m: int
    tail_bound: float


def weyl_dim(m: int, n: int) -> int:
    """Exact dimension of the m-th spherical representation of SU(n).

    d(m, n) = ((m+n-2)!)^2 (2m+n-1) / ((m!)^2 (n-2)! (n-1)!), always an
    integer; a nonzero remainder signals misuse of the formula.
    """
    if m < 0 or n < 2:
        raise ConfigurationError(f"weyl_dim needs m >= 0, n >= 2; got m={m}, n={n}")
    num = math.factorial(m + n - 2) ** 2 * (2 * m + n - 1)
    den = math.factorial(m) ** 2 * math.factorial(n - 2) * math.factorial(n - 1)
    q, r = divmod(num, den)
    if r != 0:
        raise ConfigurationError(
            f"weyl dimension ratio is not integral for m={m}, n={n}")
    return q


def spherical_rep(m: int, n: int) -> SphericalRep:
    return SphericalRep(m, n, weyl_dim(m, n))


def _log_weyl_dim(m: int, n: int) -> float:
    # lgamma form of weyl_dim; used inside c_n where m can be large
    return (2 * math.lgamma(m + n - 1) - 2 * math.lgamma(m + 1)
            - math.lgamma(n - 1) - math.lgamma(n)
            + math.log(2 * m + n - 1))


# ---------------------------------------------------------------------------
# elementary spherical functions
# ---------------------------------------------------------------------------

def _phi_direct(m: int, n: int, s2: float) -> float:
    """Terminating series sum_k ((-m)_k (m+n-1)_k / (n-1)_k k!) s2^k.

    The alternating terms reach ~1e21 by m = 50 while the value stays below
    1, which no float64 summation survives, so the sum is carried in exact
    rational arithmetic (s2 is a binary rational) and rounded once at the
    end. Scalar path only.
    """
    s = Fraction(float(s2))
    total = Fraction(1)
    term = Fraction(1)
    for k in range(m):
        term *= Fraction((k - m) * (k + m + n - 1), (k + n - 1) * (k + 1)) * s
        total += term
    return float(total)


def _phi_recurrence(m: int, n: int, x):
    """Normalized Jacobi three-term recurrence in the degree at x = cos 2t."""
    x = np.asarray(x, dtype=np.float64)
    alpha = n - 2
    r_prev = np.ones_like(x)                                  # m = 0
    if m == 0:
        return r_prev
    r_cur = ((alpha + 1) + (alpha + 2) * (x - 1) / 2) / (alpha + 1)
    for k in range(2, m + 1):
        a_c = 2 * k * (k + alpha) * (2 * k + alpha - 2)
        b_c = (2 * k + alpha - 1) * ((2 * k + alpha) * (2 * k + alpha - 2) * x
                                     + alpha * alpha)
        c_c = 2 * (k + alpha - 1) * (k - 1) * (2 * k + alpha)
        scale_1 = k / (k + alpha)                              # B_(k-1)/B_k
        scale_2 = k * (k - 1) / ((k + alpha) * (k + alpha - 1))
        r_next = (b_c * r_cur * scale_1 - c_c * r_prev * scale_2) / a_c
        r_prev, r_cur = r_cur, r_next
    return r_cur


def phi(m: int, n: int, t):
    """Elementary spherical function phi_m at radial parameter t in [0, pi/2].

    Scalars go through the exact direct sum up to m = 50 and the Jacobi
    recurrence beyond; the two agree to better than 1e-9 at the switchover
    (asserted in tests). Array arguments always use the recurrence.
    """
    if m < 0 or n < 2:
        raise ConfigurationError(f"phi needs m >= 0, n >= 2; got m={m}, n={n}")
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any(t_arr < -1e-12) or np.any(t_arr > math.pi / 2 + 1e-12):
        raise ConfigurationError("phi is defined on t in [0, pi/2]")
    if np.isscalar(t) and m <= _DIRECT_SUM_MAX:
        return _phi_direct(m, n, math.sin(float(t)) ** 2)
    out = _phi_recurrence(m, n, np.cos(2 * t_arr))
    return float(out) if np.isscalar(t) else out


# ---------------------------------------------------------------------------
# the Plancherel sum and mixing lengths
# ---------------------------------------------------------------------------

class _PhiSequence:
    """phi_m(t) for m = 0, 1, 2, ... by one O(1) recurrence step per call."""

    def __init__(self, n: int, t: float):
        self.alpha = n - 2
        self.x = math.cos(2 * t)
        self.m = 0
        self.prev = 1.0
        self.cur = 1.0

    def step(self) -> float:
        """Advance to the next m and return phi_m."""
        a = self.alpha
        self.m += 1
        k = self.m
        if k == 1:
            self.cur = ((a + 1) + (a + 2) * (self.x - 1) / 2) / (a + 1)
            return self.cur
        a_c = 2 * k * (k + a) * (2 * k + a - 2)
        b_c = (2 * k + a - 1) * ((2 * k + a) * (2 * k + a - 2) * self.x + a * a)
        c_c = 2 * (k + a - 1) * (k - 1) * (2 * k + a)
        nxt = (b_c * self.cur * (k / (k + a))
               - c_c * self.prev * (k * (k - 1) / ((k + a) * (k + a - 1)))) / a_c
        self.prev, self.cur = self.cur, nxt
        return nxt


_CN_BLOCK = 8   # window width for the geometric tail certificate


def cn(n: int, t1: float, t2: float, l: int, tol: float = 1e-10,
       m_cap: int = _CN_CAP) -> PlancherelSum:
    """Partial sums of c_n with a geometric tail certificate.

    Terms are accumulated for m = 1, 2, ... The spherical values oscillate
    through zero, so the tail is certified on trailing windows: the maxima
    of consecutive 8-term windows must contract (ratio < 1), and the sum
    stops once window_max * width * r/(1-r) falls below tol. A sum that
    fails to contract by m = m_cap raises TruncationError; l = 0 is
    rejected outright since the bare dimension sum diverges.
    """
    if l < 1:
        raise ConfigurationError("l must be >= 1 (the dimension sum diverges)")
    if tol <= 0:
        raise ConfigurationError("tol must be positive")
    for name, t in (("t1", t1), ("t2", t2)):
        if not 0.0 < t < math.pi / 2:
            raise ConfigurationError(f"{name} must lie in the open interval (0, pi/2)")

    seq1 = _PhiSequence(n, t1)
    seq2 = _PhiSequence(n, t2)
    total = 0.0
    comp = 0.0
    block_max = 0.0
    prev_block_max: float | None = None
    zero_run = 0
    for m in range(1, m_cap + 1):
        prod = abs(seq1.step() * seq2.step())
        if prod == 0.0:
            term = 0.0
        else:
            log_term = _log_weyl_dim(m, n) + 2 * l * math.log(prod)
            if log_term > 700.0:
                raise TruncationError(
                    f"c_n terms overflow at m={m} (l={l} too small to converge)",
                    achieved=math.inf, truncation_m=m)
            term = math.exp(log_term)
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s

        zero_run = zero_run + 1 if term == 0.0 else 0
        if m >= _CN_BLOCK and zero_run >= _CN_BLOCK // 2:
            return PlancherelSum(n, t1, t2, l, total, m, 0.0)
        block_max = max(block_max, term)
        if m % _CN_BLOCK == 0:
            if prev_block_max is not None and prev_block_max > 0.0:
                r = block_max / prev_block_max
                if r < 1.0:
                    tail = block_max * _CN_BLOCK * r / (1.0 - r)
                    if block_max + tail < tol:
                        return PlancherelSum(n, t1, t2, l, total, m, tail)
            prev_block_max = block_max
            block_max = 0.0
    raise TruncationError(
        f"c_n failed to contract below tol={tol} by m={m_cap}",
        achieved=total, truncation_m=m_cap)


def l_star(n: int, t1: float, t2: float, eps: float,
           l_cap: int = _LSTAR_CAP) -> int:
    """Minimal l >= 1 with c_n(l) < eps^2 (squared L2 distance below eps).

    eps enters squared because c_n is a squared L2 norm. Monotonicity of
    c_n in l makes doubling + bisection exact.
    """
    if eps <= 0:
        raise ConfigurationError("eps must be positive")
    target = eps * eps
    tol = min(1e-12, target * 1e-4)

    def below(l: int) -> bool:
        try:
            return cn(n, t1, t2, l, tol=tol).value < target
        except TruncationError:
            return False  # non-contracting sum means l is far too small

    if below(1):
        return 1
    lo = 1  # known not below
    hi = 2
    while not below(hi):
        lo = hi
        hi *= 2
        if hi > l_cap:
            achieved = None
            try:
                achieved = cn(n, t1, t2, l_cap, tol=tol).value
            except TruncationError as exc:
                achieved = exc.achieved
            raise TruncationError(
                f"l_star not found below cap {l_cap} (c_n = {achieved})",
                achieved=achieved, truncation_m=l_cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if below(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class LognFitResult:
    slope: float
    intercept: float
    spearman: float
    l_values: tuple[int, ...]
    n_values: tuple[int, ...]


def logn_fit(n_list: Sequence[int], t1: float, t2: float,
             eps: float) -> LognFitResult:
    """Least-squares fit l*(n) ~ intercept + slope * log n, plus the
    Spearman rank correlation between l* and log n."""
    n_list = list(n_list)
    if len(n_list) < 5:
        raise ConfigurationError("logn_fit needs at least 5 group sizes")
    if n_list != sorted(n_list):
        raise ConfigurationError("n_list must be ascending")
    ls = [l_star(n, t1, t2, eps) for n in n_list]
    logs = np.log(np.asarray(n_list, dtype=np.float64))
    slope, intercept = np.polyfit(logs, np.asarray(ls, dtype=np.float64), 1)
    if all(v == ls[0] for v in ls):
        spearman = 0.0  # rank correlation of a constant sequence is undefined
    else:
        from scipy.stats import spearmanr
        spearman = float(spearmanr(logs, ls).statistic)
    return LognFitResult(float(slope), float(intercept), spearman,
                         tuple(ls), tuple(n_list))


# ---------------------------------------------------------------------------
# the asymptotic envelope diagnostic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeRow:
    m: int
    abs_phi: float
    envelope: float


@dataclass(frozen=True)
class EnvelopeReport:
    rows: tuple[EnvelopeRow, ...]
    fitted_constant: float
    ratio_min: float
    ratio_max: float


def asymptotic_envelope_check(m_list: Sequence[int], n: int,
                              t: float) -> EnvelopeReport:
    """Tabulate |phi_m(t)| against the stated large-m envelope.

    The envelope (n-1)^(n-1/2) m^(m+1/2) / (n+m-1)^(n+m-1/2) * t^(-n+1/2)/sqrt(m)
    is asymptotic with an unspecified constant, so the constant is fitted
    (geometric mean of the ratios) and the spread is reported, not asserted.
    """
    if not 0.0 < t <= math.pi / 2:
        raise ConfigurationError("envelope regime needs t in (0, pi/2]")
    rows = []
    log_ratios = []
    for m in m_list:
        if m < 1:
            raise ConfigurationError("m_list entries must be >= 1")
        val = abs(float(phi(m, n, t)))
        log_env = ((n - 0.5) * math.log(n - 1) + (m + 0.5) * math.log(m)
                   - (n + m - 0.5) * math.log(n + m - 1)
                   + (-n + 0.5) * math.log(t) - 0.5 * math.log(m))
        env = math.exp(log_env)
        rows.append(EnvelopeRow(m, val, env))
        if val > 0:
            log_ratios.append(math.log(val) - log_env)
    if log_ratios:
        fitted = math.exp(sum(log_ratios) / len(log_ratios))
        ratios = [math.exp(lr) / fitted for lr in log_ratios]
        rmin, rmax = min(ratios), max(ratios)
    else:
        fitted, rmin, rmax = math.nan, math.nan, math.nan
    return EnvelopeReport(tuple(rows), fitted, rmin, rmax)
