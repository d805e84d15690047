"""Empirical distributions of product radial statistics and the mixing run.

The reduced sampler exploits bi-invariance: u(XY) for independent orbit
elements X, Y has the same law as u(exp(t1 H) k exp(t2 H)) with a single
Haar-K factor k, and that entry can be computed without assembling the full
product. The full (matrix-assembling) path stays available and the two are
required to agree in distribution, which the test suite checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, KS_THRESHOLD
from .densities import ProductDensity, product_density
from .haar import (haar_group_batch, haar_so_batch, haar_sp_batch,
                   haar_unitary_batch, orbit_batch, radial_batch,
                   run_chunked, unit_quaternion_batch)
from .linalg import GroupKind
from .pairs import (Curvature, Family, Mode, PairDescriptor, SphericalClass,
                    radial_codomain)
from .rng import RngStream


@dataclass(frozen=True)
class RadialSampleSet:
    """Seeded Monte Carlo draws of the product radial statistic."""

    pair_name: str
    mode: str
    n: int
    t1: float
    t2: float
    count: int
    seed: int
    stream_id: int
    reduced: bool
    values: np.ndarray

    def validate(self) -> None:
        lo, hi = radial_codomain_of(self.pair_name)
        if not np.isfinite(self.values).all():
            raise ConfigurationError("sample set contains non-finite values")
        if self.values.min() < lo - 1e-9 or self.values.max() > hi:
            raise ConfigurationError("sample values escape the radial codomain")


def radial_codomain_of(pair_name: str) -> tuple[float, float]:
    pair = PairDescriptor.from_name(pair_name, 2, Mode.STANDARD)
    return radial_codomain(pair)


@dataclass(frozen=True)
class ComparisonReport:
    """KS statistics of one Monte Carlo sample against both analytic modes."""

    pair_name: str
    n: int
    t1: float
    t2: float
    samples: int
    seed: int
    ks_paper: float
    ks_standard: float
    threshold: float
    verdict: str  # paper | standard | both | neither

    def to_dict(self) -> dict:
        return {
            "pair": self.pair_name, "n": self.n, "t1": self.t1, "t2": self.t2,
            "samples": self.samples, "seed": self.seed,
            "ks_paper": self.ks_paper, "ks_standard": self.ks_standard,
            "threshold": self.threshold, "verdict": self.verdict,
        }


# ---------------------------------------------------------------------------
# product sampling
# ---------------------------------------------------------------------------

def _reduced_worker(pair: PairDescriptor, t1: float, t2: float):
    """Radial values of exp(t1 H) k exp(t2 H) from the (1,1) entry alone."""
    compact = pair.is_compact
    if compact:
        a1 = math.cos(t1) * math.cos(t2)
        a2 = math.sin(t1) * math.sin(t2)
    else:
        a1 = math.cosh(t1) * math.cosh(t2)
        a2 = math.sinh(t1) * math.sinh(t2)
    n = pair.n

    def worker(gen, m):
        if pair.family is Family.UNITARY:
            b = haar_unitary_batch(gen, m, n)
            w = np.linalg.det(b) * b[:, 0, 0]  # det(B) = e^{-i theta}
            return np.abs(a1 - a2 * w) if compact else np.abs(a1 + a2 * w)
        if pair.family is Family.ORTHOGONAL:
            b = haar_so_batch(gen, m, n)
            x = b[:, 0, 0]
            return a1 - a2 * x if compact else a1 + a2 * x
        qa, qb = haar_sp_batch(gen, m, n)
        sa, sb = unit_quaternion_batch(gen, m)
        ba, bb = qa[:, 0, 0], qb[:, 0, 0]
        # (1,1) entry is a1 q + a2 (j B11 j) compact, a1 q - a2 (j B11 j) not;
        # j (a + b j) j = -conj(a) - conj(b) j.
        sign = -1.0 if compact else 1.0
        pa = a1 * sa + sign * a2 * np.conj(ba)
        pb = a1 * sb + sign * a2 * np.conj(bb)
        return np.sqrt(np.abs(pa) ** 2 + np.abs(pb) ** 2)

    return worker


def _full_worker(pair: PairDescriptor, t1: float, t2: float):
    cls1 = SphericalClass(pair, t1)
    cls2 = SphericalClass(pair, t2)

    def worker(gen, m):
        x = orbit_batch(cls1, gen, m)
        y = orbit_batch(cls2, gen, m)
        if pair.family is Family.SYMPLECTIC:
            from .quaternion import qmatmul
            prod = qmatmul(x, y)
        else:
            prod = x @ y
        return radial_batch(pair, prod)

    return worker


def product_radials(pair: PairDescriptor, t1: float, t2: float, count: int,
                    rng: RngStream, reduced: bool = True,
                    threads: int = 1) -> RadialSampleSet:
    """Monte Carlo sample of u(XY) for X, Y in the classes at t1 and t2."""
    if count < 1:
        raise ConfigurationError("count must be >= 1")
    pair.validate_t(t1, "t1")
    pair.validate_t(t2, "t2")
    maker = _reduced_worker if reduced else _full_worker
    values = run_chunked(count, rng, maker(pair, t1, t2), threads=threads)
    out = RadialSampleSet(pair.name, pair.mode.value, pair.n, t1, t2, count,
                          rng.seed, rng.stream_id, reduced, values)
    out.validate()
    return out


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------

def ks_distance(values, cdf, cdf_left=None) -> float:
    """Exact sup |empirical cdf - cdf| via the sorted-sample formula.

    ``cdf_left`` supplies the left limit F(x-) for distributions with atoms
    (a point mass matched exactly by the sample then scores 0).
    """
    v = np.sort(np.asarray(values, dtype=np.float64))
    n = v.size
    if n == 0:
        raise ConfigurationError("ks_distance needs a nonempty sample")
    f = np.asarray(cdf(v), dtype=np.float64)
    if f.shape != v.shape:
        f = np.array([cdf(x) for x in v], dtype=np.float64)
    if cdf_left is None:
        fl = f
    else:
        fl = np.asarray(cdf_left(v), dtype=np.float64)
        if fl.shape != v.shape:
            fl = np.array([cdf_left(x) for x in v], dtype=np.float64)
    i = np.arange(n)
    return float(max(np.max(fl - i / n), np.max((i + 1) / n - f)))


def wasserstein_sorted(x: np.ndarray, y: np.ndarray) -> float:
    """1-Wasserstein distance between equal-size empirical samples."""
    if x.size != y.size:
        raise ConfigurationError("wasserstein_sorted expects equal sizes")
    return float(np.mean(np.abs(np.sort(x) - np.sort(y))))


def _ks_against_density(values: np.ndarray, dens: ProductDensity) -> float:
    if dens.degenerate:
        point = dens.point
        cdf = lambda v: (np.asarray(v) >= point).astype(float)
        left = lambda v: (np.asarray(v) > point).astype(float)
        return ks_distance(values, cdf, left)
    if dens.needs_folding:
        return ks_distance(values, dens.cdf_folded)
    return ks_distance(values, dens.cdf_many)


def compare_modes(pair: PairDescriptor, t1: float, t2: float, count: int,
                  rng: RngStream, threshold: float = KS_THRESHOLD,
                  threads: int = 1) -> ComparisonReport:
    """One sample, two analytic candidates, a verdict.

    The sample does not depend on the mode; both the paper-mode and the
    standard-mode densities are scored against it. Densities of compact
    unitary/symplectic pairs whose support dips below zero are folded to
    |u| before comparison. ``neither`` is an admissible verdict.
    """
    paper = product_density(replace(pair, mode=Mode.PAPER), t1, t2)
    standard = product_density(replace(pair, mode=Mode.STANDARD), t1, t2)
    sample = product_radials(pair, t1, t2, count, rng, reduced=True,
                             threads=threads)
    ks_p = _ks_against_density(sample.values, paper)
    ks_s = _ks_against_density(sample.values, standard)
    below = [name for name, ks in (("paper", ks_p), ("standard", ks_s))
             if ks < threshold]
    verdict = {0: "neither", 1: below[0] if below else "", 2: "both"}[len(below)]
    return ComparisonReport(pair.name, pair.n, t1, t2, count, rng.seed,
                            ks_p, ks_s, threshold, verdict)


# ---------------------------------------------------------------------------
# the SU(n) mixing experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixingRow:
    factors: int       # N: the product has 2N alternating class elements
    distance: float    # W1 between Re Tr samples (product vs Haar)


def su_pair(n: int) -> PairDescriptor:
    """The unitary compact pair whose group is SU(n)."""
    if n < 2:
        raise ConfigurationError("SU(n) experiments need n >= 2")
    return PairDescriptor(Family.UNITARY, Curvature.COMPACT, n - 1, Mode.STANDARD)


def haar_re_trace(n: int, count: int, rng: RngStream, threads: int = 1) -> np.ndarray:
    """Re Tr sample of Haar SU(n)."""

    def worker(gen, m):
        g = haar_group_batch(gen, GroupKind.SU, n, m)
        return np.einsum("...ii->...", g).real

    return run_chunked(count, rng, worker, threads=threads)


def mixing_experiment(n: int, t1: float, t2: float, max_factors: int,
                      samples_per_point: int, rng: RngStream,
                      threads: int = 1) -> list[MixingRow]:
    """Distance to Haar of g1 h1 g2 h2 ... gN hN products in SU(n).

    g_i are orbit draws at t1, h_i at t2; for each N up to max_factors the
    Re Tr sample of the partial product is compared against an equal-size
    Haar-SU(n) Re Tr sample by 1-Wasserstein distance. Produces the table
    that the mixing-length analysis plots; no monotonicity is asserted here.
    """
    pair = su_pair(n)
    cls1 = SphericalClass(pair, t1)
    cls2 = SphericalClass(pair, t2)

    def worker(gen, m):
        prod = np.broadcast_to(np.eye(n, dtype=np.complex128), (m, n, n)).copy()
        traces = np.empty((max_factors, m))
        for j in range(max_factors):
            prod = prod @ orbit_batch(cls1, gen, m)
            prod = prod @ orbit_batch(cls2, gen, m)
            traces[j] = np.einsum("...ii->...", prod).real
        return traces

    traces = run_chunked(samples_per_point, rng.child(0), worker,
                         threads=threads, axis=1)
    haar_sample = haar_re_trace(n, samples_per_point, rng.child(1),
                                threads=threads)
    return [MixingRow(j + 1, wasserstein_sorted(traces[j], haar_sample))
            for j in range(max_factors)]


# ---------------------------------------------------------------------------
# the spherical functional equation, sampled at group level
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionalTestResult:
    mc_mean: float
    analytic: float
    z_score: float


def spherical_functional_test(n: int, m: int, t1: float, t2: float,
                              samples: int, rng: RngStream,
                              threads: int = 1) -> FunctionalTestResult:
    """E_k[phi_m(arccos u(exp(t1 H) k exp(t2 H)))] vs phi_m(t1) phi_m(t2).

    The defining property of sphericity, checked by Monte Carlo over Haar-K
    in SU(n) with K = S(U(1) x U(n-1)).
    """
    from .plancherel import phi
    pair = su_pair(n)
    pair.validate_t(t1, "t1")
    pair.validate_t(t2, "t2")
    base = _reduced_worker(pair, t1, t2)

    def worker(gen, count):
        u = base(gen, count)
        return phi(m, n, np.arccos(np.clip(u, 0.0, 1.0)))

    vals = run_chunked(samples, rng, worker, threads=threads)
    mc_mean = float(vals.mean())
    analytic = float(phi(m, n, t1) * phi(m, n, t2))
    spread = float(vals.std(ddof=1)) if samples > 1 else 0.0
    diff = abs(mc_mean - analytic)
    if spread < 1e-14:
        z = 0.0 if diff < 1e-12 else math.inf
    else:
        z = diff / (spread / math.sqrt(samples))
    return FunctionalTestResult(mc_mean, analytic, z)
