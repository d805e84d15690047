import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import binom, eval_jacobi

from rank1prod.errors import ConfigurationError, TruncationError
from rank1prod.plancherel import (EnvelopeReport, _phi_direct, _phi_recurrence,
                                  _PhiSequence, asymptotic_envelope_check, cn,
                                  l_star, logn_fit, phi, spherical_rep,
                                  weyl_dim)


class TestWeylDim:
    def test_trivial_rep(self):
        assert all(weyl_dim(0, n) == 1 for n in range(2, 20))

    def test_adjoint_values(self):
        assert weyl_dim(1, 3) == 8
        assert all(weyl_dim(1, n) == n * n - 1 for n in range(3, 11))

    def test_su2_odd_dimensions(self):
        assert all(weyl_dim(m, 2) == 2 * m + 1 for m in range(1, 21))

    def test_exactness_large(self):
        # divmod-integrality is enforced inside; these must not raise
        for m in (100, 317, 500):
            for n in (2, 17, 64):
                assert weyl_dim(m, n) >= 1

    def test_bad_inputs(self):
        with pytest.raises(ConfigurationError):
            weyl_dim(-1, 4)
        with pytest.raises(ConfigurationError):
            weyl_dim(2, 1)

    def test_record(self):
        rep = spherical_rep(2, 5)
        assert (rep.m, rep.n, rep.dim) == (2, 5, weyl_dim(2, 5))


class TestPhi:
    def test_phi0_is_one(self):
        ts = np.linspace(0, math.pi / 2, 9)
        assert np.all(phi(0, 7, ts) == 1.0)

    def test_phi_at_origin_is_one(self):
        for n in (2, 4, 16):
            for m in (1, 5, 60, 200):
                assert phi(m, n, 0.0) == pytest.approx(1.0, abs=1e-10)

    def test_against_jacobi_oracle(self):
        ts = np.linspace(0, math.pi / 2, 13)
        for n in (2, 3, 4, 6, 10, 64):
            for m in (1, 2, 5, 17, 50, 51, 80, 200, 500):
                mine = phi(m, n, ts)
                oracle = eval_jacobi(m, n - 2, 0, np.cos(2 * ts)) / binom(m + n - 2, m)
                assert np.max(np.abs(mine - oracle)) < 2e-9, (n, m)

    def test_switchover_agreement(self):
        # direct sum vs recurrence at the m = 50 handoff, relative 1e-9
        for n in (2, 4, 9, 33):
            for t in np.linspace(0.05, math.pi / 2, 7):
                d = _phi_direct(50, n, math.sin(t) ** 2)
                r = float(_phi_recurrence(50, n, math.cos(2 * t)))
                assert abs(d - r) <= 1e-9 * max(abs(d), 1e-6), (n, t)

    def test_incremental_sequence_matches(self):
        seq = _PhiSequence(5, 0.7)
        vals = [seq.step() for _ in range(150)]
        want = [phi(m, 5, 0.7) for m in range(1, 151)]
        assert max(abs(a - b) for a, b in zip(vals, want)) < 1e-12

    def test_bounded_by_one(self):
        ts = np.linspace(0, math.pi / 2, 64)
        for n in (2, 5, 16, 64):
            for m in (1, 7, 77, 500):
                assert np.max(np.abs(phi(m, n, ts))) <= 1 + 1e-9

    def test_oscillation_sign_changes(self):
        vals = [phi(m, 4, 1.0) for m in range(1, 21)]
        assert any(v < 0 for v in vals)

    def test_orthogonality_against_weyl_dims(self):
        # matrix-coefficient orthogonality ties phi and d(m, n) together:
        # int phi_m phi_m' delta / int delta = delta_mm' / d(m, n)
        n = 4
        weight = lambda t: math.sin(t) ** (2 * (n - 2)) * math.sin(2 * t)
        z = integrate.quad(weight, 0, math.pi / 2)[0]
        for m in (0, 1, 2, 3, 7):
            for mp in (m, m + 1):
                val = integrate.quad(
                    lambda t: phi(m, n, t) * phi(mp, n, t) * weight(t),
                    0, math.pi / 2, limit=200)[0] / z
                want = 1.0 / weyl_dim(m, n) if m == mp else 0.0
                assert val == pytest.approx(want, abs=1e-10)

    def test_domain_validation(self):
        with pytest.raises(ConfigurationError):
            phi(2, 4, 2.0)
        with pytest.raises(ConfigurationError):
            phi(2, 1, 0.3)


class TestCn:
    def test_strictly_decreasing_in_l(self):
        vals = [cn(4, 0.5, 0.5, l).value for l in range(1, 7)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_single_term_lower_bound(self):
        res = cn(4, 0.5, 0.5, 3)
        bound = weyl_dim(1, 4) * (phi(1, 4, 0.5) * phi(1, 4, 0.5)) ** 6
        assert res.value >= bound

    def test_deep_decay(self):
        assert cn(4, 0.5, 0.5, 50).value < 1e-12

    def test_l_zero_rejected(self):
        with pytest.raises(ConfigurationError):
            cn(4, 0.5, 0.5, 0)

    def test_divergent_sum_raises(self):
        # n = 2, l = 1: terms ~ 1/m, no contraction
        with pytest.raises(TruncationError):
            cn(2, 0.05, 0.05, 1, m_cap=20_000)

    def test_tail_bound_below_tolerance(self):
        res = cn(5, 0.4, 0.9, 2, tol=1e-9)
        assert res.tail_bound < 1e-9
        assert res.truncation_m >= 8

    def test_endpoint_validation(self):
        with pytest.raises(ConfigurationError):
            cn(4, 0.0, 0.5, 2)
        with pytest.raises(ConfigurationError):
            cn(4, 0.5, math.pi / 2, 2)


def test_cn_matches_l2_distance_of_true_product_density():
    """Plancherel identity at l = 1, against an independent construction.

    The squared L2 distance of the one-fold product law from uniform is
    computed by direct quadrature of the true (disk-measure) radial density
    relative to the Haar radial density, and must equal the spectral sum
    cn = sum d(m, n) (phi_m phi_m)^2. Ties cn, weyl_dim, phi and the
    group-level sampling model together in one identity.
    """
    n = 4
    t1, t2 = 0.5, 0.8
    a1 = math.cos(t1) * math.cos(t2)
    a2 = math.sin(t1) * math.sin(t2)
    nk = n - 1  # K-block size; w lives on the disk with (1-|w|^2)^(nk-2)

    def f_u(u):
        def integrand(beta):
            r2 = (a1 * a1 + u * u - 2 * a1 * u * math.cos(beta)) / (a2 * a2)
            return 0.0 if r2 >= 1.0 else (1.0 - r2) ** (nk - 2)
        val, _ = integrate.quad(integrand, 0, math.pi, limit=200)
        return (nk - 1) * 2 * u * val / (math.pi * a2 * a2)

    weight = lambda t: math.sin(t) ** (2 * (n - 2)) * math.sin(2 * t)
    z = integrate.quad(weight, 0, math.pi / 2)[0]

    def h_minus_one_sq(t):
        u = math.cos(t)
        haar_u = weight(t) / (z * math.sin(t))
        return (f_u(u) / haar_u - 1.0) ** 2 * weight(t) / z

    lhs, _ = integrate.quad(h_minus_one_sq, 0, math.pi / 2, limit=300)
    rhs = cn(n, t1, t2, 1, tol=1e-13).value
    assert abs(lhs - rhs) <= 1e-6 * rhs


class TestLStar:
    def test_minimality_witness(self):
        ls = l_star(4, 0.05, 0.05, 1e-4)
        assert cn(4, 0.05, 0.05, ls, tol=1e-14).value < 1e-8
        assert cn(4, 0.05, 0.05, ls - 1, tol=1e-14).value >= 1e-8

    def test_nonincreasing_in_eps(self):
        loose = l_star(6, 0.3, 0.3, 1e-1)
        tight = l_star(6, 0.3, 0.3, 1e-3)
        assert loose <= tight

    def test_finite_at_small_t(self):
        for n in (4, 16, 64):
            assert l_star(n, 0.05, 0.05, 1e-2) >= 1

    def test_bad_eps(self):
        with pytest.raises(ConfigurationError):
            l_star(4, 0.3, 0.3, 0.0)


class TestLognFit:
    def test_constant_sequence_zero_slope(self):
        # eps^2 above every cn(l=1) makes l* = 1 across the board
        fit = logn_fit([4, 5, 6, 7, 8], 0.4, 0.4, 60.0)
        assert fit.l_values == (1, 1, 1, 1, 1)
        assert fit.slope == pytest.approx(0.0, abs=1e-12)
        assert fit.spearman == 0.0

    def test_growth_tracks_log_n(self):
        fit = logn_fit([4, 6, 8, 12, 16], 0.3, 0.3, 1e-2)
        assert fit.spearman > 0.9
        assert fit.slope > 0

    def test_deterministic(self):
        a = logn_fit([4, 6, 8, 12, 16], 0.3, 0.3, 1e-2)
        b = logn_fit([4, 6, 8, 12, 16], 0.3, 0.3, 1e-2)
        assert a == b

    def test_needs_five_points(self):
        with pytest.raises(ConfigurationError):
            logn_fit([4, 6, 8], 0.3, 0.3, 1e-2)


class TestEnvelope:
    def test_report_shape_and_bound(self):
        rep = asymptotic_envelope_check(range(20, 201, 20), 6, 0.8)
        assert isinstance(rep, EnvelopeReport)
        assert len(rep.rows) == 10
        for row in rep.rows:
            assert row.abs_phi <= 1.0 + 1e-9   # the hard assertion
            assert row.envelope > 0
        assert math.isfinite(rep.fitted_constant)
        assert 0 < rep.ratio_min <= 1 <= rep.ratio_max

    def test_regime_validation(self):
        with pytest.raises(ConfigurationError):
            asymptotic_envelope_check([10], 6, 0.0)
