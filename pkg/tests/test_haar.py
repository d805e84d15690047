import math

import numpy as np
import pytest
from scipy import integrate
from scipy.stats import ks_2samp

from rank1prod import PairDescriptor, RngStream, SphericalClass, radial_u
from rank1prod.errors import ConfigurationError, TagMismatchError
from rank1prod.haar import (delta_radial_cdf, haar_group, haar_group_batch,
                            haar_K, haar_k_batch, orbit_batch, orbit_sample,
                            radial_batch, radial_density_check, run_chunked)
from rank1prod.linalg import GroupKind, group_defect
from rank1prod.pairs import Family, PAIR_NAMES, delta
from rank1prod.quaternion import qadjoint, qmatmul


def test_u1_phase_mean():
    gen = RngStream(101).generator()
    g = haar_group_batch(gen, GroupKind.U, 1, 100_000)
    mean = g[:, 0, 0].mean()
    assert abs(mean) < 3 / math.sqrt(100_000)


def test_su4_trace_moments():
    gen = RngStream(102).generator()
    g = haar_group_batch(gen, GroupKind.SU, 4, 20_000)
    tr = np.einsum("...ii->...", g)
    n = tr.size
    for part in (tr.real, tr.imag):
        assert abs(part.mean()) < 4 * part.std() / math.sqrt(n)
    sq = np.abs(tr) ** 2
    assert abs(sq.mean() - 1.0) < 4 * sq.std() / math.sqrt(n)


def test_so5_trace_mean():
    gen = RngStream(103).generator()
    g = haar_group_batch(gen, GroupKind.SO, 5, 20_000)
    tr = np.einsum("...ii->...", g)
    assert abs(tr.mean()) < 4 * tr.std() / math.sqrt(tr.size)


def test_haar_group_element_invariants():
    for kind, n in ((GroupKind.U, 3), (GroupKind.SU, 4), (GroupKind.SO, 5),
                    (GroupKind.SP, 2)):
        g = haar_group(kind, n, RngStream(7))
        assert group_defect(g.matrix, g.group) < 1e-10


def test_haar_group_rejects_noncompact():
    with pytest.raises(ConfigurationError):
        haar_group(GroupKind.SU_NC, 3, RngStream(0))


class TestHaarK:
    @pytest.mark.parametrize("name", PAIR_NAMES)
    def test_block_structure_and_invariant(self, name):
        pair = PairDescriptor.from_name(name, 3)
        k = haar_K(pair, RngStream(11))
        assert group_defect(k.matrix, pair.group_tag) < 1e-10
        # off-block entries vanish exactly by construction
        if pair.family is Family.SYMPLECTIC:
            a, b = k.matrix.pair
            assert np.all(a[0, 1:] == 0) and np.all(a[1:, 0] == 0)
            assert np.all(b[0, 1:] == 0) and np.all(b[1:, 0] == 0)
        else:
            arr = k.matrix.array
            assert np.all(arr[0, 1:] == 0) and np.all(arr[1:, 0] == 0)

    def test_unitary_determinant_is_one(self):
        pair = PairDescriptor.from_name("su-compact", 4)
        gen = RngStream(12).generator()
        k = haar_k_batch(pair, gen, 256)
        dets = np.linalg.det(k)
        assert np.max(np.abs(dets - 1.0)) < 1e-12

    def test_block_phase_uniform(self):
        # arg of B11/|B11| should be uniform on the circle (invariance oracle)
        pair = PairDescriptor.from_name("su-compact", 3)
        gen = RngStream(13).generator()
        k = haar_k_batch(pair, gen, 30_000)
        theta = np.angle(k[:, 1, 1])
        theta.sort()
        i = np.arange(theta.size)
        f = (theta + math.pi) / (2 * math.pi)
        ks = max(np.max(f - i / theta.size), np.max((i + 1) / theta.size - f))
        assert ks < 0.01


class TestOrbit:
    def test_t_zero_radial_one(self):
        pair = PairDescriptor.from_name("su-compact", 3)
        g = orbit_sample(SphericalClass(pair, 0.0), RngStream(21))
        assert radial_u(pair, g) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("name", PAIR_NAMES)
    def test_radial_exact_on_every_draw(self, name):
        pair = PairDescriptor.from_name(name, 3)
        t = 0.7
        want = math.cos(t) if pair.is_compact else math.cosh(t)
        gen = RngStream(22).generator()
        mats = orbit_batch(SphericalClass(pair, t), gen, 512)
        u = radial_batch(pair, mats)
        assert np.max(np.abs(u - want)) < 1e-10

    def test_invariants_hold_in_bulk(self):
        # closure under the group law: unitarity/J-isometry at 1e4 draws
        pair = PairDescriptor.from_name("su-compact", 3)
        gen = RngStream(23).generator()
        mats = orbit_batch(SphericalClass(pair, 0.9), gen, 10_000)
        gram = np.swapaxes(mats, -1, -2).conj() @ mats
        defect = np.abs(gram - np.eye(4)).max()
        assert defect < 1e-10
        assert np.max(np.abs(np.linalg.det(mats) - 1.0)) < 1e-10

        pair_nc = PairDescriptor.from_name("sp-noncompact", 2)
        mats = orbit_batch(SphericalClass(pair_nc, 0.8), gen, 2_000)
        sig = np.ones(3)
        sig[0] = -1.0
        adj = qadjoint(mats)
        ga, gb = qmatmul((adj[0] * sig[None, None, :], adj[1] * sig[None, None, :]), mats)
        assert np.abs(ga - np.diag(sig)).max() < 1e-9
        assert np.abs(gb).max() < 1e-9


class TestRadialDensityCheck:
    def test_su3(self):
        pair = PairDescriptor.from_name("su-compact", 2)
        ks = radial_density_check(GroupKind.SU, 3, pair, 50_000, RngStream(31))
        assert ks < 0.01

    def test_so4(self):
        pair = PairDescriptor.from_name("so-compact", 3)
        ks = radial_density_check(GroupKind.SO, 4, pair, 50_000, RngStream(32))
        assert ks < 0.01

    def test_sp2(self):
        pair = PairDescriptor.from_name("sp-compact", 1)
        ks = radial_density_check(GroupKind.SP, 2, pair, 50_000, RngStream(33))
        assert ks < 0.01

    def test_negative_control_override(self):
        pair = PairDescriptor.from_name("so-compact", 3, m_alpha_override=1)
        ks = radial_density_check(GroupKind.SO, 4, pair, 50_000, RngStream(32))
        assert ks > 0.03

    def test_mismatched_group_rejected(self):
        pair = PairDescriptor.from_name("so-compact", 3)
        with pytest.raises(TagMismatchError):
            radial_density_check(GroupKind.SU, 4, pair, 100, RngStream(0))
        with pytest.raises(ConfigurationError):
            radial_density_check(GroupKind.SU_NC, 4,
                                 PairDescriptor.from_name("su-noncompact", 3),
                                 100, RngStream(0))

    def test_delta_cdf_matches_quadrature(self):
        for name in ("su-compact", "so-compact", "sp-compact"):
            pair = PairDescriptor.from_name(name, 4)
            hi = pair.radial_range
            z, _ = integrate.quad(lambda s: delta(pair, s), 0, hi)
            for t in np.linspace(0.2, hi - 0.1, 5):
                part, _ = integrate.quad(lambda s: delta(pair, s), 0, t)
                assert float(delta_radial_cdf(pair, t)) == pytest.approx(
                    part / z, abs=1e-9)


def test_translation_invariance():
    # radial_u(g) and radial_u(v g) agree in distribution over Haar g
    gen = RngStream(41).generator()
    pair = PairDescriptor.from_name("su-compact", 2)
    g = haar_group_batch(gen, GroupKind.SU, 3, 50_000)
    v = haar_group_batch(RngStream(42).generator(), GroupKind.SU, 3, 1)[0]
    u_plain = np.abs(g[:, 0, 0])
    u_moved = np.abs((v @ g)[:, 0, 0])
    assert ks_2samp(u_plain, u_moved).statistic < 0.01


def test_run_chunked_thread_invariance():
    def worker(gen, m):
        return gen.random(m)

    a = run_chunked(200_000, RngStream(5), worker, threads=1)
    b = run_chunked(200_000, RngStream(5), worker, threads=4)
    assert np.array_equal(a, b)
