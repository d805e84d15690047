import math

import numpy as np

from rank1prod.rng import RngStream, complex_normals, normals


def test_identical_streams_reproduce_bitwise():
    a = RngStream(123, 45).generator().random(1000)
    b = RngStream(123, 45).generator().random(1000)
    assert np.array_equal(a, b)


def test_children_are_distinct_and_stable():
    base = RngStream(7)
    ids = {base.child(i).stream_id for i in range(10_000)}
    assert len(ids) == 10_000
    assert base.child(3) == base.child(3)
    assert base.child(3) != base.child(4)


def test_box_muller_normals_shape_and_moments():
    gen = RngStream(11).generator()
    z = normals(gen, (100_000,))
    assert z.shape == (100_000,)
    assert abs(z.mean()) < 4 / math.sqrt(z.size)
    assert abs(z.std() - 1.0) < 0.02
    assert np.isfinite(z).all()


def test_normals_odd_count_and_nd_shape():
    gen = RngStream(12).generator()
    z = normals(gen, (7, 3))
    assert z.shape == (7, 3)
    z2 = normals(RngStream(12).generator(), 21)
    assert np.array_equal(z.ravel(), z2)


def test_complex_normals_variance():
    z = complex_normals(RngStream(13).generator(), 50_000)
    # E|z|^2 = 2 for unit-variance real and imaginary parts
    assert abs((np.abs(z) ** 2).mean() - 2.0) < 0.05
