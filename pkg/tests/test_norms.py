import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from siciak_support.norms import (IntervalSupportFn, ab_decompose, cross_norm_euclidean,
                                  cross_norm_general, cross_norm_via_distance,
                                  cross_norm_via_real_parts, dist_to_CRn, interval_support)


def test_cross_norm_examples():
    assert cross_norm_euclidean([3, 4]) == pytest.approx(5, abs=1e-14)
    assert cross_norm_euclidean([1, 1j]) == pytest.approx(2, abs=1e-14)
    assert cross_norm_euclidean([2, 1j]) == pytest.approx(3, abs=1e-14)


def test_ab_examples():
    ab = ab_decompose([2, 1j])
    assert np.linalg.norm(ab.a) == pytest.approx(2)
    assert np.linalg.norm(ab.b) == pytest.approx(1)
    real = ab_decompose([0.3, -1.2])
    assert real.theta == 0 and np.all(real.b == 0)
    np.testing.assert_allclose(real.a, [0.3, -1.2])
    iso = ab_decompose([1, 1j])
    assert iso.theta == 0
    assert np.linalg.norm(iso.a) == pytest.approx(1) and np.linalg.norm(iso.b) == pytest.approx(1)


def test_dist_examples():
    assert dist_to_CRn([1.0, -2.0]) == 0
    assert dist_to_CRn([1, 1j]) == pytest.approx(1)
    assert dist_to_CRn([2, 1j]) == pytest.approx(1)


def test_interval_support_examples():
    H = IntervalSupportFn(-1, 2)
    assert interval_support(H, -3) == 3
    assert interval_support(H, 1) == 2
    assert IntervalSupportFn(0, 0)(5.0) == 0
    with pytest.raises(ValueError):
        IntervalSupportFn(1, 0)


def test_cross_norm_general_examples():
    euclid = np.linalg.norm
    b = cross_norm_general(euclid, [2, 1j])
    assert b.value == pytest.approx(3, abs=1e-6)
    assert "upper bound" in b.label
    sup = lambda x: float(np.max(np.abs(x)))  # noqa: E731
    assert cross_norm_general(sup, [0.5, -2.0]).value == 2.0
    v = cross_norm_general(sup, [1, 1j]).value
    assert math.sqrt(2) - 1e-12 <= v <= 2 + 1e-12


def test_cross_norm_general_rejects_nonfinite_norm():
    with pytest.raises(ValueError):
        cross_norm_general(lambda x: float("nan"), [1, 1j])


def _points(n):
    return st.lists(st.complex_numbers(max_magnitude=100, allow_nan=False, allow_infinity=False),
                    min_size=n, max_size=n)


@given(st.integers(1, 4).flatmap(_points))
def test_bracket_and_ab_identity(z):
    z = np.array(z)
    r = float(np.linalg.norm(z))
    c = cross_norm_euclidean(z)
    assert r - 1e-12 * (1 + r) <= c <= math.sqrt(2) * r + 1e-12 * (1 + r)
    ab = ab_decompose(z)
    scale = max(r, 1e-300)
    assert abs(ab.a @ ab.b) <= 1e-10 * scale ** 2
    assert np.linalg.norm(ab.b) <= np.linalg.norm(ab.a) + 1e-12 * scale
    np.testing.assert_allclose(ab.reconstruct(), z, atol=1e-10 * scale)
    assert abs(np.linalg.norm(ab.a) + np.linalg.norm(ab.b) - c) <= 1e-10 * scale


@given(st.integers(1, 4).flatmap(_points),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_absolute_homogeneity(z, t):
    z = np.array(z)
    assert cross_norm_euclidean(t * z) == pytest.approx(abs(t) * cross_norm_euclidean(z),
                                                        rel=1e-10, abs=1e-12)


def test_three_forms_agree(rng):
    for n in (2, 3):
        z = rng.normal(size=(1000, n)) + 1j * rng.normal(size=(1000, n))
        for p in z:
            c = cross_norm_euclidean(p)
            assert abs(c - cross_norm_via_real_parts(p)) <= 1e-10 * c
            assert abs(c - cross_norm_via_distance(p)) <= 1e-10 * c
