import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from siciak_support.poly import (HomogeneousPolynomial, bilinear, enumerate_multiindices,
                                 eval_poly, linear_form_power, monomial_matrix, monomial_vector,
                                 multinomial_weights, norm, num_monomials)


def test_multiindices_small_cases():
    assert enumerate_multiindices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(enumerate_multiindices(3, 2)) == 6
    assert enumerate_multiindices(1, 5) == [(5,)]
    assert enumerate_multiindices(3, 0) == [(0, 0, 0)]


def test_multiindices_reject_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_multiindices(0, 2)
    with pytest.raises(ValueError):
        enumerate_multiindices(2, -1)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("k", range(0, 13))
def test_multiindices_are_a_bijection(n, k):
    idx = enumerate_multiindices(n, k)
    assert len(idx) == math.comb(n + k - 1, k) == num_monomials(n, k)
    assert len(set(idx)) == len(idx)
    assert all(len(a) == n and sum(a) == k and min(a) >= 0 for a in idx)
    # graded-lexicographic: strictly descending within the degree
    assert idx == sorted(idx, reverse=True)


def test_eval_examples():
    p = HomogeneousPolynomial.from_terms(2, 2, {(1, 1): 1})
    assert eval_poly(p, [2, 3]) == pytest.approx(6)
    q = HomogeneousPolynomial.from_terms(2, 2, {(2, 0): 1, (0, 2): 1})
    assert abs(eval_poly(q, [1, 1j])) < 1e-15


def test_eval_dimension_mismatch():
    p = HomogeneousPolynomial.zero(2, 3)
    with pytest.raises(ValueError):
        eval_poly(p, [1, 2, 3])


def test_monomial_vector_examples():
    np.testing.assert_allclose(monomial_vector([1, 1], 2), [1, 1, 1])
    np.testing.assert_allclose(monomial_vector([1, 0], 3), [1, 0, 0, 0])
    np.testing.assert_allclose(monomial_vector([1, 1], 2, scaled=True), [1, math.sqrt(2), 1])


def test_multinomial_weights():
    np.testing.assert_allclose(multinomial_weights(2, 2), [1, 2, 1])
    np.testing.assert_allclose(multinomial_weights(3, 3).sum(), 27)


def test_linear_form_power_matches_direct_power(rng):
    a = rng.normal(size=3) + 1j * rng.normal(size=3)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    p = linear_form_power(a, 5)
    assert p(z) == pytest.approx(bilinear(a, z) ** 5, rel=1e-12)


def test_bilinear_has_no_conjugation():
    assert bilinear([1j, 0], [1j, 0]) == pytest.approx(-1)
    assert norm([3, 4j]) == pytest.approx(5)


def test_scaled_constructor_round_trip(rng):
    c = rng.normal(size=6) + 1j * rng.normal(size=6)
    p = HomogeneousPolynomial.from_scaled(3, 2, c)
    np.testing.assert_allclose(p.scaled_coefficients(), c, rtol=1e-14)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert p(z) == pytest.approx(monomial_vector(z, 2, scaled=True) @ c, rel=1e-13)


def test_json_round_trip(rng):
    p = HomogeneousPolynomial(2, 3, rng.normal(size=4) + 1j * rng.normal(size=4))
    d = json.loads(p.to_json())
    assert d["dimension"] == 2 and d["degree"] == 3
    assert all(sum(entry[0]) == 3 for entry in d["coefficients"])
    q = HomogeneousPolynomial.from_json(p.to_json())
    np.testing.assert_array_equal(p.coefficients, q.coefficients)


def test_coefficients_are_read_only():
    p = HomogeneousPolynomial.zero(2, 2)
    with pytest.raises(ValueError):
        p.coefficients[0] = 1


def test_wrong_coefficient_count():
    with pytest.raises(ValueError):
        HomogeneousPolynomial(2, 2, [1, 2])


def test_from_terms_rejects_wrong_order():
    with pytest.raises(ValueError):
        HomogeneousPolynomial.from_terms(2, 2, {(1, 0): 1})


def test_arithmetic():
    p = HomogeneousPolynomial.from_terms(2, 1, {(1, 0): 1})
    q = HomogeneousPolynomial.from_terms(2, 1, {(0, 1): 2})
    assert (p + q)([1, 1]) == pytest.approx(3)
    assert (p * 2j)([3, 0]) == pytest.approx(6j)


complex_coord = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@given(n=st.integers(1, 4), k=st.integers(0, 7), seed=st.integers(0, 2**32 - 1),
       t=st.complex_numbers(min_magnitude=0.05, max_magnitude=10, allow_nan=False,
                            allow_infinity=False))
def test_homogeneity(n, k, seed, t):
    r = np.random.default_rng(seed)
    p = HomogeneousPolynomial(n, k, r.normal(size=num_monomials(n, k))
                              + 1j * r.normal(size=num_monomials(n, k)))
    z = r.normal(size=n) + 1j * r.normal(size=n)
    lhs = p(t * z)
    rhs = t ** k * p(z)
    scale = np.sum(np.abs(p.coefficients)) * (abs(t) * np.max(np.abs(z))) ** k
    assert abs(lhs - rhs) <= 1e-12 * max(scale, 1e-300)


@given(n=st.integers(1, 4), k=st.integers(0, 8), seed=st.integers(0, 2**32 - 1),
       scaled=st.booleans())
def test_monomial_vector_reproduces_evaluation(n, k, seed, scaled):
    r = np.random.default_rng(seed)
    N = num_monomials(n, k)
    c = r.normal(size=N) + 1j * r.normal(size=N)
    p = HomogeneousPolynomial.from_scaled(n, k, c) if scaled else HomogeneousPolynomial(n, k, c)
    z = r.normal(size=n) + 1j * r.normal(size=n)
    v = monomial_vector(z, k, scaled=scaled) @ c
    scale = np.sum(np.abs(monomial_vector(z, k, scaled=scaled)) * np.abs(c))
    assert abs(v - p(z)) <= 1e-13 * max(scale, 1e-300)


def test_monomial_matrix_matches_rows(rng):
    pts = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    M = monomial_matrix(pts, 4)
    for j in range(5):
        np.testing.assert_allclose(M[j], monomial_vector(pts[j], 4), rtol=1e-14)
