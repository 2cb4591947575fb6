import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siciak_support.fields import (ScalarField, bump_sum, gaussian, random_field, smoothed_ball,
                                   unit_vector, zero_field)
from siciak_support.radon import (LineTransform, ProfileGrid, RadonQuadrature, detect_support,
                                  fourier_slice_check, fourier_transform, line_laplace,
                                  line_series_data, profile_l1, radon_forward, radon_profile,
                                  taylor_on_line, write_profile_csv, write_sinogram_csv)

G2 = gaussian([0.0, 0.0])
BALL = smoothed_ball([0.0, 0.0], 1.0, 0.1)


def test_gaussian_profile_closed_form(rng):
    p = np.linspace(-4, 4, 41)
    for _ in range(3):
        om = unit_vector(rng.uniform(0, 2 * math.pi))
        np.testing.assert_allclose(radon_forward(G2, om, p), math.sqrt(math.pi) * np.exp(-p * p),
                                   atol=1e-8)


def test_gaussian_rotational_symmetry(rng):
    p = np.linspace(-3, 3, 13)
    a = radon_forward(G2, unit_vector(rng.uniform(0, 7)), p)
    b = radon_forward(G2, unit_vector(rng.uniform(0, 7)), p)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_ball_vanishes_outside_slab():
    for p in (1.11, -1.2, 3.0):
        assert abs(radon_forward(BALL, [1.0, 0.0], p)) < 1e-10


def test_ball_chord_length_inside_plateau():
    # plateau radius 0.9, so |p| small gives at least the plateau chord 2 sqrt(0.81 - p^2)
    v = radon_forward(BALL, [0.0, 1.0], 0.3)
    assert v > 2 * math.sqrt(0.81 - 0.09)
    assert v < 2 * math.sqrt(1 - 0.09)


def test_patch_method_agrees():
    f = bump_sum([[0.2, -0.1], [-0.3, 0.4]], [0.6, 0.5], [1.0, -0.7])
    om = unit_vector(0.7)
    p = np.linspace(-1, 1, 9)
    np.testing.assert_allclose(radon_forward(f, om, p, method="patch"),
                               radon_forward(f, om, p), atol=1e-9)


def test_quadrature_convergence():
    om = unit_vector(1.1)
    p = np.linspace(-3, 3, 25)
    coarse = radon_forward(G2, om, p)
    fine = radon_forward(G2, om, p, RadonQuadrature(nodes=128, line_nodes=64, h_base=0.25))
    assert np.max(np.abs(coarse - fine)) < 1e-9


def test_direction_must_be_unit():
    with pytest.raises(ValueError):
        radon_forward(G2, [1.0, 1.0], 0.0)


def test_profile_examples(rng):
    prof = radon_profile(G2, unit_vector(0.4), ProfileGrid(h=0.05))
    np.testing.assert_allclose(prof.values, prof.values[::-1], atol=1e-9)
    assert prof.p_max >= G2.R_eff and prof.h == pytest.approx(0.05)
    zero = radon_profile(zero_field(2), [1.0, 0.0], ProfileGrid(h=0.1, p_max=1.0))
    assert np.all(zero.values == 0)


def test_translation_shifts_profile():
    c = np.array([0.5, -0.25])
    om = unit_vector(0.3)
    grid = ProfileGrid(h=0.01, p_max=3.0)
    base = radon_profile(BALL, om, grid)
    moved = radon_profile(BALL.translated(c), om, grid)
    shift = float(c @ om)
    np.testing.assert_allclose(moved.values, np.interp(base.p - shift, base.p, base.values),
                               atol=0.05 * base.values.max())
    a0, a1 = detect_support(base), detect_support(moved)
    assert a1.a - a0.a == pytest.approx(shift, abs=2 * grid.h)


def test_detect_support_examples():
    grid = ProfileGrid(h=0.01)
    iv = detect_support(radon_profile(BALL, [1.0, 0.0], grid), 1e-6)
    assert iv.a <= -1 and iv.b >= 1
    assert iv.a >= -1 - 2 * grid.h and iv.b <= 1 + 2 * grid.h
    c = np.array([0.4, 0.3])
    om = unit_vector(2.0)
    iv = detect_support(radon_profile(BALL.translated(c), om, grid), 1e-6)
    assert iv.a == pytest.approx(c @ om - 1, abs=2 * grid.h)
    assert iv.b == pytest.approx(c @ om + 1, abs=2 * grid.h)
    empty = detect_support(radon_profile(zero_field(2), [0.0, 1.0], ProfileGrid(0.1, 1.0)))
    assert empty.empty and empty.sigma == 0
    with pytest.raises(ValueError):
        detect_support(radon_profile(BALL, [1.0, 0.0], grid), 1.5)


@settings(max_examples=20)
@given(seed=st.integers(0, 2**32 - 1), e1=st.floats(1e-9, 0.5), e2=st.floats(1e-9, 0.5))
def test_supports_are_nested(seed, e1, e2):
    r = np.random.default_rng(seed)
    f = random_field(r)
    prof = radon_profile(f, unit_vector(r.uniform(0, 7)), ProfileGrid(h=0.02))
    lo, hi = sorted((e1, e2))
    wide, narrow = detect_support(prof, lo), detect_support(prof, hi)
    assert wide.a <= narrow.a and narrow.b <= wide.b


def test_slice_gaussian_closed_form(rng):
    for s in (0.0, 1.0, 3.5, 7.0):
        chk = fourier_slice_check(G2, unit_vector(rng.uniform(0, 7)), s)
        target = math.pi * math.exp(-s * s / 4)
        assert abs(chk.lhs - target) < 1e-6 and abs(chk.rhs - target) < 1e-6
        assert chk.discrepancy < 1e-6


def test_slice_zero_frequency_is_mass():
    f = bump_sum([[0.1, 0.2]], [0.7], [2.0])
    chk = fourier_slice_check(f, [1.0, 0.0], 0.0)
    mass = fourier_transform(f, [0.0, 0.0])
    assert chk.lhs == pytest.approx(mass, abs=1e-9)
    assert abs(chk.lhs.imag) < 1e-12


def test_slice_odd_field_vanishes_at_zero():
    f = bump_sum([[0.5, 0.0], [-0.5, 0.0]], [0.4, 0.4], [1.0, -1.0])
    chk = fourier_slice_check(f, unit_vector(0.3), 0.0)
    assert abs(chk.lhs) < 1e-12 and abs(chk.rhs) < 1e-12


@settings(max_examples=20)
@given(seed=st.integers(0, 2**32 - 1), s=st.floats(-10, 10), n=st.sampled_from([2, 3]))
def test_slice_property(seed, s, n):
    r = np.random.default_rng(seed)
    f = random_field(r, n)
    om = r.normal(size=n)
    om /= np.linalg.norm(om)
    assert fourier_slice_check(f, om, s).discrepancy < 1e-5


def test_gaussian_3d():
    g = gaussian([0.0, 0.0, 0.0])
    om = np.array([0.0, 0.6, 0.8])
    assert radon_forward(g, om, 0.5) == pytest.approx(math.pi * math.exp(-0.25), abs=1e-8)
    assert fourier_transform(g, 2 * om) == pytest.approx(math.pi ** 1.5 * math.exp(-1), abs=1e-8)


def test_line_laplace_matches_slice():
    om = unit_vector(0.9)
    for s in (0.5, 4.0):
        assert line_laplace(BALL, om, s).value == pytest.approx(
            fourier_slice_check(BALL, om, s).lhs, abs=1e-8)


def test_line_laplace_growth_bound():
    om = np.array([1.0, 0.0])
    l1 = profile_l1(BALL, om)
    for t in (1.0, 5.0, 20.0):
        v = line_laplace(BALL, om, 1j * t)
        assert not v.overflow
        assert abs(v.value) <= l1 * math.exp(t * 1.1)


def test_line_laplace_overflow_and_zero():
    v = line_laplace(BALL, [1.0, 0.0], 1000j)
    assert v.overflow
    assert line_laplace(zero_field(2), [1.0, 0.0], 3.0 + 2j).value == 0


@settings(max_examples=20)
@given(seed=st.integers(0, 2**32 - 1), zr=st.floats(-20, 20), zi=st.floats(-20, 20))
def test_eq_one_three_bound(seed, zr, zi):
    r = np.random.default_rng(seed)
    f = random_field(r)
    while not f.compact:
        f = random_field(r)
    om = unit_vector(r.uniform(0, 7))
    z = complex(zr, zi)
    iv = detect_support(radon_profile(f, om, ProfileGrid(h=0.01)))
    v = line_laplace(f, om, z)
    assert abs(v.value) <= profile_l1(f, om) * math.exp(iv.sigma * abs(z)) * (1 + 1e-9) + 1e-12


def test_line_transform_range_check():
    lt = LineTransform(BALL, [1.0, 0.0], 2.0)
    with pytest.raises(ValueError):
        lt(3.0)


def test_taylor_examples():
    c = taylor_on_line(G2, [1.0, 0.0], 4)
    assert c[0] == pytest.approx(math.pi, abs=1e-10)
    assert abs(c[1]) < 1e-12
    ball = BALL.translated([0.3, 0.0])
    om = np.array([1.0, 0.0])
    c = taylor_on_line(ball, om, 2)
    fine = taylor_on_line(ball, om, 2, RadonQuadrature(nodes=128, line_nodes=64, h_base=0.25))
    np.testing.assert_allclose(c, fine, atol=1e-10)
    # first moment of a translated body is its mass times the shift
    assert c[1] == pytest.approx(-1j * 0.3 * c[0], abs=1e-9)


def test_taylor_matches_laplace_series():
    om = unit_vector(0.2)
    f = bump_sum([[0.3, 0.1]], [0.5], [1.0])
    c = taylor_on_line(f, om, 30)
    z = 0.7 - 0.4j
    # different node sets: agreement is limited by the quadrature of the bump edge
    assert np.polyval(c[::-1], z) == pytest.approx(line_laplace(f, om, z).value, abs=1e-9)


def test_line_series_data_feeds_extension():
    dirs = np.array([[1.0, 0.0], [0.0, 1.0], [math.sqrt(0.5), math.sqrt(0.5)]])
    data = line_series_data(BALL, dirs, 3, grid=ProfileGrid(h=0.01))
    assert data.coefficients.shape == (3, 4)
    assert np.all(data.sigma >= 1.0) and np.all(data.sigma <= 1.02)
    assert data.C == pytest.approx(profile_l1(BALL, [1.0, 0.0]), rel=1e-8)


def test_field_validation():
    with pytest.raises(ValueError):
        ScalarField("cube", [[0, 0]], 1.0, 1.0)
    with pytest.raises(ValueError):
        ScalarField("gaussian", [[0, 0]], -1.0, 1.0)
    with pytest.raises(ValueError):
        smoothed_ball([0, 0], 1.0, 2.0)
    with pytest.raises(ValueError):
        ScalarField("gaussian", [[0, 0, 0, 0]], 1.0, 1.0)


def test_field_values_and_dilation():
    assert BALL([0.0, 0.0]) == 1.0
    assert BALL([0.95, 0.0]) == pytest.approx(0.5)
    assert BALL([1.0, 0.0]) == 0.0
    big = BALL.dilated(2.0)
    assert big([1.9, 0.0]) == pytest.approx(0.5)
    assert ScalarField.from_dict(BALL.to_dict()).to_dict() == BALL.to_dict()


def test_csv_exports(tmp_path):
    prof = radon_profile(BALL, [1.0, 0.0], ProfileGrid(h=0.1))
    write_profile_csv(prof, tmp_path / "p.csv")
    rows = (tmp_path / "p.csv").read_text().splitlines()
    assert rows[0] == "p,value" and len(rows) == prof.p.size + 1
    write_sinogram_csv([prof, prof], tmp_path / "s.csv")
    rows = (tmp_path / "s.csv").read_text().splitlines()
    assert rows[0] == "omega_index,omega1,omega2,p,value" and len(rows) == 2 * prof.p.size + 1


@settings(max_examples=20)
@given(cx=st.floats(-1, 1), cy=st.floats(-1, 1), R=st.floats(0.3, 1.5),
       frac=st.floats(0.1, 1.0), t=st.floats(0, 2 * math.pi))
def test_tail_mode_covers_support(cx, cy, R, frac, t):
    field = smoothed_ball([cx, cy], R, frac * R)
    om = np.array([math.cos(t), math.sin(t)])
    om /= np.linalg.norm(om)
    prof = radon_profile(field, om, ProfileGrid(h=0.01))
    c = cx * om[0] + cy * om[1]
    tail = detect_support(prof, extend_tail=True)
    thr = detect_support(prof, 1e-6)
    assert tail.a <= c - R and tail.b >= c + R
    assert tail.b - tail.a <= 2 * R + 4 * 0.01
    assert tail.a <= thr.a and tail.b >= thr.b
    assert tail.threshold == 0.0
