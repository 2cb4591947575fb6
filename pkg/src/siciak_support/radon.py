"""Radon transform, support intervals and Fourier-Laplace data along lines.

Fourier convention: u_hat(xi) = int exp(-i <x, xi>) u(x) dx.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .extension import LineSeriesData
from .fields import ScalarField


@dataclass(frozen=True)
class RadonQuadrature:
    """Gauss-Legendre panel rules.

    ``nodes`` is used on hyperplanes and radial integrals, ``line_nodes`` on
    integrals over p; panels are at most ``h_base`` wide.
    """

    nodes: int = 64
    line_nodes: int = 32
    h_base: float = 0.5

    def __post_init__(self):
        if self.nodes < 2 or self.line_nodes < 2 or self.h_base <= 0:
            raise ValueError("need at least 2 nodes per panel and a positive panel width")


@dataclass(frozen=True)
class ProfileGrid:
    h: float = 0.005
    p_max: float | None = None  # defaults to R_eff rounded up to the grid


@lru_cache(maxsize=None)
def _gl(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _unit(omega, n: int) -> np.ndarray:
    om = np.asarray(omega, dtype=float).reshape(-1)
    if om.size != n:
        raise ValueError(f"direction must have {n} components")
    if abs(np.linalg.norm(om) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    return om


def _panel_nodes(lo, hi, sub: int, nodes: int):
    """Nodes and weights of ``sub`` equal GL panels on each [lo_i, hi_i]."""
    x, w = _gl(nodes)
    lo = np.asarray(lo, dtype=float)[:, None]
    width = (np.asarray(hi, dtype=float) - lo[:, 0])[:, None] / sub
    k = np.repeat(np.arange(sub), nodes)[None, :]
    xx = np.tile(x, sub)[None, :]
    t = lo + width * (k + 0.5 * (xx + 1.0))
    wt = 0.5 * width * np.tile(w, sub)[None, :]
    return t, wt


def _hyperplane_radial(field: ScalarField, j: int, d: np.ndarray, qc: RadonQuadrature,
                       nodes: int | None = None) -> np.ndarray:
    """int over R^(n-1) of g_j(sqrt(d^2 + |y|^2)) dy for each offset d."""
    nodes = nodes or qc.nodes
    n = field.dimension
    reach = float(field.reach()[j])
    d2 = d * d
    radii = [b for b in field.radial_breaks(j) if b < reach] + [reach]
    sub = max(1, math.ceil(reach / qc.h_base))
    total = np.zeros(d.shape)
    lo = np.zeros(d.shape)
    for rb in radii:
        hi = np.sqrt(np.maximum(rb * rb - d2, 0.0))
        t, wt = _panel_nodes(lo, hi, sub, nodes)
        g = field.radial(j, np.sqrt(d2[:, None] + t * t))
        if n == 2:
            total += 2.0 * np.sum(wt * g, axis=1)
        else:
            total += 2.0 * math.pi * np.sum(wt * g * t, axis=1)
        lo = hi
    return total


def radon_forward(field: ScalarField, omega, p, qc: RadonQuadrature = RadonQuadrature(),
                  method: str = "radial"):
    """Ru(omega, p), the integral of u over the hyperplane <x, omega> = p.

    ``method="radial"`` integrates each radial component in the distance to
    its center; ``method="patch"`` runs tensor Gauss-Legendre over the
    hyperplane patch of radius R_eff around p omega (slow, for cross-checks).
    """
    om = _unit(omega, field.dimension)
    p_arr = np.atleast_1d(np.asarray(p, dtype=float))
    if method == "radial":
        out = np.zeros(p_arr.shape)
        for j in range(field.components):
            if field.amplitudes[j] == 0:
                continue
            out += _hyperplane_radial(field, j, p_arr - field.centers[j] @ om, qc)
    elif method == "patch":
        out = np.array([_patch(field, om, float(pi), qc) for pi in p_arr])
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out[0]) if np.ndim(p) == 0 else out


def _patch(field: ScalarField, om: np.ndarray, p: float, qc: RadonQuadrature) -> float:
    R = field.R_eff
    if R == 0:
        return 0.0
    sub = max(1, math.ceil(2 * R / qc.h_base))
    t, wt = _panel_nodes([-R], [R], sub, qc.nodes)
    t, wt = t[0], wt[0]
    if field.dimension == 2:
        perp = np.array([-om[1], om[0]])
        return float(wt @ field(p * om + t[:, None] * perp))
    # orthonormal frame of the plane
    basis = np.linalg.svd(om[None, :])[2][1:]
    total = 0.0
    for ti, wi in zip(t, wt):
        x = p * om + ti * basis[0] + t[:, None] * basis[1]
        total += wi * float(wt @ field(x))
    return total


@dataclass
class RadonProfile:
    omega: np.ndarray
    p: np.ndarray
    values: np.ndarray

    @property
    def h(self) -> float:
        return float(self.p[1] - self.p[0]) if self.p.size > 1 else 0.0

    @property
    def p_max(self) -> float:
        return float(self.p[-1])

    def l1(self) -> float:
        return float(np.trapezoid(np.abs(self.values), self.p))


def radon_profile(field: ScalarField, omega, grid: ProfileGrid = ProfileGrid(),
                  qc: RadonQuadrature = RadonQuadrature()) -> RadonProfile:
    om = _unit(omega, field.dimension)
    P = grid.p_max if grid.p_max is not None else field.R_eff
    P = max(P, field.R_eff)
    cells = max(1, math.ceil(P / grid.h - 1e-9))
    p = grid.h * np.arange(-cells, cells + 1)
    return RadonProfile(om, p, radon_forward(field, om, p, qc))


@dataclass(frozen=True)
class SupportInterval:
    a: float
    b: float
    threshold: float
    empty: bool = False

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError("support interval endpoints out of order")

    @property
    def sigma(self) -> float:
        """max(-a, b): the exponential type of the line restriction."""
        return max(-self.a, self.b, 0.0) if not self.empty else 0.0


def detect_support(profile: RadonProfile, eps_rel: float = 1e-6,
                   extend_tail: bool = False) -> SupportInterval:
    """Smallest grid interval holding all |Ru| > eps_rel max|Ru|, widened by a cell.

    The thresholded interval sits inside the true support by the width of
    the sub-threshold tail, which one cell need not cover.  ``extend_tail``
    widens to the outermost nonzero sample instead; for compactly supported
    fields this is the grid hull of the numerically nonzero set, which for
    exp(1 - 1/(1 - q)) bumps ends about 7e-4 R inside the support.
    """
    if not 0 < eps_rel < 1:
        raise ValueError("eps_rel must lie in (0, 1)")
    mags = np.abs(profile.values)
    peak = float(mags.max()) if mags.size else 0.0
    if peak == 0.0:
        return SupportInterval(0.0, 0.0, 0.0, empty=True)
    thr = 0.0 if extend_tail else eps_rel * peak
    idx = np.flatnonzero(mags > thr)
    h = profile.h
    return SupportInterval(float(profile.p[idx[0]] - h), float(profile.p[idx[-1]] + h), thr)


def _p_breaks(field: ScalarField, om: np.ndarray) -> list[float]:
    out = []
    reach = field.reach()
    for j in range(field.components):
        if field.amplitudes[j] == 0:
            continue
        c = float(field.centers[j] @ om)
        for r in field.radial_breaks(j) + [float(reach[j])]:
            out += [c - r, c + r]
    return out


def _line_nodes(field: ScalarField, om: np.ndarray, zmag: float, qc: RadonQuadrature):
    """Panel nodes on the hull of component reaches along omega, with panel
    width at most min(h_base, 1 / (4 |z|))."""
    lo, hi = field.support_radius_bound(om)
    if hi <= lo:
        return np.zeros(0), np.zeros(0)
    width = qc.h_base if zmag == 0 else min(qc.h_base, 1.0 / (4.0 * zmag))
    cuts = np.unique(np.clip([lo, hi] + _p_breaks(field, om), lo, hi))
    ts, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 0:
            continue
        t, w = _panel_nodes([a], [b], max(1, math.ceil((b - a) / width)), qc.line_nodes)
        ts.append(t[0])
        ws.append(w[0])
    return np.concatenate(ts), np.concatenate(ws)


class LineTransform:
    """z -> int exp(-i z p) Ru(omega, p) dp for all |z| <= z_max on one node set.

    Ru is evaluated once on panels of width at most min(h_base, 1 / (4 z_max)).
    """

    def __init__(self, field: ScalarField, omega, z_max: float = 0.0,
                 qc: RadonQuadrature = RadonQuadrature()):
        self.omega = _unit(omega, field.dimension)
        self.z_max = float(z_max)
        self.interval = field.support_radius_bound(self.omega)
        self.p, self.w = _line_nodes(field, self.omega, self.z_max, qc)
        self.wr = self.w * radon_forward(field, self.omega, self.p, qc) if self.p.size else self.p

    def overflows(self, z: complex) -> bool:
        lo, hi = self.interval
        return max(z.imag * lo, z.imag * hi, 0.0) > 700.0

    def __call__(self, z) -> complex:
        z = complex(np.asarray(z).reshape(-1)[0]) if np.ndim(z) else complex(z)
        if abs(z) > self.z_max * (1 + 1e-12):
            raise ValueError(f"|z| = {abs(z):g} exceeds the resolved range {self.z_max:g}")
        if self.overflows(z):
            return complex(math.inf, 0.0)
        if self.p.size == 0:
            return 0j
        return complex(np.sum(self.wr * np.exp(-1j * z * self.p)))


@dataclass
class LaplaceValue:
    value: complex
    overflow: bool = False
    interval: tuple[float, float] = (0.0, 0.0)


def line_laplace(field: ScalarField, omega, z: complex,
                 qc: RadonQuadrature = RadonQuadrature()) -> LaplaceValue:
    """int exp(-i z p) Ru(omega, p) dp, i.e. u_hat(z omega) along the complex line."""
    z = complex(z)
    lt = LineTransform(field, omega, abs(z), qc)
    if lt.overflows(z):
        return LaplaceValue(complex(math.nan, math.nan), True, lt.interval)
    return LaplaceValue(lt(z), False, lt.interval)


def profile_l1(field: ScalarField, omega, qc: RadonQuadrature = RadonQuadrature()) -> float:
    om = _unit(omega, field.dimension)
    p, w = _line_nodes(field, om, 0.0, qc)
    if p.size == 0:
        return 0.0
    return float(np.sum(w * np.abs(radon_forward(field, om, p, qc))))


def taylor_on_line(field: ScalarField, omega, K: int,
                   qc: RadonQuadrature = RadonQuadrature()) -> np.ndarray:
    """c_k = int (-i p)^k / k! Ru(omega, p) dp, k = 0..K."""
    om = _unit(omega, field.dimension)
    p, w = _line_nodes(field, om, 0.0, qc)
    out = np.zeros(K + 1, dtype=complex)
    if p.size == 0:
        return out
    wr = w * radon_forward(field, om, p, qc)
    term = np.ones_like(p, dtype=complex)
    for k in range(K + 1):
        out[k] = np.sum(wr * term)
        term = term * (-1j * p) / (k + 1)
    return out


def fourier_transform(field: ScalarField, xi, qc: RadonQuadrature = RadonQuadrature()) -> complex:
    """u_hat(xi) by polar (n = 2) or spherical (n = 3) quadrature of each component."""
    xi = np.asarray(xi, dtype=float)
    s = float(np.linalg.norm(xi))
    n = field.dimension
    reach = field.reach()
    total = 0j
    for j in range(field.components):
        A = field.amplitudes[j]
        if A == 0:
            continue
        R = float(reach[j])
        width = qc.h_base if s == 0 else min(qc.h_base, 4.0 / s)
        cuts = sorted({0.0, R, *[b for b in field.radial_breaks(j) if b < R]})
        acc = 0j
        for a, b in zip(cuts[:-1], cuts[1:]):
            r, wr = _panel_nodes([a], [b], max(1, math.ceil((b - a) / width)), qc.nodes)
            r, wr = r[0], wr[0]
            g = field.radial(j, r)
            if n == 2:
                n_phi = 2 * math.ceil(s * R) + 64
                phi = 2 * math.pi * np.arange(n_phi) / n_phi
                phase = np.outer(r, xi[0] * np.cos(phi) + xi[1] * np.sin(phi))
                ang = np.exp(-1j * phase).sum(axis=1) * (2 * math.pi / n_phi)
                acc += np.sum(wr * g * r * ang)
            else:
                # polar axis along xi; the azimuthal integral is exactly 2 pi
                n_mu = max(1, math.ceil(s * R / 8.0))
                mu, wmu = _panel_nodes([-1.0], [1.0], n_mu, qc.nodes)
                ang = 2 * math.pi * (np.exp(-1j * s * np.outer(r, mu[0])) @ wmu[0])
                acc += np.sum(wr * g * r * r * ang)
        total += np.exp(-1j * float(field.centers[j] @ xi)) * acc
    return complex(total)


@dataclass
class SliceCheck:
    lhs: complex
    rhs: complex
    discrepancy: float


def fourier_slice_check(field: ScalarField, omega, s: float,
                        qc: RadonQuadrature = RadonQuadrature()) -> SliceCheck:
    """1-d Fourier transform of Ru(omega, .) at s against u_hat(s omega)."""
    om = _unit(omega, field.dimension)
    lhs = line_laplace(field, om, complex(s), qc).value
    rhs = fourier_transform(field, s * om, qc)
    return SliceCheck(lhs, rhs, abs(lhs - rhs))


def line_series_data(field: ScalarField, directions, K: int, eps_rel: float = 1e-6,
                     grid: ProfileGrid = ProfileGrid(),
                     qc: RadonQuadrature = RadonQuadrature()) -> LineSeriesData:
    """Taylor data of z -> u_hat(z omega) on real unit directions.

    Growth data: sigma(omega) = max(-a, b) of the detected support and
    C = max ||Ru(omega, .)||_1, so that |u_hat(z omega)| <= C exp(sigma |z|).
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    coefs, sigma, C = [], [], 0.0
    for om in dirs:
        om = om / np.linalg.norm(om)
        coefs.append(taylor_on_line(field, om, K, qc))
        sigma.append(detect_support(radon_profile(field, om, grid, qc), eps_rel).sigma)
        C = max(C, profile_l1(field, om, qc))
    return LineSeriesData(dirs.astype(complex), np.array(coefs), np.array(sigma), 1.0,
                          max(C, np.finfo(float).tiny))


def write_profile_csv(profile: RadonProfile, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["p", "value"])
        for p, v in zip(profile.p, profile.values):
            w.writerow([f"{p:.17g}", f"{v:.17g}"])


def write_sinogram_csv(profiles, path) -> None:
    """Long-format sinogram: one row per (direction index, p)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        n = profiles[0].omega.size if profiles else 2
        w.writerow(["omega_index"] + [f"omega{j + 1}" for j in range(n)] + ["p", "value"])
        for i, prof in enumerate(profiles):
            om = [f"{x:.17g}" for x in prof.omega]
            for p, v in zip(prof.p, prof.values):
                w.writerow([i] + om + [f"{p:.17g}", f"{v:.17g}"])
