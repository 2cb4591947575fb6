"""Entire extension of a function known on a union of complex lines.

Given Taylor coefficients c_k(w) of z -> f(z w) for directions w in E, the
degree-k homogeneous polynomial P_k with P_k(w) = c_k(w) is recovered by
least squares, and f = sum_k P_k.  The growth of every P_k is checked
against C (e rho / k)^(k / rho) Psi_{E,gamma}(zeta)^k with gamma = sigma^(1/rho).
"""
from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .entire import IndicatorEstimate, RayGrid, indicator_estimate
from .extremal import ExtremalError, SolverConfig, WeightedDirectionSet, psi_eval
from .poly import HomogeneousPolynomial, linear_form_power, monomial_matrix


class IncompatibleData(ValueError):
    """No degree-k homogeneous polynomial reproduces the line coefficients."""

    def __init__(self, degree: int, residual: float, tol: float):
        self.degree = degree
        self.residual = residual
        super().__init__(f"degree {degree}: recovery residual {residual:.3e} exceeds {tol:.1e}")


class RankDeficientWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LineSeriesData:
    """Coefficients c_k(w_j), k = 0..K, on directions w_j with growth data."""

    directions: np.ndarray
    coefficients: np.ndarray  # shape (lines, K + 1)
    sigma: np.ndarray
    rho: float = 1.0
    C: float = 1.0

    def __post_init__(self):
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=complex))
        coef = np.atleast_2d(np.asarray(self.coefficients, dtype=complex))
        sig = np.broadcast_to(np.asarray(self.sigma, dtype=float), (dirs.shape[0],)).copy()
        if coef.shape[0] != dirs.shape[0]:
            raise ValueError("one coefficient row per direction is required")
        if np.any(sig < 0) or not np.all(np.isfinite(sig)):
            raise ValueError("sigma must be finite and non-negative")
        if self.rho <= 0 or self.C <= 0:
            raise ValueError("rho and C must be positive")
        for a in (dirs, coef, sig):
            a.setflags(write=False)
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "coefficients", coef)
        object.__setattr__(self, "sigma", sig)

    @property
    def dimension(self) -> int:
        return self.directions.shape[1]

    @property
    def max_degree(self) -> int:
        return self.coefficients.shape[1] - 1

    def weighted_set(self) -> WeightedDirectionSet:
        return WeightedDirectionSet(self.directions, self.sigma ** (1.0 / self.rho))

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "C": self.C,
            "directions": [[[float(z.real), float(z.imag)] for z in w] for w in self.directions],
            "sigma": self.sigma.tolist(),
            "coefficients": [[[float(z.real), float(z.imag)] for z in row]
                             for row in self.coefficients],
        }

    @classmethod
    def from_dict(cls, d) -> "LineSeriesData":
        def cplx(x):
            if isinstance(x, (list, tuple)):
                return complex(x[0], x[1])
            return complex(x)
        dirs = [[cplx(z) for z in w] for w in d["directions"]]
        coefs = [[cplx(z) for z in row] for row in d["coefficients"]]
        return cls(np.array(dirs), np.array(coefs), d.get("sigma", 0.0),
                   float(d.get("rho", 1.0)), float(d.get("C", 1.0)))


def write_line_csv(data: LineSeriesData, path) -> None:
    n, K = data.dimension, data.max_degree
    header = [f"w{j + 1}_{p}" for j in range(n) for p in ("re", "im")] + ["sigma"]
    header += [f"c{k}_{p}" for k in range(K + 1) for p in ("re", "im")]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for dvec, s, row in zip(data.directions, data.sigma, data.coefficients):
            w.writerow([f"{x:.17g}" for z in dvec for x in (z.real, z.imag)] + [f"{s:.17g}"]
                       + [f"{x:.17g}" for z in row for x in (z.real, z.imag)])


def read_line_csv(path, rho: float = 1.0, C: float = 1.0) -> LineSeriesData:
    """Read the CSV layout of :func:`write_line_csv`; ``sigma`` is optional."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(x) for x in r] for r in reader if r]
    idx = {h: i for i, h in enumerate(header)}
    n = sum(1 for h in header if h.startswith("w") and h.endswith("_re"))
    K = sum(1 for h in header if h.startswith("c") and h.endswith("_re")) - 1
    arr = np.array(rows, dtype=float)
    dirs = np.column_stack([arr[:, idx[f"w{j + 1}_re"]] + 1j * arr[:, idx[f"w{j + 1}_im"]]
                            for j in range(n)])
    coef = np.column_stack([arr[:, idx[f"c{k}_re"]] + 1j * arr[:, idx[f"c{k}_im"]]
                            for k in range(K + 1)])
    sigma = arr[:, idx["sigma"]] if "sigma" in idx else 0.0
    return LineSeriesData(dirs, coef, sigma, rho, C)


def exponential_line_data(a, directions, K: int) -> LineSeriesData:
    """Line data of f = exp(<a, .>): c_k(w) = <a, w>^k / k!, sigma(w) = |<a, w>|."""
    a = np.asarray(a, dtype=complex)
    dirs = np.atleast_2d(np.asarray(directions, dtype=complex))
    s = dirs @ a
    k = np.arange(K + 1)
    coef = s[:, None] ** k[None, :] / np.array([math.factorial(j) for j in k], dtype=float)
    return LineSeriesData(dirs, coef, np.abs(s), 1.0, 1.0)


@dataclass
class Recovery:
    polynomial: HomogeneousPolynomial
    residual: float
    rank: int
    rank_deficient: bool


def recover_homogeneous(k: int, directions, values, scaled: bool = True, tol: float = 1e-8,
                        rcond: float = 1e-13) -> Recovery:
    """Least-squares P_k with P_k(w_j) = c_k(w_j); minimum norm if underdetermined.

    ``residual`` is max_j |P_k(w_j) - c_j| / max_j |c_j|.  Raises
    :class:`IncompatibleData` when it exceeds ``tol``; warns with
    :class:`RankDeficientWarning` when the samples do not determine P_k.
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=complex))
    c = np.asarray(values, dtype=complex).reshape(-1)
    if dirs.shape[0] == 0 or dirs.shape[0] != c.shape[0]:
        raise ValueError("need one value per sample direction and at least one sample")
    n = dirs.shape[1]
    A = monomial_matrix(dirs, k, scaled=scaled)
    x, _, rank, _ = np.linalg.lstsq(A, c, rcond=rcond)
    p = (HomogeneousPolynomial.from_scaled(n, k, x) if scaled
         else HomogeneousPolynomial(n, k, x))
    scale = float(np.max(np.abs(c)))
    residual = float(np.max(np.abs(A @ x - c)) / scale) if scale > 0 else 0.0
    rank_deficient = bool(rank < A.shape[1])
    if residual > tol:
        raise IncompatibleData(k, residual, tol)
    if rank_deficient:
        warnings.warn(f"degree {k}: samples determine only {rank} of {A.shape[1]} coefficients",
                      RankDeficientWarning, stacklevel=2)
    return Recovery(p, residual, int(rank), rank_deficient)


@dataclass
class BoundCheck:
    """|P_k(zeta)| against C (e rho / k)^(k / rho) psi^k at one probe point."""

    point: np.ndarray
    psi: float
    bounds: np.ndarray
    values: np.ndarray
    margins: np.ndarray  # (bound - |P_k|) / bound

    @property
    def passed(self) -> bool:
        return bool(np.all(self.margins >= -1e-9))

    def to_dict(self) -> dict:
        return {"point": [[float(z.real), float(z.imag)] for z in self.point], "psi": self.psi,
                "bounds": self.bounds.tolist(), "values": self.values.tolist(),
                "margins": self.margins.tolist(), "passed": self.passed}


@dataclass
class TruncatedEntireExtension:
    polynomials: list[HomogeneousPolynomial]
    residuals: list[float]
    rank_deficient: list[bool]
    rho: float = 1.0
    C: float = 1.0
    bound_checks: list[BoundCheck] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return self.polynomials[0].dimension

    @property
    def max_degree(self) -> int:
        return len(self.polynomials) - 1

    def __call__(self, zeta) -> complex:
        return eval_extension(self, zeta).value

    def to_dict(self) -> dict:
        return {
            "rho": self.rho, "C": self.C,
            "polynomials": [p.to_dict() for p in self.polynomials],
            "residuals": self.residuals,
            "rank_deficient": self.rank_deficient,
            "bound_checks": [b.to_dict() for b in self.bound_checks],
        }


def growth_bound(C: float, rho: float, k: int, psi: float) -> float:
    if k == 0:
        return C
    if psi == 0:
        return 0.0
    return C * math.exp((k / rho) * (math.log(math.e * rho / k)) + k * math.log(psi))


def check_bounds(polys: list[HomogeneousPolynomial], E: WeightedDirectionSet, zeta, C: float,
                 rho: float, cfg: SolverConfig) -> BoundCheck:
    z = np.asarray(zeta, dtype=complex)
    psi = psi_eval(E, z, cfg).value
    values = np.array([abs(p(z)) for p in polys])
    bounds = np.array([growth_bound(C, rho, k, psi) for k in range(len(polys))])
    with np.errstate(invalid="ignore", divide="ignore"):
        margins = np.where(bounds > 0, (bounds - values) / bounds,
                           np.where(values <= 1e-14, 0.0, -np.inf))
    return BoundCheck(z, psi, bounds, values, margins)


def extend(data: LineSeriesData, tol: float = 1e-8, probes=(), cfg: SolverConfig | None = None,
           scaled: bool = True) -> TruncatedEntireExtension:
    """Recover P_0..P_K and check their growth at the probe points.

    Raises :class:`IncompatibleData` carrying the first failing degree.
    """
    polys, residuals, deficient = [], [], []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RankDeficientWarning)
        for k in range(data.max_degree + 1):
            rec = recover_homogeneous(k, data.directions, data.coefficients[:, k], scaled, tol)
            polys.append(rec.polynomial)
            residuals.append(rec.residual)
            deficient.append(rec.rank_deficient)
    if any(deficient):
        warnings.warn("degrees " + ", ".join(str(k) for k, d in enumerate(deficient) if d)
                      + " are not determined by the sample directions", RankDeficientWarning,
                      stacklevel=2)
    ext = TruncatedEntireExtension(polys, residuals, deficient, data.rho, data.C)
    if len(probes):
        cfg = cfg or SolverConfig(max_degree=min(max(data.max_degree, 1), 8))
        E = data.weighted_set()
        ext.bound_checks = [check_bounds(polys, E, z, data.C, data.rho, cfg) for z in probes]
    return ext


@dataclass
class ExtensionValue:
    value: complex
    truncation_degree: int
    tail_bound: float | None = None
    note: str = "partial sum of P_0..P_K; no tail estimate"


def eval_extension(ext: TruncatedEntireExtension, zeta, psi: float | None = None) -> ExtensionValue:
    """sum_{k <= K} P_k(zeta).  With ``psi`` (a value of Psi_{E,gamma} at
    zeta) the comparison series bounds the omitted tail."""
    z = np.asarray(zeta, dtype=complex)
    value = complex(sum(p(z) for p in ext.polynomials))
    K = ext.max_degree
    if psi is None:
        return ExtensionValue(value, K)
    # past the peak the term ratios decrease, so a geometric tail bounds the rest
    tail = 0.0
    k = K + 1
    term = growth_bound(ext.C, ext.rho, k, psi)
    while term > 0:
        tail += term
        nxt = growth_bound(ext.C, ext.rho, k + 1, psi)
        ratio = nxt / term
        if ratio < 1 and nxt / (1 - ratio) <= 1e-16 * tail:
            tail += nxt / (1 - ratio)
            break
        term, k = nxt, k + 1
    return ExtensionValue(value, K, tail, "partial sum; tail bounded by the comparison series")


@dataclass
class TypeBoundReport:
    sigma_max: float
    limit: float
    estimates: list[IndicatorEstimate]
    max_observed: float
    passed: bool
    unreliable: list[int]

    def to_dict(self) -> dict:
        return {"sigma_max": self.sigma_max, "limit": self.limit,
                "estimates": [e.to_dict() for e in self.estimates],
                "max_observed": self.max_observed, "passed": self.passed,
                "unreliable": self.unreliable}


def type_bound_check(ext: TruncatedEntireExtension, sigma, rays, rel_tol: float = 0.03,
                     grid: RayGrid | None = None) -> TypeBoundReport:
    """Growth along unit rays against sqrt(2) * max sigma for real E, rho = 1.

    By default the ray grid stops at t = K / (e sqrt(2) sigma_max), where the
    degree-K partial sum still tracks the entire function.
    """
    if ext.rho != 1:
        raise ValueError("the sqrt(2) type bound is for exponential type (rho = 1)")
    sigma_max = float(np.max(np.asarray(sigma, dtype=float)))
    limit = math.sqrt(2) * sigma_max
    if grid is None:
        t_max = ext.max_degree / (math.e * max(limit, 1e-12))
        grid = RayGrid(t_max=max(t_max, 1e-3), count=64)
    estimates, unreliable = [], []
    for i, ray in enumerate(rays):
        u = np.asarray(ray, dtype=complex)
        u = u / np.linalg.norm(u)
        est = indicator_estimate(ext, u, 1.0, grid)
        estimates.append(est)
        if not est.reliable:
            unreliable.append(i)
    finite = [e.value for e in estimates if math.isfinite(e.value)]
    max_obs = max(finite) if finite else -math.inf
    passed = max_obs <= limit * (1 + rel_tol) + 1e-12
    return TypeBoundReport(sigma_max, limit, estimates, max_obs, passed, unreliable)


def exponential_polynomials(a, K: int) -> list[HomogeneousPolynomial]:
    """P_k = <a, .>^k / k!, the homogeneous parts of exp(<a, .>)."""
    return [linear_form_power(a, k) * (1.0 / math.factorial(k)) for k in range(K + 1)]


def extension_to_json(ext: TruncatedEntireExtension) -> str:
    return json.dumps(ext.to_dict(), indent=2)
