"""Order, type and indicator of entire functions of one variable.

Coefficient sequences can be stored as log-moduli because the comparison
coefficients (e sigma rho / k)^(k / rho) leave double range quickly.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, asdict
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class CoefficientSequence:
    """Taylor coefficients c_0..c_K, given directly or as log|c_k|."""

    log_abs: np.ndarray

    def __post_init__(self):
        la = np.array(self.log_abs, dtype=float)
        if la.ndim != 1 or la.size == 0:
            raise ValueError("need a non-empty 1-d coefficient sequence")
        if np.any(np.isnan(la)):
            raise ValueError("log-moduli must not be NaN")
        la.setflags(write=False)
        object.__setattr__(self, "log_abs", la)

    @classmethod
    def from_coefficients(cls, c) -> "CoefficientSequence":
        c = np.abs(np.asarray(c, dtype=complex))
        with np.errstate(divide="ignore"):
            return cls(np.log(c))

    @property
    def max_index(self) -> int:
        return self.log_abs.size - 1


@dataclass(frozen=True)
class GrowthProfile:
    order: float
    type: float


def levin_comparison_coefficients(sigma: float, rho: float, K: int) -> CoefficientSequence:
    """log of (e sigma rho / k)^(k / rho), k = 0..K, the coefficients of the
    comparison function of order rho and type sigma."""
    k = np.arange(K + 1, dtype=float)
    la = np.zeros(K + 1)
    la[1:] = (k[1:] / rho) * (math.log(math.e * sigma * rho) - np.log(k[1:]))
    return CoefficientSequence(la)


def cauchy_bound(C: float, sigma: float, rho: float, k: int) -> float:
    """C (e sigma rho / k)^(k / rho), equal to C at k = 0."""
    if C <= 0 or sigma <= 0 or rho <= 0:
        raise ValueError("C, sigma and rho must be positive")
    if k == 0:
        return float(C)
    return float(C * math.exp((k / rho) * (math.log(math.e * sigma * rho / k))))


@dataclass
class OrderEstimate:
    value: float
    flag: str  # "finite", "order0" or "infinite"
    window: tuple[int, int]
    raw_limsup: float
    residual: float
    note: str = ("least-squares fit of -log|c_k|/k = log(k)/rho - beta + g log(k)/k + d/k "
                 "over the window; "
                 "finite-k estimates are biased, see raw_limsup for the plain formula")

    def to_dict(self):
        return asdict(self)


@dataclass
class TypeEstimate:
    value: float
    flag: str
    window: tuple[int, int]
    limsup: float
    note: str = "max of k^(1/rho) |c_k|^(1/k) over the window"

    def to_dict(self):
        return asdict(self)


def _window(c: CoefficientSequence, policy: str):
    K = c.max_index
    if policy == "top-half":
        lo = max(1, K // 2)
    elif policy == "all":
        lo = 1
    else:
        raise ValueError(f"unknown window policy {policy!r}")
    k = np.arange(lo, K + 1)
    la = c.log_abs[lo:]
    mask = np.isfinite(la)
    return k[mask], la[mask], (lo, K)


def estimate_order(c: CoefficientSequence, window: str = "top-half") -> OrderEstimate:
    """Order from the growth of -log|c_k| against k log k.

    The plain formula limsup k log k / (-log|c_k|) converges like
    1 / log k; fitting log|c_k| = -(k/rho) log k + beta k + g log k + d over
    the window removes that bias for sequences of regular growth.
    """
    k, la, win = _window(c, window)
    if k.size == 0:
        return OrderEstimate(0.0, "order0", win, 0.0, 0.0)
    if k.size < 8:
        raise ValueError("need at least 8 nonzero coefficients in the window")
    y = -la / k
    with np.errstate(divide="ignore"):
        raw = np.where(-la > 0, k * np.log(k) / -la, np.inf)
    raw_limsup = float(np.max(raw))
    if np.median(-la) <= 0:
        return OrderEstimate(math.inf, "infinite", win, raw_limsup, 0.0)
    # power-law prefactors c_k ~ k^g d (e.g. Stirling's sqrt(2 pi k)) add the
    # log(k)/k and 1/k columns; they vanish for the comparison sequences
    X = np.column_stack([np.log(k), np.ones_like(y), np.log(k) / k, 1.0 / k])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    slope = coef[0]
    residual = float(np.sqrt(np.mean((X @ coef - y) ** 2)))
    if slope <= 1e-12:
        return OrderEstimate(math.inf, "infinite", win, raw_limsup, residual)
    return OrderEstimate(float(1.0 / slope), "finite", win, raw_limsup, residual)


def estimate_type(c: CoefficientSequence, rho: float, window: str = "top-half") -> TypeEstimate:
    """Type with respect to rho: (limsup k^(1/rho) |c_k|^(1/k))^rho / (e rho)."""
    if not (rho > 0 and math.isfinite(rho)):
        raise ValueError("rho must be positive and finite")
    k, la, win = _window(c, window)
    if k.size == 0:
        return TypeEstimate(0.0, "zero", win, 0.0)
    L = np.log(k) / rho + la / k
    Lmax = float(np.max(L))
    return TypeEstimate(math.exp(rho * Lmax) / (math.e * rho), "finite", win, math.exp(Lmax))


@dataclass
class SeriesValue:
    value: float
    log_value: float
    terms: int
    overflow: bool = False


def comparison_series(C: float, sigma: float, rho: float, r: float,
                      rel_tail: float = 1e-12, max_terms: int = 10_000_000) -> SeriesValue:
    """C * sum_k (e sigma rho / k)^(k / rho) r^k, summed in log space.

    Summation stops once the ratio test bounds the tail by ``rel_tail``
    times the running sum.
    """
    if C <= 0 or sigma <= 0 or rho <= 0 or r < 0:
        raise ValueError("C, sigma, rho must be positive and r non-negative")
    if r == 0:
        return SeriesValue(float(C), math.log(C), 1)
    log_r = math.log(r)
    a = math.log(math.e * sigma * rho)

    def log_term(k):
        return (k / rho) * (a - math.log(k)) + k * log_r

    log_sum = 0.0  # k = 0 term is 1
    k = 1
    prev = 0.0
    while k < max_terms:
        lt = log_term(k)
        log_sum = np.logaddexp(log_sum, lt)
        ratio = math.exp(log_term(k + 1) - lt)
        # term ratios decrease in k once past the peak, so a geometric bound applies
        if lt < prev and ratio < 1.0:
            tail = log_term(k + 1) - math.log1p(-ratio)
            if tail - log_sum < math.log(rel_tail):
                break
        prev = lt
        k += 1
    log_value = float(log_sum) + math.log(C)
    if log_value > 709.0:
        return SeriesValue(math.inf, log_value, k, overflow=True)
    return SeriesValue(math.exp(log_value), log_value, k)


@dataclass(frozen=True)
class RayGrid:
    t_max: float = 1000.0
    count: int = 64
    min_t_max: float = 1e-3


@dataclass
class IndicatorEstimate:
    value: float
    residual: float
    t_range: tuple[float, float]
    flags: list[str] = field(default_factory=list)
    reliable: bool = True

    def to_dict(self):
        return asdict(self)


def indicator_estimate(f: Callable, zeta, rho: float, grid: RayGrid = RayGrid(),
                       max_residual: float = 0.05) -> IndicatorEstimate:
    """Growth rate of log|f(t zeta)| against t^rho on the top decade of the grid.

    The slope comes from least squares on t in [t_max/10, t_max]; the grid is
    halved (with a warning) while f overflows.  ``residual`` is the RMS fit
    error relative to the spread of the data.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    zeta = np.asarray(zeta, dtype=complex)
    flags = []
    t_max = grid.t_max
    while True:
        t = np.linspace(t_max / 10.0, t_max, grid.count)
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.array([complex(f(ti * zeta)) for ti in t])
        if np.all(np.isfinite(vals)):
            break
        t_max /= 2.0
        if t_max < grid.min_t_max:
            raise OverflowError("evaluator overflows on every tested ray segment")
        if "shrunk" not in flags:
            flags.append("shrunk")
            warnings.warn(f"evaluator overflow along the ray; shrinking t_max to {t_max:g}",
                          RuntimeWarning, stacklevel=2)
    mags = np.abs(vals)
    if not np.any(mags > 0):
        return IndicatorEstimate(-math.inf, 0.0, (t[0], t[-1]), flags + ["vanishes"], True)
    keep = mags > 0
    y = np.log(mags[keep])
    x = t[keep] ** rho
    X = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    spread = max(float(np.ptp(y)), 1e-300)
    residual = float(np.sqrt(np.mean((X @ coef - y) ** 2))) / spread
    reliable = residual <= max_residual
    if not reliable:
        flags.append("unreliable")
    return IndicatorEstimate(float(coef[0]), residual, (float(t[0]), float(t[-1])), flags, reliable)
