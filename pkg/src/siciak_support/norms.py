"""Closed-form cross norm of the Euclidean norm and supporting-function helpers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar


@dataclass(frozen=True)
class ABDecomposition:
    """zeta = exp(i theta) (a + i b) with <a, b> = 0 and |b| <= |a|."""

    theta: float
    a: np.ndarray
    b: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return np.exp(1j * self.theta) * (self.a + 1j * self.b)


@dataclass(frozen=True)
class IntervalSupportFn:
    a: float
    b: float

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError(f"interval endpoints out of order: [{self.a}, {self.b}]")

    def __call__(self, t: float) -> float:
        return interval_support(self, t)


def _c(zeta) -> np.ndarray:
    return np.atleast_1d(np.asarray(zeta, dtype=complex))


def cross_norm_euclidean(zeta) -> float:
    """|zeta|_c = (|zeta|^2 + (|zeta|^4 - |<zeta,zeta>|^2)^(1/2))^(1/2)."""
    # The closed form loses half the digits near C R^n (sqrt of a cancelling
    # difference); |a| + |b| from the rotated real/imaginary parts does not.
    ab = ab_decompose(zeta)
    return float(np.linalg.norm(ab.a) + np.linalg.norm(ab.b))


def cross_norm_via_real_parts(zeta) -> float:
    """Same quantity written with xi = Re zeta, eta = Im zeta."""
    z = _c(zeta)
    xi, eta = z.real, z.imag
    n2 = float(xi @ xi + eta @ eta)
    gram = max(float((xi @ xi) * (eta @ eta) - (xi @ eta) ** 2), 0.0)
    return math.sqrt(n2 + 2.0 * math.sqrt(gram))


def ab_decompose(zeta) -> ABDecomposition:
    z = _c(zeta)
    q = complex(np.sum(z * z))
    # Isotropic points admit every phase; theta = 0 keeps this deterministic.
    theta = 0.5 * math.atan2(q.imag, q.real) if q != 0 else 0.0
    # exp(-2i theta) <zeta,zeta> = |a|^2 - |b|^2 + 2i<a,b> is then real and >= 0
    w = np.exp(-1j * theta) * z
    return ABDecomposition(theta, w.real.copy(), w.imag.copy())


def dist_to_CRn(zeta) -> float:
    """Distance from zeta to the union of complex lines through real points."""
    return float(np.linalg.norm(ab_decompose(zeta).b))


def cross_norm_via_distance(zeta) -> float:
    """Same quantity as (|zeta|^2 - d^2)^(1/2) + d with d the distance to C R^n."""
    z = _c(zeta)
    d = dist_to_CRn(z)
    n2 = float(np.sum(np.abs(z) ** 2))
    return math.sqrt(max(n2 - d * d, 0.0)) + d


def interval_support(H: IntervalSupportFn, t: float) -> float:
    """Supporting function of [a, b]: a t for t <= 0 and b t for t >= 0."""
    return H.a * t if t <= 0 else H.b * t


@dataclass(frozen=True)
class CrossNormBound:
    value: float
    theta: float
    label: str = "upper bound, not certified infimum"


def cross_norm_general(norm: Callable[[np.ndarray], float], zeta,
                       n_theta: int = 256) -> CrossNormBound:
    """Upper bound on the cross norm of an arbitrary real norm.

    Minimizes ||a|| + ||b|| over the two-term decompositions
    zeta = exp(i theta) a + i exp(i theta) b, theta in [0, pi).  For the
    Euclidean norm the minimum is the exact cross norm.
    """
    z = _c(zeta)

    def cost(theta: float) -> float:
        w = np.exp(-1j * theta) * z
        value = float(norm(w.real)) + float(norm(w.imag))
        if not math.isfinite(value):
            raise ValueError(f"norm returned a non-finite value at theta={theta}")
        return value

    if not np.any(z.imag) or not np.any(z.real):
        # a single real direction, possibly times i
        theta0 = 0.0 if not np.any(z.imag) else math.pi / 2
        return CrossNormBound(cost(theta0), theta0)

    grid = np.linspace(0.0, math.pi, n_theta, endpoint=False)
    grid = np.append(grid, ab_decompose(z).theta % math.pi)
    costs = np.array([cost(t) for t in grid])
    best = int(np.argmin(costs))
    step = math.pi / n_theta
    res = minimize_scalar(cost, bounds=(grid[best] - step, grid[best] + step),
                          method="bounded", options={"xatol": 1e-12})
    if res.fun < costs[best]:
        return CrossNormBound(float(res.fun), float(res.x) % math.pi)
    return CrossNormBound(float(costs[best]), float(grid[best]))
