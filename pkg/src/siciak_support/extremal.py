"""Weighted homogeneous extremal function by degree-truncated linear programming.

For each degree k the solver maximizes Re p(zeta) over homogeneous p of
degree k subject to |p(w_j)| <= gamma_j^k on the samples of E.  The modulus
constraint is replaced by the circumscribed regular m-gon, so the LP value
over-estimates the sampled problem by at most 1/cos(pi/m).  The optimizer
scaled by cos(pi/m) meets the exact modulus constraints, so its modulus at
zeta gives the certified lower bound without a second solve.  This is never
below the inscribed-polygon LP value, which is cos(pi/m) times the
circumscribed one by homogeneity in the right-hand side.

Reported values are upper-biased in sampling (finitely many points of E) and
lower-biased in degree truncation (k <= K).
"""
from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .poly import HomogeneousPolynomial, monomial_matrix, num_monomials
from .simplex import LPStatus, maximize

log = logging.getLogger(__name__)

BIAS_LABEL = "upper-biased in sampling, lower-biased in degree truncation"


class ExtremalError(Exception):
    pass


class UnboundedDegree(ExtremalError):
    """The LP at this degree is unbounded: the samples do not determine
    degree-k homogeneous polynomials in the direction of the evaluation point."""

    def __init__(self, degree: int, point=None):
        self.degree = degree
        self.point = point
        super().__init__(f"LP unbounded at degree {degree}")


class InfeasibleZeroWeights(ExtremalError):
    pass


class SolverFailure(ExtremalError):
    pass


@dataclass(frozen=True)
class WeightedDirectionSet:
    """Finite sample of a compact set E in C^n with weights gamma >= 0.

    ``sampler``, when given, returns a denser sample of the same set for a
    requested point count; it drives adaptive refinement.
    """

    points: np.ndarray
    weights: np.ndarray
    sampler: Callable[[int], "WeightedDirectionSet"] | None = field(default=None, repr=False,
                                                                     compare=False)
    label: str = ""
    density: int = 0

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=complex))
        w = np.broadcast_to(np.asarray(self.weights, dtype=float), (pts.shape[0],)).copy()
        if pts.shape[0] == 0:
            raise ValueError("a direction set needs at least one point")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and non-negative")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def zero_weight(self) -> np.ndarray:
        return self.weights == 0

    def __len__(self):
        return self.points.shape[0]

    def with_weights(self, weights) -> "WeightedDirectionSet":
        return replace(self, weights=weights, sampler=None)

    def scaled(self, c: float) -> "WeightedDirectionSet":
        sampler = None
        if self.sampler is not None:
            inner = self.sampler
            sampler = lambda m: inner(m).scaled(c)  # noqa: E731
        return replace(self, weights=self.weights * c, sampler=sampler)

    def union(self, other: "WeightedDirectionSet") -> "WeightedDirectionSet":
        return WeightedDirectionSet(np.vstack([self.points, other.points]),
                                    np.concatenate([self.weights, other.weights]),
                                    label=f"{self.label}+{other.label}")

    def to_dict(self) -> dict:
        return {
            "points": [[[float(z.real), float(z.imag)] for z in p] for p in self.points],
            "weights": self.weights.tolist(),
            "label": self.label,
        }


# -- sample generators -------------------------------------------------------

def _fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count) + 0.5
    z = 1.0 - 2.0 * i / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def arc_directions(start: float, stop: float, count: int, weight=1.0) -> WeightedDirectionSet:
    """Unit vectors (cos t, sin t) for count angles spanning [start, stop]."""
    def make(m):
        t = np.linspace(start, stop, m)
        pts = np.column_stack([np.cos(t), np.sin(t)])
        w = weight(pts) if callable(weight) else weight
        return WeightedDirectionSet(pts, w, sampler=make,
                                    label=f"arc[{start:.4g},{stop:.4g}]", density=m)
    return make(count)


def real_sphere_directions(n: int, count: int, weight=1.0) -> WeightedDirectionSet:
    """Quasi-uniform samples of the real unit sphere S^{n-1}, n = 2 or 3."""
    def make(m):
        if n == 2:
            t = 2 * math.pi * np.arange(m) / m
            pts = np.column_stack([np.cos(t), np.sin(t)])
        elif n == 3:
            pts = _fibonacci_sphere(m)
        else:
            raise ValueError("real sphere samples are provided for n = 2 and 3")
        w = weight(pts) if callable(weight) else weight
        return WeightedDirectionSet(pts, w, sampler=make, label=f"S^{n - 1}",
                                    density=m)
    return make(count)


def complex_sphere_points(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Quasi-uniform points of the unit sphere of C^n modulo the circle action.

    In C^2 these are Hopf lifts of a Fibonacci sample of S^2; otherwise a
    seeded Gaussian sample.  Absolutely homogeneous functions only depend on
    the point modulo a unit scalar, so this covers the whole sphere.
    """
    if n == 2:
        s = _fibonacci_sphere(count)
        eta = np.arccos(np.clip(s[:, 2], -1, 1))
        phi = np.arctan2(s[:, 1], s[:, 0])
        return np.column_stack([np.cos(eta / 2), np.sin(eta / 2) * np.exp(1j * phi)])
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def complex_sphere_directions(n: int, count: int, circle_copies: int = 4,
                              weight=1.0) -> WeightedDirectionSet:
    """Sample of the complex unit sphere: base points times unit scalars.

    The copies are rotated by multiples of 2*pi/(16*circle_copies), which
    interleaves with the default 16 polygon phases of the solver.
    """
    def make(m):
        base = complex_sphere_points(n, m)
        rot = np.exp(2j * math.pi * np.arange(circle_copies) / (16 * circle_copies))
        pts = (base[None, :, :] * rot[:, None, None]).reshape(-1, n)
        w = weight(pts) if callable(weight) else weight
        return WeightedDirectionSet(pts, w, sampler=make,
                                    label=f"complex S^{2 * n - 1}", density=m)
    return make(count)


def norm_sphere_directions(norm: Callable[[np.ndarray], float], count: int) -> WeightedDirectionSet:
    """Boundary of the unit ball of a norm on R^2, sampled by angle."""
    def make(m):
        t = 2 * math.pi * np.arange(m) / m
        dirs = np.column_stack([np.cos(t), np.sin(t)])
        pts = dirs / np.array([norm(d) for d in dirs])[:, None]
        return WeightedDirectionSet(pts, 1.0, sampler=make, label="norm sphere",
                                    density=m)
    return make(count)


# -- solver ------------------------------------------------------------------

@dataclass(frozen=True)
class SolverConfig:
    max_degree: int = 8
    phases: int = 16
    refine_limit: int = 0
    pivot_tol: float = 1e-9
    feas_tol: float = 1e-9
    pivot_rule: str = "dantzig"
    scaled_basis: bool = True

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValueError("max_degree must be >= 1")
        if self.phases < 8:
            raise ValueError("at least 8 polygon phases are required")
        if self.pivot_tol <= 0 or self.feas_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.refine_limit < 0:
            raise ValueError("refine_limit must be >= 0")


@dataclass
class ExtremalEvalResult:
    point: np.ndarray
    per_degree: np.ndarray
    value: float
    best_degree: int
    polynomial: HomogeneousPolynomial | None
    certified: float
    status: list[str]
    samples_used: int = 0
    refinements: int = 0
    label: str = BIAS_LABEL

    def to_dict(self) -> dict:
        return {
            "point": [[float(z.real), float(z.imag)] for z in self.point],
            "per_degree": self.per_degree.tolist(),
            "value": self.value,
            "best_degree": self.best_degree,
            "certified": self.certified,
            "status": self.status,
            "samples_used": self.samples_used,
            "refinements": self.refinements,
            "label": self.label,
            "polynomial": None if self.polynomial is None else self.polynomial.to_dict(),
        }


@dataclass
class _DegreeSystem:
    degree: int
    A: np.ndarray
    b: np.ndarray
    G: np.ndarray | None


def _real_rows(mono: np.ndarray) -> np.ndarray:
    """Real-embedding rows of Re(sum_a c_a m_a) in the variables (Re c, Im c)."""
    return np.hstack([mono.real, -mono.imag])


def _build_systems(E: WeightedDirectionSet, cfg: SolverConfig) -> list[_DegreeSystem]:
    phases = np.exp(2j * math.pi * np.arange(cfg.phases) / cfg.phases)
    active = ~E.zero_weight
    systems = []
    for k in range(1, cfg.max_degree + 1):
        mono = monomial_matrix(E.points, k, scaled=cfg.scaled_basis)
        rotated = (phases[:, None, None] * mono[active][None, :, :]).reshape(-1, mono.shape[1])
        A = _real_rows(rotated)
        b = np.tile(E.weights[active] ** k, cfg.phases)
        G = None
        if np.any(~active):
            z = mono[~active]
            G = np.vstack([_real_rows(z), _real_rows(-1j * z)])
        systems.append(_DegreeSystem(k, A, b, G))
    return systems


def _canonical(zeta: np.ndarray) -> tuple[np.ndarray, complex]:
    """Split zeta = s * unit with s the modulus times a canonical phase.

    The phase is taken from the first coordinate of modulus at least half the
    largest one, so zeta and t*zeta lead to the same LP up to rounding.
    """
    r = float(np.linalg.norm(zeta))
    mags = np.abs(zeta)
    j = int(np.flatnonzero(mags >= 0.5 * mags.max())[0])
    phase = zeta[j] / mags[j]
    s = r * phase
    return zeta / s, s


def _solve_point(systems: list[_DegreeSystem], E: WeightedDirectionSet, zeta: np.ndarray,
                 cfg: SolverConfig) -> ExtremalEvalResult:
    n = E.dimension
    K = cfg.max_degree
    if not np.any(zeta):
        return ExtremalEvalResult(zeta, np.zeros(K), 0.0, 1, None, 0.0, ["trivial"] * K, len(E))
    unit, s = _canonical(zeta)
    r = abs(s)
    opt = np.zeros(K)
    modulus = np.zeros(K)
    coeffs = [None] * K
    status = []
    for sys_ in systems:
        k = sys_.degree
        c = _real_rows(monomial_matrix(unit[None, :], k, scaled=cfg.scaled_basis))[0]
        res = maximize(c, sys_.A, sys_.b, sys_.G, rule=cfg.pivot_rule,
                       pivot_tol=cfg.pivot_tol, feas_tol=cfg.feas_tol)
        if res.status is LPStatus.UNBOUNDED:
            raise UnboundedDegree(k, zeta)
        if res.status is not LPStatus.OPTIMAL:
            raise SolverFailure(f"degree {k}: simplex ended with status {res.status.value}")
        opt[k - 1] = max(res.objective, 0.0)
        coeffs[k - 1] = res.x
        N = num_monomials(n, k)
        mono = monomial_matrix(unit[None, :], k, scaled=cfg.scaled_basis)[0]
        # polygon constraints only fix the phase up to 2 pi / m, so |p(unit)|
        # can exceed the optimum of Re p(unit)
        modulus[k - 1] = abs(mono @ (res.x[:N] + 1j * res.x[N:]))
        status.append(res.status.value)
    if not np.any(opt > 0) and np.any(E.zero_weight):
        raise InfeasibleZeroWeights(
            "zero-weight equality constraints force p(zeta) = 0 at every degree")
    degrees = np.arange(1, K + 1)
    v = opt ** (1.0 / degrees)
    best = int(np.argmax(v))
    shrink = math.cos(math.pi / cfg.phases)
    # shrink * p_k satisfies the exact modulus constraints on the samples
    certified = float(np.max((shrink * modulus) ** (1.0 / degrees)))
    k_star = best + 1
    x = coeffs[best]
    N = num_monomials(n, k_star)
    cplx = (x[:N] + 1j * x[N:]) * shrink
    if cfg.scaled_basis:
        p = HomogeneousPolynomial.from_scaled(n, k_star, cplx)
    else:
        p = HomogeneousPolynomial(n, k_star, cplx)
    # rotate so that p(zeta) = |p(zeta)| > 0
    value_at = p(zeta)
    if value_at != 0:
        p = p * (abs(value_at) / value_at)
    return ExtremalEvalResult(zeta, r * v, float(r * v[best]), k_star, p, r * certified,
                              status, len(E))


def _refined(E: WeightedDirectionSet, zeta: np.ndarray, cfg: SolverConfig) -> ExtremalEvalResult:
    res = _solve_point(_build_systems(E, cfg), E, zeta, cfg)
    if cfg.refine_limit == 0 or E.sampler is None or E.density == 0 or res.value == 0:
        return res
    current = E
    for i in range(cfg.refine_limit):
        current = current.sampler(2 * current.density)
        new = _solve_point(_build_systems(current, cfg), current, zeta, cfg)
        new.refinements = i + 1
        changed = abs(new.value - res.value) > 0.005 * res.value
        res = new
        if not changed:
            break
    return res


def psi_eval(E: WeightedDirectionSet, zeta, cfg: SolverConfig = SolverConfig()) -> ExtremalEvalResult:
    """Evaluate the truncated weighted homogeneous extremal function at zeta."""
    z = np.atleast_1d(np.asarray(zeta, dtype=complex))
    if z.shape[0] != E.dimension:
        raise ValueError(f"point has dimension {z.shape[0]}, E has {E.dimension}")
    return _refined(E, z, cfg)


class GridEvaluationError(ExtremalError):
    def __init__(self, results, errors):
        self.results = results
        self.errors = errors
        super().__init__(f"{len(errors)} of {len(results)} grid points failed: "
                         + "; ".join(f"[{i}] {e}" for i, e in sorted(errors.items())[:5]))


def psi_grid(E: WeightedDirectionSet, grid: Sequence, cfg: SolverConfig = SolverConfig(),
             threads: int = 1, raise_errors: bool = True) -> list[ExtremalEvalResult | None]:
    """psi_eval at every grid point, order-preserving.

    Failed points are None in the returned list; with ``raise_errors`` a
    :class:`GridEvaluationError` carrying the partial results is raised.
    """
    pts = [np.atleast_1d(np.asarray(z, dtype=complex)) for z in grid]
    if not pts:
        return []
    for z in pts:
        if z.shape[0] != E.dimension:
            raise ValueError("grid point dimension does not match E")
    systems = _build_systems(E, cfg) if cfg.refine_limit == 0 else None

    def one(z):
        try:
            if systems is not None:
                return _solve_point(systems, E, z, cfg), None
            return _refined(E, z, cfg), None
        except ExtremalError as exc:
            return None, exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(one, pts))
    else:
        out = [one(z) for z in pts]
    results = [r for r, _ in out]
    errors = {i: e for i, (_, e) in enumerate(out) if e is not None}
    if errors and raise_errors:
        raise GridEvaluationError(results, errors)
    return results


@dataclass
class CapacityEstimate:
    value: float
    zero_flag: bool
    max_psi: float
    argmax: np.ndarray | None
    samples: int
    diagnostics: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "zero_flag": self.zero_flag,
            "max_psi": self.max_psi,
            "argmax": None if self.argmax is None
            else [[float(z.real), float(z.imag)] for z in self.argmax],
            "samples": self.samples,
            "diagnostics": self.diagnostics,
        }


def capacity_homog(E: WeightedDirectionSet, cfg: SolverConfig = SolverConfig(),
                   sphere_samples: int = 64, seed: int = 0, threads: int = 1) -> CapacityEstimate:
    """Homogeneous capacity for the Euclidean norm of C^n: 1 / max of psi on the sphere."""
    pts = complex_sphere_points(E.dimension, sphere_samples, seed)
    results = psi_grid(E, pts, cfg, threads=threads, raise_errors=False)
    diagnostics = []
    for i, r in enumerate(results):
        if r is None:
            diagnostics.append(f"sample {i}: solver failure at {pts[i].tolist()}")
    if diagnostics:
        return CapacityEstimate(0.0, True, math.inf, None, len(pts), diagnostics)
    values = np.array([r.value for r in results])
    j = int(np.argmax(values))
    return CapacityEstimate(1.0 / values[j], False, float(values[j]), pts[j], len(pts))


@dataclass(frozen=True)
class HullMembership:
    inside: bool
    margin: float
    psi: float


def hull_member(E: WeightedDirectionSet, z, cfg: SolverConfig = SolverConfig()) -> HullMembership:
    """Is z in the homogeneous hull {psi < 1}?  margin = 1 - psi."""
    res = psi_eval(E, z, cfg)
    return HullMembership(res.value < 1.0, 1.0 - res.value, res.value)


# -- Baran's Poisson-integral formula in C^2 ----------------------------------

@dataclass(frozen=True)
class QuadratureConfig:
    epsabs: float = 1e-12
    epsrel: float = 1e-10
    limit: int = 400
    tol: float = 1e-8


def _poisson_remainder(norm, x: float, y: float, breakpoints, qc: QuadratureConfig) -> float:
    """(1/pi) * int_{-pi/2}^{pi/2} r(x + y tan(phi)) dphi for
    r(xi) = log ||(1, xi)|| - log |(1, xi)|_2, which is bounded."""

    def integrand(phi):
        xi = x + y * math.tan(phi)
        v = np.array([1.0, xi])
        return math.log(norm(v)) - 0.5 * math.log1p(xi * xi)

    pts = sorted({math.atan((p - x) / y) for p in breakpoints})
    eps = 1e-15
    lo, hi = -math.pi / 2 + eps, math.pi / 2 - eps
    val, err = integrate.quad(integrand, lo, hi, points=pts or None,
                              epsabs=qc.epsabs, epsrel=qc.epsrel, limit=qc.limit)
    if not math.isfinite(val) or err > qc.tol:
        raise SolverFailure(f"Poisson quadrature did not converge (error estimate {err:.2e})")
    return val / math.pi


def baran_psi(norm: Callable[[np.ndarray], float], z, qc: QuadratureConfig = QuadratureConfig(),
              breakpoints: Sequence[float] = ()) -> float:
    """Extremal function of the unit ball of a norm on R^2 by Baran's formula.

    psi(z1, z2) = |z1| exp(Pu(z2/z1)), u(xi) = log ||(1, xi)||, with Pu the
    Poisson integral over the real line.  The Poisson integral of
    log|(1, xi)|_2 is log|w + i| in closed form (Im w > 0); only the bounded
    remainder is integrated, after the substitution xi = x + y tan(phi) that
    maps the kernel to dphi / pi.  ``breakpoints`` lists xi where u has kinks.
    """
    z = np.asarray(z, dtype=complex)
    if z.shape != (2,):
        raise ValueError("Baran's formula is for points of C^2")
    z1, z2 = complex(z[0]), complex(z[1])
    if z1 == 0:
        if z2 == 0:
            return 0.0
        # swap coordinates; the swapped norm has the swapped unit ball
        swapped = lambda v: norm(np.array([v[1], v[0]]))  # noqa: E731
        return baran_psi(swapped, np.array([z2, z1]), qc,
                         [1.0 / p for p in breakpoints if p != 0])
    w = z2 / z1
    x, y = w.real, abs(w.imag)
    if y <= 1e-14 * max(1.0, abs(x)):
        return abs(z1) * float(norm(np.array([1.0, x])))
    pu = math.log(math.hypot(x, y + 1.0)) + _poisson_remainder(norm, x, y, breakpoints, qc)
    return abs(z1) * math.exp(pu)


def write_grid_csv(results: Sequence[ExtremalEvalResult], path) -> None:
    """Columns: point coordinates as re/im pairs, v_1..v_K, psi, certified."""
    if not results:
        with open(path, "w", newline="") as fh:
            fh.write("")
        return
    n = results[0].point.shape[0]
    K = results[0].per_degree.shape[0]
    header = [f"{part}{j + 1}" for j in range(n) for part in ("re", "im")]
    header += [f"v{k}" for k in range(1, K + 1)] + ["psi", "certified"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in results:
            row = [f"{x:.17g}" for z in r.point for x in (z.real, z.imag)]
            row += [f"{v:.17g}" for v in r.per_degree]
            row += [f"{r.value:.17g}", f"{r.certified:.17g}"]
            w.writerow(row)


def results_to_json(results: Sequence[ExtremalEvalResult]) -> str:
    return json.dumps([r.to_dict() for r in results], indent=2)
