"""Convex support bounds from Radon support intervals on a direction set E.

For directions omega in E with Radon data supported in [a_omega, b_omega]
the support of u lies in {x : <x, theta> <= Psi_{E,sigma}(theta)} with
sigma(omega) = max(-a_omega, b_omega).  Bodies are kept as half-space lists;
in the plane they also carry their vertex polygon.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .entire import RayGrid, indicator_estimate
from .extremal import (ExtremalError, GridEvaluationError, SolverConfig, UnboundedDegree,
                       WeightedDirectionSet, psi_grid, real_sphere_directions)
from .fields import ScalarField
from .radon import (ProfileGrid, RadonQuadrature, SupportInterval, detect_support,
                    LineTransform, radon_profile)

REFINED_LABEL = "conditional on regularity hypotheses (semicontinuous a, b; E = closure of interior)"


class CapacityZeroSuspicion(ExtremalError):
    """The extremal LP was unbounded: E looks pluripolar at the tested degree."""


class InfeasibleBody(ValueError):
    """The half-spaces have empty intersection (inconsistent interval data)."""


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")


@dataclass(frozen=True)
class DirectionalIntervalData:
    directions: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        d = np.atleast_2d(np.asarray(self.directions, dtype=float))
        a = np.broadcast_to(np.asarray(self.a, dtype=float), (d.shape[0],)).copy()
        b = np.broadcast_to(np.asarray(self.b, dtype=float), (d.shape[0],)).copy()
        if not np.allclose(np.linalg.norm(d, axis=1), 1.0, atol=1e-12):
            raise ValueError("directions must be unit vectors")
        if np.any(a > b):
            raise ValueError("every interval needs a <= b")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("interval endpoints must be finite")
        for x in (d, a, b):
            x.setflags(write=False)
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def sigma(self) -> np.ndarray:
        return np.maximum(np.maximum(-self.a, self.b), 0.0)

    @classmethod
    def from_intervals(cls, directions, intervals: list[SupportInterval]) -> "DirectionalIntervalData":
        return cls(directions, [s.a for s in intervals], [s.b for s in intervals])

    def scaled(self, lam: float) -> "DirectionalIntervalData":
        return DirectionalIntervalData(self.directions, lam * self.a, lam * self.b)

    def to_dict(self) -> dict:
        return {"directions": self.directions.tolist(), "a": self.a.tolist(),
                "b": self.b.tolist()}

    @classmethod
    def from_dict(cls, d) -> "DirectionalIntervalData":
        return cls(d["directions"], d["a"], d["b"])


def build_sigma(data: DirectionalIntervalData) -> WeightedDirectionSet:
    """E with weights gamma = sigma; zero sigma becomes an equality constraint."""
    return WeightedDirectionSet(data.directions.astype(complex), data.sigma, label="sigma")


@dataclass
class ConvexBody:
    """{x : <x, normals_i> <= offsets_i for all i}, with the 2-d polygon if known."""

    normals: np.ndarray
    offsets: np.ndarray
    polygon: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        self.normals = np.atleast_2d(np.asarray(self.normals, dtype=float))
        self.offsets = np.asarray(self.offsets, dtype=float).reshape(-1)
        if self.normals.shape[0] == 0 or self.normals.shape[0] != self.offsets.size:
            raise ValueError("a body needs a non-empty list of half-spaces")

    @property
    def dimension(self) -> int:
        return self.normals.shape[1]

    def slack(self, x) -> np.ndarray:
        """min_i (h_i - <x, omega_i>) for each point; negative outside."""
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        return np.min(self.offsets[None, :] - pts @ self.normals.T, axis=1)

    def support(self, theta) -> np.ndarray:
        """Supporting function of the polygon at unit directions (2-d only)."""
        if self.polygon is None:
            raise ValueError("supporting function needs the vertex polygon")
        th = np.atleast_2d(np.asarray(theta, dtype=float))
        return np.max(th @ self.polygon.T, axis=1)

    def to_dict(self) -> dict:
        return {
            "halfspaces": [list(map(float, w)) + [float(h)]
                           for w, h in zip(self.normals, self.offsets)],
            "polygon": None if self.polygon is None else self.polygon.tolist(),
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, d) -> "ConvexBody":
        hs = np.asarray(d["halfspaces"], dtype=float)
        poly = None if d.get("polygon") is None else np.asarray(d["polygon"], dtype=float)
        return cls(hs[:, :-1], hs[:, -1], poly, d.get("label", ""))


def body_contains(body: ConvexBody, x, tol: float = 1e-9):
    """Membership with ``tol`` slack on every half-space."""
    s = body.slack(x) >= -tol
    return bool(s[0]) if np.ndim(x) == 1 else s


def _chebyshev_center(normals, offsets):
    n = normals.shape[1]
    A = np.hstack([normals, np.ones((normals.shape[0], 1))])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    bounds = [(None, None)] * n + [(None, None)]
    res = linprog(c, A_ub=A, b_ub=offsets, bounds=bounds, method="highs")
    if res.status == 3:
        raise ValueError("half-spaces do not bound a body")
    if res.status != 0:
        raise InfeasibleBody(f"half-space system has no solution ({res.message})")
    return res.x[:n], float(res.x[-1])


def _line_cross(u1, h1, u2, h2):
    det = u1[0] * u2[1] - u1[1] * u2[0]
    return np.array([(h1 * u2[1] - h2 * u1[1]) / det, (u1[0] * h2 - u2[0] * h1) / det])


def halfplane_polygon(normals, offsets, tol: float = 1e-9) -> np.ndarray:
    """Counterclockwise vertices of a bounded intersection of half-planes.

    Lines are sorted by normal angle; a constraint is dropped while the
    crossing of its two neighbours already satisfies it (slack test).
    """
    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    center, radius = _chebyshev_center(normals, offsets)
    scale = max(1.0, float(np.max(np.abs(offsets))))
    if radius < -tol * scale:
        raise InfeasibleBody(f"half-planes have empty intersection (depth {radius:.3e})")
    # translate so the body contains the origin with positive offsets
    u = normals / np.linalg.norm(normals, axis=1)[:, None]
    h = (offsets - normals @ center) / np.linalg.norm(normals, axis=1)
    ang = np.arctan2(u[:, 1], u[:, 0])
    order = np.lexsort((h, np.round(ang, 12)))
    keep = []
    for i in order:
        # parallel duplicates: the first (smallest offset) wins
        if keep and abs(ang[i] - ang[keep[-1]]) < 1e-12:
            continue
        keep.append(int(i))
    idx = keep
    changed = True
    while changed and len(idx) > 3:
        changed = False
        j = 0
        while j < len(idx) and len(idx) > 3:
            prev, cur, nxt = idx[j - 1], idx[j], idx[(j + 1) % len(idx)]
            cross = u[prev, 0] * u[nxt, 1] - u[prev, 1] * u[nxt, 0]
            if cross > 1e-14:
                v = _line_cross(u[prev], h[prev], u[nxt], h[nxt])
                if v @ u[cur] <= h[cur] + tol * scale:
                    idx.pop(j)
                    changed = True
                    continue
            j += 1
    verts = []
    for j in range(len(idx)):
        a, b = idx[j - 1], idx[j]
        verts.append(_line_cross(u[a], h[a], u[b], h[b]))
    verts = np.array(verts)
    if np.any(verts @ u.T - h[None, :] > 1e-7 * scale):
        raise InfeasibleBody("vertex polygon violates a half-plane; the body is degenerate")
    return verts + center


def make_body(normals, offsets, label: str = "") -> ConvexBody:
    normals = np.atleast_2d(np.asarray(normals, dtype=float))
    offsets = np.asarray(offsets, dtype=float)
    poly = halfplane_polygon(normals, offsets) if normals.shape[1] == 2 else None
    if poly is None:
        _, radius = _chebyshev_center(normals, offsets)
        if radius < -1e-9 * max(1.0, float(np.max(np.abs(offsets)))):
            raise InfeasibleBody(f"half-spaces have empty intersection (depth {radius:.3e})")
    return ConvexBody(normals, offsets, poly, label)


def direction_grid(n: int, count: int | None = None) -> np.ndarray:
    """Unit directions: uniform angles in the plane, Fibonacci points on S^2."""
    if n == 2:
        count = count or 256
        t = 2 * math.pi * np.arange(count) / count
        return np.column_stack([np.cos(t), np.sin(t)])
    if n == 3:
        return real_sphere_directions(3, count or 2048).points.real.copy()
    raise ValueError("direction grids are provided for n = 2 and 3")


def localize(E: WeightedDirectionSet, grid=None, cfg: SolverConfig = SolverConfig(),
             threads: int = 1) -> ConvexBody:
    """Half-spaces <x, theta> <= Psi_hat_{E,sigma}(theta) over a direction grid."""
    thetas = direction_grid(E.dimension) if grid is None else np.atleast_2d(np.asarray(grid, float))
    try:
        results = psi_grid(E, thetas.astype(complex), cfg, threads=threads)
    except GridEvaluationError as exc:
        unb = [e for e in exc.errors.values() if isinstance(e, UnboundedDegree)]
        if unb:
            raise CapacityZeroSuspicion(
                f"extremal LP unbounded at degree {unb[0].degree} in {len(unb)} grid directions; "
                "E may have zero homogeneous capacity") from exc
        raise
    h = np.array([r.value for r in results])
    return make_body(thetas, h, "Psi_hat half-spaces")


def localize_refined(E: WeightedDirectionSet, data: DirectionalIntervalData, grid=None,
                     cfg: SolverConfig = SolverConfig(), threads: int = 1,
                     base: ConvexBody | None = None) -> ConvexBody:
    """``localize`` intersected with the slabs a_omega <= <x, omega> <= b_omega."""
    base = base or localize(E, grid, cfg, threads)
    d = data.directions
    normals = np.vstack([base.normals, d, -d])
    offsets = np.concatenate([base.offsets, data.b, -data.a])
    try:
        return make_body(normals, offsets, REFINED_LABEL)
    except InfeasibleBody as exc:
        raise InfeasibleBody(f"interval data are inconsistent: {exc}") from exc


def hausdorff_to_disc(body: ConvexBody, center, radius: float, count: int = 4096) -> float:
    """Hausdorff distance between a planar body and a disc via supporting functions."""
    t = 2 * math.pi * np.arange(count) / count
    th = np.column_stack([np.cos(t), np.sin(t)])
    return float(np.max(np.abs(body.support(th) - (th @ np.asarray(center, float) + radius))))


def support_samples(field: ScalarField, count: int, rng: np.random.Generator,
                    boundary_fraction: float = 0.5) -> np.ndarray:
    """Points of the closed support of a compactly supported field.

    A share of the points sits on the boundary spheres of the components,
    where containment is tightest.
    """
    if not field.compact:
        raise ValueError("support samples need a compactly supported family")
    live = np.flatnonzero(field.amplitudes != 0)
    if live.size == 0:
        return np.zeros((0, field.dimension))
    n = field.dimension
    comp = rng.choice(live, size=count)
    dirs = rng.normal(size=(count, n))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    radial = rng.uniform(size=count) ** (1.0 / n)
    radial[rng.uniform(size=count) < boundary_fraction] = 1.0
    return field.centers[comp] + (field.radii[comp] * radial)[:, None] * dirs


@dataclass
class ThresholdRun:
    eps_rel: float
    intervals: DirectionalIntervalData
    body: ConvexBody
    refined: ConvexBody | None
    contained: float
    contained_refined: float | None
    margin: float
    margin_refined: float | None

    def to_dict(self) -> dict:
        return {"eps_rel": self.eps_rel, "intervals": self.intervals.to_dict(),
                "body": self.body.to_dict(),
                "refined": None if self.refined is None else self.refined.to_dict(),
                "contained": self.contained, "contained_refined": self.contained_refined,
                "margin": self.margin, "margin_refined": self.margin_refined}


@dataclass
class HelgasonReport:
    runs: list[ThresholdRun]
    samples: int
    verdict: str
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "samples": self.samples, "notes": self.notes,
                "runs": [r.to_dict() for r in self.runs]}


def helgason_pipeline(field: ScalarField, directions, thresholds=(1e-6,),
                      cfg: SolverConfig = SolverConfig(), grid=None,
                      profile_grid: ProfileGrid = ProfileGrid(),
                      qc: RadonQuadrature = RadonQuadrature(), refine: bool = True,
                      samples: int = 500, seed: int = 0, threads: int = 1,
                      extend_tail: bool = False) -> HelgasonReport:
    """Radon profiles -> support intervals -> sigma -> bodies -> containment.

    One run per detection threshold, so the sensitivity to the threshold is
    part of the report.  ``extend_tail`` is passed to :func:`detect_support`
    (thresholds then no longer matter for compactly supported fields).
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    dirs = dirs / np.linalg.norm(dirs, axis=1)[:, None]
    try:
        profiles = [radon_profile(field, om, profile_grid, qc) for om in dirs]
    except Exception as exc:
        raise PipelineError("radon_profile", exc) from exc
    try:
        pts = support_samples(field, samples, np.random.default_rng(seed))
    except Exception as exc:
        raise PipelineError("support_samples", exc) from exc
    runs = []
    for eps in thresholds:
        try:
            data = DirectionalIntervalData.from_intervals(
                dirs, [detect_support(p, eps, extend_tail) for p in profiles])
        except Exception as exc:
            raise PipelineError("detect_support", exc) from exc
        E = build_sigma(data)
        try:
            body = localize(E, grid, cfg, threads)
        except Exception as exc:
            raise PipelineError("localize", exc) from exc
        refined = None
        if refine:
            try:
                refined = localize_refined(E, data, grid, cfg, threads, base=body)
            except Exception as exc:
                raise PipelineError("localize_refined", exc) from exc
        slack = body.slack(pts) if len(pts) else np.array([math.inf])
        inside = float(np.mean(slack >= -1e-9))
        r_slack = refined.slack(pts) if refined is not None and len(pts) else None
        runs.append(ThresholdRun(
            eps, data, body, refined, inside,
            None if r_slack is None else float(np.mean(r_slack >= -1e-9)),
            float(np.min(slack)), None if r_slack is None else float(np.min(r_slack))))
    ok = all(r.contained == 1.0 for r in runs)
    notes = [f"refined bodies are {REFINED_LABEL}"] if refine else []
    return HelgasonReport(runs, len(pts), "PASS" if ok else "FAIL", notes)


@dataclass
class IndicatorSupportReport:
    plus: float
    minus: float
    b: float
    a: float
    passed: bool
    flags: list[str]

    def to_dict(self) -> dict:
        return {"i_plus": self.plus, "i_minus": self.minus, "a": self.a, "b": self.b,
                "passed": self.passed, "flags": self.flags}


def indicator_support_check(field: ScalarField, omega, interval: SupportInterval,
                            tol: float = 0.02, grid: RayGrid | None = None,
                            qc: RadonQuadrature = RadonQuadrature()) -> IndicatorSupportReport:
    """Growth of z -> u_hat(z omega) along +i and -i against b_omega and -a_omega."""
    om = np.asarray(omega, dtype=float)
    scale = max(abs(interval.a), abs(interval.b), 1.0)
    grid = grid or RayGrid(t_max=300.0 / scale, count=24)

    f = LineTransform(field, om, grid.t_max, qc)

    flags = []
    est = []
    for direction in (1j, -1j):
        e = indicator_estimate(f, np.array([direction]), 1.0, grid)
        est.append(e.value)
        flags += [f"{'+' if direction == 1j else '-'}i: {x}" for x in e.flags]
    passed = est[0] <= interval.b + tol * scale and est[1] <= -interval.a + tol * scale
    return IndicatorSupportReport(est[0], est[1], interval.b, interval.a, bool(passed), flags)


def write_polygon_csv(body: ConvexBody, path) -> None:
    if body.polygon is None:
        raise ValueError("only planar bodies have a vertex listing")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y"])
        for v in body.polygon:
            w.writerow([f"{v[0]:.17g}", f"{v[1]:.17g}"])


def body_to_json(body: ConvexBody) -> str:
    return json.dumps(body.to_dict(), indent=2)
