"""Dense revised simplex for the small LPs behind the extremal solver.

The extremal problems have a handful of free variables (real and imaginary
parts of polynomial coefficients) and thousands of inequality rows, so
:func:`maximize` solves the dual standard-form problem

    minimize b @ y   subject to   A.T @ y + G.T @ (w+ - w-) = c,  y, w+, w- >= 0

whose basis is only as large as the number of primal variables.  Primal
optimal coefficients are the simplex multipliers of that problem.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"
    ITERATION_LIMIT = "iteration_limit"
    NUMERICAL = "numerical_failure"


@dataclass
class LPResult:
    status: LPStatus
    x: np.ndarray | None
    objective: float
    iterations: int
    info: dict = field(default_factory=dict)


@dataclass
class _StandardFormResult:
    status: LPStatus
    y: np.ndarray | None
    multipliers: np.ndarray | None
    objective: float
    iterations: int
    dropped_rows: np.ndarray


class _SingularBasis(Exception):
    pass


class _Tableau:
    """Revised simplex state: basis indices, explicit B^-1, basic values."""

    refactor_every = 64

    def __init__(self, M, rhs, basis):
        self.M = M
        self.rhs = rhs
        self.basis = np.array(basis, dtype=np.int64)
        self.since_refactor = 0
        self.refactor()

    def refactor(self):
        B = self.M[:, self.basis]
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise _SingularBasis from exc
        self.xB = self.Binv @ self.rhs
        np.maximum(self.xB, 0.0, out=self.xB)
        self.since_refactor = 0

    def pivot(self, r: int, q: int, u: np.ndarray):
        theta = self.xB[r] / u[r]
        self.xB -= theta * u
        self.xB[r] = theta
        np.maximum(self.xB, 0.0, out=self.xB)
        pivot_row = self.Binv[r] / u[r]
        self.Binv -= np.outer(u, pivot_row)
        self.Binv[r] = pivot_row
        self.basis[r] = q
        self.since_refactor += 1
        if self.since_refactor >= self.refactor_every:
            self.refactor()


def _run_phase(tab: _Tableau, cost: np.ndarray, allowed: np.ndarray, rule: str,
               pivot_tol: float, opt_tol: float, max_iter: int, stall_limit: int):
    """Iterate to optimality of min cost @ y.  Returns (status, iterations)."""
    M = tab.M
    scale = max(1.0, float(np.max(np.abs(cost[allowed]))) if allowed.any() else 1.0)
    d_tol = opt_tol * scale
    use_bland = rule == "bland"
    harris_tol = 1e-11
    best_obj = np.inf
    stall = 0
    it = 0
    while it < max_iter:
        pi = cost[tab.basis] @ tab.Binv
        d = cost - pi @ M
        d[~allowed] = 0.0
        d[tab.basis] = 0.0
        candidates = np.flatnonzero(d < -d_tol)
        if candidates.size == 0:
            if tab.since_refactor:
                # confirm on a fresh factorization before stopping
                tab.refactor()
                continue
            return LPStatus.OPTIMAL, it
        if not use_bland:
            candidates = candidates[np.argsort(d[candidates], kind="stable")]
        # A column without a positive pivot entry is skipped in favour of the
        # next candidate: on ill-conditioned bases its reduced cost is often
        # rounding noise.  Unboundedness needs every candidate to agree.
        pos = np.empty(0, dtype=np.int64)
        for q in candidates:
            u = tab.Binv @ M[:, q]
            u_tol = pivot_tol * max(1.0, float(np.max(np.abs(u))))
            pos = np.flatnonzero(u > u_tol)
            if pos.size:
                break
        if pos.size == 0:
            if tab.since_refactor:
                tab.refactor()
                continue
            return LPStatus.UNBOUNDED, it
        it += 1
        if use_bland:
            ratios = tab.xB[pos] / u[pos]
            rmin = ratios.min()
            ties = pos[ratios <= rmin + 1e-12 * max(1.0, abs(rmin))]
            # Bland's leaving rule: lowest variable index among the minimal ratios
            r = int(ties[np.argmin(tab.basis[ties])])
        else:
            # Harris two-pass ratio test: bound the step with slightly relaxed
            # feasibility, then take the largest pivot element under that bound
            delta = harris_tol * max(1.0, float(np.max(tab.xB)))
            bound = np.min((tab.xB[pos] + delta) / u[pos])
            ok = pos[tab.xB[pos] / u[pos] <= bound]
            r = int(ok[np.argmax(u[ok])])
        tab.pivot(r, q, u)
        obj = float(cost[tab.basis] @ tab.xB)
        if obj < best_obj - 1e-12 * max(1.0, abs(best_obj)):
            best_obj = obj
            stall = 0
        else:
            stall += 1
            if not use_bland and stall > stall_limit:
                log.debug("simplex stalled for %d pivots; switching to Bland's rule", stall)
                use_bland = True
    return LPStatus.ITERATION_LIMIT, max_iter


def solve_standard_form(M, rhs, cost, *, rule: str = "dantzig", pivot_tol: float = 1e-9,
                        feas_tol: float = 1e-9, opt_tol: float = 1e-10,
                        max_iter: int = 50_000, stall_limit: int = 50,
                        perturb: float = 1e-8) -> _StandardFormResult:
    """min cost @ y subject to M y = rhs, y >= 0 by the two-phase method.

    ``rule`` is ``"bland"`` (smallest-index entering variable throughout) or
    ``"dantzig"`` (most negative reduced cost, falling back to Bland's rule
    once the objective stalls, which still guarantees termination).  Phase 2
    runs on a randomly bound-shifted rhs of relative size ``perturb`` (0
    disables it) to avoid stalling on degenerate vertices.  A basis
    that becomes numerically singular ends the solve with ``NUMERICAL``.
    """
    if rule not in ("bland", "dantzig"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    try:
        return _two_phase(M, rhs, cost, rule, pivot_tol, feas_tol, opt_tol, max_iter,
                          stall_limit, perturb)
    except _SingularBasis:
        return _StandardFormResult(LPStatus.NUMERICAL, None, None, np.nan, 0,
                                   np.array([], dtype=int))


def _two_phase(M, rhs, cost, rule, pivot_tol, feas_tol, opt_tol, max_iter, stall_limit, perturb):
    M = np.array(M, dtype=float)
    rhs = np.array(rhs, dtype=float)
    cost = np.asarray(cost, dtype=float)
    m, ncols = M.shape
    flip = np.where(rhs < 0, -1.0, 1.0)
    M *= flip[:, None]
    rhs *= flip

    # phase 1 with one artificial column per row
    Mf = np.hstack([M, np.eye(m)])
    cost1 = np.concatenate([np.zeros(ncols), np.ones(m)])
    allowed = np.ones(ncols + m, dtype=bool)
    tab = _Tableau(Mf, rhs, np.arange(ncols, ncols + m))
    status, it1 = _run_phase(tab, cost1, allowed, rule, pivot_tol, opt_tol, max_iter, stall_limit)
    if status is not LPStatus.OPTIMAL:
        return _StandardFormResult(status, None, None, np.nan, it1, np.array([], dtype=int))
    infeas = float(cost1[tab.basis] @ tab.xB)
    if infeas > feas_tol * max(1.0, float(np.abs(rhs).sum())):
        return _StandardFormResult(LPStatus.INFEASIBLE, None, None, np.nan, it1,
                                   np.array([], dtype=int))

    # drive remaining (zero-level) artificials out; rows that cannot be
    # pivoted on are linearly dependent and get dropped
    keep_rows = np.ones(m, dtype=bool)
    for r in range(m):
        if tab.basis[r] < ncols:
            continue
        row = tab.Binv[r] @ M
        row[tab.basis[tab.basis < ncols]] = 0.0
        j = int(np.argmax(np.abs(row)))
        if abs(row[j]) > 1e-9 * max(1.0, float(np.max(np.abs(M[:, j])))):
            u = tab.Binv @ Mf[:, j]
            tab.pivot(r, j, u)
        else:
            keep_rows[r] = False
    dropped = np.flatnonzero(~keep_rows)
    basis = tab.basis[keep_rows]
    M2 = M[keep_rows]
    rhs2 = rhs[keep_rows]
    allowed2 = np.ones(ncols, dtype=bool)
    status, it2, tab2 = LPStatus.NUMERICAL, 0, None
    if perturb > 0:
        # shift the basic bounds by small random amounts so that degenerate
        # vertices split; the final basis is then re-checked on the true rhs
        rng = np.random.default_rng(12345)
        shift = perturb * max(1.0, float(np.max(np.abs(rhs2)))) * (1.0 + rng.random(basis.size))
        tab2 = _Tableau(M2, rhs2 + M2[:, basis] @ shift, basis)
        status, it2 = _run_phase(tab2, cost, allowed2, rule, pivot_tol, opt_tol, max_iter,
                                 stall_limit)
        if status is LPStatus.OPTIMAL:
            tab2.rhs = rhs2
            xB = tab2.Binv @ rhs2
            if float(xB.min()) >= -feas_tol * max(1.0, float(np.abs(xB).max())):
                tab2.xB = np.maximum(xB, 0.0)
            else:
                status = LPStatus.NUMERICAL
    if status is not LPStatus.OPTIMAL and status is not LPStatus.UNBOUNDED:
        log.debug("perturbed phase 2 ended with %s; rerunning unperturbed", status.value)
        tab2 = _Tableau(M2, rhs2, basis)
        status, it_plain = _run_phase(tab2, cost, allowed2, rule, pivot_tol, opt_tol, max_iter,
                                      stall_limit)
        it2 += it_plain
    iterations = it1 + it2
    if status is not LPStatus.OPTIMAL:
        return _StandardFormResult(status, None, None, np.nan, iterations, dropped)
    y = np.zeros(ncols)
    y[tab2.basis] = tab2.xB
    pi = np.zeros(m)
    pi[keep_rows] = cost[tab2.basis] @ tab2.Binv
    pi *= flip
    return _StandardFormResult(LPStatus.OPTIMAL, y, pi, float(cost @ y), iterations, dropped)


def maximize(c, A, b, G=None, **kwargs) -> LPResult:
    """max c @ x subject to A x <= b and G x = 0, with x free and b >= 0.

    ``UNBOUNDED`` is reported when the dual standard-form problem has no
    feasible point.  Keyword arguments go to :func:`solve_standard_form`.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(b < 0):
        raise ValueError("right-hand side must be non-negative so that x = 0 is feasible")
    # unit-norm rows leave the feasible set unchanged and keep bases well scaled
    norms = np.linalg.norm(A, axis=1)
    nz = norms > 0
    A = A[nz] / norms[nz, None]
    b = b[nz] / norms[nz]
    # repeated rows (e.g. antipodal samples under odd degree) give duplicate
    # dual columns; keep the tightest copy of each
    _, first, inverse = np.unique(np.round(A, 12), axis=0, return_index=True,
                                  return_inverse=True)
    inverse = inverse.reshape(-1)
    tight = np.full(first.size, np.inf)
    np.minimum.at(tight, inverse, b)
    A, b = A[first], tight
    cols = [A.T]
    costs = [b]
    if G is not None and len(G):
        G = np.asarray(G, dtype=float)
        gn = np.linalg.norm(G, axis=1)
        G = G[gn > 0] / gn[gn > 0, None]
        cols += [G.T, -G.T]
        costs += [np.zeros(G.shape[0]), np.zeros(G.shape[0])]
    M = np.hstack(cols)
    cost = np.concatenate(costs)
    res = solve_standard_form(M, c, cost, **kwargs)
    info = {"dropped_rows": res.dropped_rows.tolist()}
    if res.status is LPStatus.INFEASIBLE:
        return LPResult(LPStatus.UNBOUNDED, None, np.inf, res.iterations, info)
    if res.status is LPStatus.UNBOUNDED:
        # an unbounded dual would mean an infeasible primal, impossible for b >= 0
        return LPResult(LPStatus.NUMERICAL, None, np.nan, res.iterations, info)
    if res.status is not LPStatus.OPTIMAL:
        return LPResult(res.status, None, np.nan, res.iterations, info)
    x = res.multipliers
    return LPResult(LPStatus.OPTIMAL, x, float(c @ x), res.iterations, info)
