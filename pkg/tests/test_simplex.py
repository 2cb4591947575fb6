import numpy as np
import pytest
from scipy.optimize import linprog

from siciak_support.simplex import LPStatus, maximize, solve_standard_form


def _highs(c, A, b, G=None):
    kw = {}
    if G is not None:
        kw = {"A_eq": G, "b_eq": np.zeros(G.shape[0])}
    return linprog(-c, A_ub=A, b_ub=b, bounds=[(None, None)] * len(c), method="highs", **kw)


@pytest.mark.parametrize("rule", ["dantzig", "bland"])
def test_random_lps_match_highs(rule):
    r = np.random.default_rng(7)
    for trial in range(40):
        n = int(r.integers(2, 9))
        m = int(r.integers(n + 1, 200))
        A = r.normal(size=(m, n))
        if trial % 3 == 0:
            A = np.round(A)  # many ties and degenerate vertices
        b = r.uniform(0, 2, size=m)
        if trial % 4 == 0:
            b[: m // 3] = 0.0
        c = r.normal(size=n)
        res = maximize(c, A, b, rule=rule)
        ref = _highs(c, A, b)
        if ref.status == 3:
            assert res.status is LPStatus.UNBOUNDED
        else:
            assert res.status is LPStatus.OPTIMAL
            assert res.objective == pytest.approx(-ref.fun, rel=1e-7, abs=1e-9)
            assert np.all(A @ res.x <= b + 1e-7)


def test_equality_rows():
    r = np.random.default_rng(3)
    A = r.normal(size=(60, 4))
    b = r.uniform(0.5, 1.5, size=60)
    G = r.normal(size=(1, 4))
    c = r.normal(size=4)
    res = maximize(c, A, b, G)
    ref = _highs(c, A, b, G)
    assert res.status is LPStatus.OPTIMAL
    assert res.objective == pytest.approx(-ref.fun, rel=1e-8)
    assert abs(G @ res.x) < 1e-9


def test_unbounded_direction_reported():
    # x2 is unconstrained from above
    res = maximize(np.array([0.0, 1.0]), np.array([[1.0, 0.0], [-1.0, 0.0]]), np.ones(2))
    assert res.status is LPStatus.UNBOUNDED


def test_negative_rhs_rejected():
    with pytest.raises(ValueError):
        maximize(np.ones(1), np.ones((1, 1)), -np.ones(1))


def test_duplicate_rows_are_harmless():
    A = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [-1.0, -1.0], [2.0, 0.0]])
    b = np.array([1.0, 0.5, 1.0, 1.0, 3.0])
    res = maximize(np.array([1.0, 1.0]), A, b)
    assert res.objective == pytest.approx(1.5)


def test_standard_form_infeasible():
    res = solve_standard_form(np.array([[1.0, 1.0]]), np.array([-1.0]) * -1,
                              np.array([1.0, 1.0]))
    assert res.status is LPStatus.OPTIMAL
    bad = solve_standard_form(np.array([[1.0, 1.0], [1.0, 1.0]]), np.array([1.0, 2.0]),
                              np.array([1.0, 1.0]))
    assert bad.status is LPStatus.INFEASIBLE


def test_unknown_rule():
    with pytest.raises(ValueError):
        solve_standard_form(np.eye(2), np.ones(2), np.ones(2), rule="steepest")


def test_perturbation_does_not_change_optimum():
    r = np.random.default_rng(11)
    A = np.round(r.normal(size=(150, 6)))
    b = np.zeros(150)
    b[75:] = 1.0
    c = r.normal(size=6)
    on = maximize(c, A, b, perturb=1e-8)
    off = maximize(c, A, b, perturb=0.0)
    assert on.status == off.status
    if on.status is LPStatus.OPTIMAL:
        assert on.objective == pytest.approx(off.objective, rel=1e-8, abs=1e-10)
