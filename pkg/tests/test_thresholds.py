"""Neighborhood membership sets, sufficient-condition checks, transitions."""

import numpy as np
import pytest

from acdd import powerfun as pf
from acdd.dynamics import InitialCondition, SimConfig
from acdd.graphs import generate_er, make_graph
from acdd.thresholds import (
    ThresholdSpec,
    check_case1,
    check_case2,
    check_corollary4,
    in_xi,
    neighborhood_min_avg,
    verify_transition,
)


def _by_id(reports, condition_id):
    return next(r for r in reports if r.condition_id == condition_id)


def test_min_neighborhood_average_k3(k3):
    state = np.array([1.0, 0.5, 0.0])
    assert neighborhood_min_avg(state, k3) == pytest.approx(0.25, abs=1e-15)


def test_min_neighborhood_average_extremes(k3):
    assert neighborhood_min_avg(np.ones(3), k3) == 1.0
    assert neighborhood_min_avg(np.zeros(3), k3) == 0.0


def test_membership_boundaries(k3):
    state = np.array([1.0, 0.5, 0.0])
    assert in_xi(np.ones(3), k3, 0.999, strict=True)
    assert not in_xi(state, k3, 0.3, strict=False)
    assert in_xi(state, k3, 0.25, strict=False)
    assert not in_xi(state, k3, 0.25, strict=True)


def test_membership_monotone(k3):
    rng = np.random.default_rng(0)
    for _ in range(20):
        state = rng.uniform(0, 1, 3)
        bigger = np.clip(state + rng.uniform(0, 0.3, 3), 0, 1)
        tau = rng.uniform(0.05, 0.95)
        if in_xi(state, k3, tau):
            assert in_xi(bigger, k3, tau)


def test_membership_limits(k3):
    rng = np.random.default_rng(1)
    state = rng.uniform(0.01, 1.0, 3)
    assert in_xi(state, k3, 1e-12)
    assert not in_xi(state, k3, 1.0, strict=True)


def test_case1_identity_f_fails_sum_bound():
    spec = ThresholdSpec(tau1=0.5, tau2=0.5, alpha=0.95, beta=0.95)
    reports = check_case1(pf.poly(0.0, 1.0), pf.poly(0.25, -0.5, 0.25), spec, 1001)
    assert _by_id(reports, "eq10").satisfied
    assert not _by_id(reports, "eq11").satisfied


def test_case1_logistic_tight_alpha():
    spec = ThresholdSpec(tau1=0.6, tau2=0.5, alpha=0.99, beta=1.0)
    reports = check_case1(pf.logistic(-10.0, 5.0), pf.poly(0.0), spec, 1001)
    assert _by_id(reports, "eq10").satisfied
    eq11 = _by_id(reports, "eq11")
    assert not eq11.satisfied
    assert eq11.worst_case[1] == pytest.approx(-0.0033, abs=5e-4)
    assert eq11.check_kind == "grid-sufficient"


def test_case1_logistic_looser_alpha():
    # with alpha above sup f the sum bound passes, but the pointwise
    # condition now fails near z -> 1 where f(z)/z ~ 0.9933 < alpha
    spec = ThresholdSpec(tau1=0.6, tau2=0.5, alpha=0.994, beta=1.0)
    reports = check_case1(pf.logistic(-10.0, 5.0), pf.poly(0.0), spec, 1001)
    assert _by_id(reports, "eq11").satisfied
    assert not _by_id(reports, "eq10").satisfied


def test_case2_double_square():
    spec = ThresholdSpec(tau1=0.5, tau2=0.6, alpha=1.1, beta=1.1)
    reports = check_case2(pf.poly(0.0), pf.poly(2.0, -4.0, 2.0), spec, 1001)
    assert _by_id(reports, "eq10").satisfied
    assert not _by_id(reports, "eq12").satisfied


def test_case2_linear_g():
    spec = ThresholdSpec(tau1=0.5, tau2=0.5, alpha=0.9, beta=0.9)
    reports = check_case2(pf.poly(0.0), pf.poly(1.0, -1.0), spec, 1001)
    assert _by_id(reports, "eq10").satisfied
    eq12 = _by_id(reports, "eq12")
    assert not eq12.satisfied and eq12.check_kind == "grid-sufficient"


def test_corollary4_sum_bound():
    # f + g = x^2 + (1 - x) has supremum 1 on [0,1]
    reports = check_corollary4(pf.poly(0.0, 0.0, 1.0), pf.poly(1.0, -1.0),
                               0.5, 1.05, 1001)
    assert _by_id(reports, "cor4-sum").satisfied
    reports = check_corollary4(pf.poly(0.0, 0.0, 1.0), pf.poly(1.0, -1.0),
                               0.5, 0.95, 1001)
    assert not _by_id(reports, "cor4-sum").satisfied


def _transition_cfg(initial_sigma, seed=0):
    g_b = generate_er(100, 0.12, False, seed)
    g_r = generate_er(100, 0.12, False, seed + 1)
    return SimConfig(
        graph_B=g_b, graph_R=g_r,
        f=pf.logistic(-10.0, 5.0), g=pf.poly(2.0, -4.0, 2.0),
        initial=InitialCondition("constant", sigma0=initial_sigma),
        t_end=100.0, step=0.01, record_every=100, events=(), seed=seed)


def test_transition_up_from_point_six():
    spec = ThresholdSpec(tau1=0.5, tau2=0.5, alpha=1.0, beta=1.0)
    result = verify_transition(_transition_cfg(0.6), spec)
    assert result.outcome == "converged-to-1"
    assert result.t_decide is not None


def test_transition_down_from_point_four():
    spec = ThresholdSpec(tau1=0.5, tau2=0.5, alpha=1.0, beta=1.0)
    result = verify_transition(_transition_cfg(0.4), spec)
    assert result.outcome == "converged-to-0"


def test_transition_undecided_at_unstable_equilibrium(k3):
    # constant initial exactly at an interior unstable root, no noise
    f, g = pf.poly(0.0, 0.0, 1.0), pf.poly(1.0, -1.0)
    # (1-s)s^2 = s(1-s) has no interior root; use scenario III's s = 0.5
    f = pf.poly(0.0, 0.5, 1.0)
    cfg = SimConfig(graph_B=k3, graph_R=k3, f=f, g=g,
                    initial=InitialCondition("constant", sigma0=0.5),
                    t_end=50.0, step=0.01, record_every=100, events=(), seed=0)
    spec = ThresholdSpec(tau1=0.5, tau2=0.5, alpha=1.0, beta=1.0)
    result = verify_transition(cfg, spec)
    assert result.outcome == "undecided"


def test_transition_duality_swaps_outcomes():
    spec = ThresholdSpec(tau1=0.5, tau2=0.5, alpha=1.0, beta=1.0)
    k3 = make_graph(3, False, [(0, 1), (1, 2), (0, 2)])
    f, g = pf.poly(0.0, 2.0, 1.0), pf.poly(1.0, -1.0)  # x^2+2x beats 1-x
    up = SimConfig(graph_B=k3, graph_R=k3, f=f, g=g,
                   initial=InitialCondition("constant", sigma0=0.3),
                   t_end=100.0, step=0.01, record_every=100, events=(), seed=0)
    assert verify_transition(up, spec).outcome == "converged-to-1"
    # dual system: f_hat(x) = g(1-x) = x, g_hat(x) = f(1-x) = (1-x)^2 + 2(1-x)
    f_hat, g_hat = pf.poly(0.0, 1.0), pf.poly(3.0, -4.0, 1.0)
    down = SimConfig(graph_B=k3, graph_R=k3, f=f_hat, g=g_hat,
                     initial=InitialCondition("constant", sigma0=0.7),
                     t_end=100.0, step=0.01, record_every=100, events=(), seed=0)
    assert verify_transition(down, spec).outcome == "converged-to-0"
