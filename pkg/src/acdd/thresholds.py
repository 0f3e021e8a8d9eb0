"""Membership sets over neighborhood averages and numerical checks of the
all-blue / all-red convergence conditions.

The sum conditions quantify over an uncountable set of states; we check a
conservative decoupled-suprema bound on a grid (sound but not complete) and
label each report with its check kind.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import SimConfig, integrate
from .graphs import Graph, row_normalized
from .powerfun import PowerFunctionSpec

# A logistic f has f(0) > 0, so the "all red" rest point sits slightly above
# zero (about 0.0035 for 1/(e^{-10x+5}+1) against 2(1-x)^2); the band must be
# wide enough to classify that as converged-to-0.
CONVERGE_TOL = 5e-3


@dataclass(frozen=True)
class ThresholdSpec:
    tau1: float
    tau2: float
    alpha: float
    beta: float
    strict: bool = False

    def __post_init__(self):
        if not (0.0 < self.tau1 < 1.0 and 0.0 < self.tau2 < 1.0):
            raise ValueError("tau1, tau2 must lie in (0, 1)")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha, beta must be positive")


@dataclass(frozen=True)
class ConditionReport:
    condition_id: str   # eq10|eq11|eq12|cor3-i|cor3-ii|cor4-sum|cor4-threshold
    satisfied: bool
    worst_case: tuple[float, float]  # (sample point, margin)
    check_kind: str     # grid-sufficient | trajectory-spot


def neighborhood_min_avg(state: np.ndarray, g: Graph) -> float:
    """Minimum over nodes of the in-neighborhood average of state."""
    c = row_normalized(g)
    return float(c.dot(np.asarray(state, dtype=float)).min())


def in_xi(state: np.ndarray, g: Graph, tau: float, strict: bool = False) -> bool:
    m = neighborhood_min_avg(state, g)
    return m > tau if strict else m >= tau


def _sup_on(spec: PowerFunctionSpec, lo: float, hi: float, grid: int) -> tuple[float, float]:
    xs = np.linspace(lo, hi, grid)
    vals = np.asarray(spec.value(xs), dtype=float)
    i = int(np.argmax(vals))
    return float(vals[i]), float(xs[i])


def check_case1(f: PowerFunctionSpec, g: PowerFunctionSpec, spec: ThresholdSpec,
                grid: int = 1001) -> list[ConditionReport]:
    """All-blue convergence conditions: f(z) > alpha z on [tau1, 1) and the
    conservative sum bound sup f|[tau1,1] + sup g|[0,1] <= alpha."""
    if grid < 10:
        raise ValueError("grid must be >= 10")
    zs = np.linspace(spec.tau1, 1.0, grid, endpoint=False)
    margins = np.asarray(f.value(zs), dtype=float) - spec.alpha * zs
    i = int(np.argmin(margins))
    eq10 = ConditionReport("eq10", bool(margins[i] > 0),
                           (float(zs[i]), float(margins[i])), "grid-sufficient")

    sup_f, at_f = _sup_on(f, spec.tau1, 1.0, grid)
    sup_g, _ = _sup_on(g, 0.0, 1.0, grid)
    margin = spec.alpha - (sup_f + sup_g)
    eq11 = ConditionReport("eq11", bool(margin >= 0), (at_f, float(margin)),
                           "grid-sufficient")
    return [eq10, eq11]


def check_case2(f: PowerFunctionSpec, g: PowerFunctionSpec, spec: ThresholdSpec,
                grid: int = 1001) -> list[ConditionReport]:
    """All-red convergence conditions, the mirror of case 1:
    g(1 - z) > beta z on [tau2, 1) and sup f|[0,1] + sup g|[0,1-tau2] <= beta."""
    if grid < 10:
        raise ValueError("grid must be >= 10")
    zs = np.linspace(spec.tau2, 1.0, grid, endpoint=False)
    margins = np.asarray(g.value(1.0 - zs), dtype=float) - spec.beta * zs
    i = int(np.argmin(margins))
    g_cond = ConditionReport("eq10", bool(margins[i] > 0),
                             (float(zs[i]), float(margins[i])), "grid-sufficient")

    sup_f, _ = _sup_on(f, 0.0, 1.0, grid)
    sup_g, at_g = _sup_on(g, 0.0, 1.0 - spec.tau2, grid)
    margin = spec.beta - (sup_f + sup_g)
    eq12 = ConditionReport("eq12", bool(margin >= 0), (at_g, float(margin)),
                           "grid-sufficient")
    return [g_cond, eq12]


def check_corollary3(f: PowerFunctionSpec, g: PowerFunctionSpec, tau: float,
                     alpha: float, grid: int = 1001) -> list[ConditionReport]:
    """Single-threshold variant: condition (i) drives states above tau to
    all-blue, condition (ii) drives states below tau to all-red."""
    zs_hi = np.linspace(tau, 1.0, grid, endpoint=False)[1:]  # open interval
    m1 = np.asarray(f.value(zs_hi), dtype=float) - alpha * zs_hi
    sup_f_hi, _ = _sup_on(f, tau, 1.0, grid)
    sup_g_all, _ = _sup_on(g, 0.0, 1.0, grid)
    i = int(np.argmin(m1))
    sum_margin_i = alpha - (sup_f_hi + sup_g_all)
    cor3_i = ConditionReport(
        "cor3-i", bool(m1[i] > 0 and sum_margin_i >= 0),
        (float(zs_hi[i]), float(min(m1[i], sum_margin_i))), "grid-sufficient")

    zs_lo = np.linspace(0.0, tau, grid, endpoint=False)[1:]
    m2 = np.asarray(g.value(zs_lo), dtype=float) - alpha * (1.0 - zs_lo)
    sup_f_all, _ = _sup_on(f, 0.0, 1.0, grid)
    sup_g_lo, _ = _sup_on(g, 0.0, tau, grid)
    j = int(np.argmin(m2))
    sum_margin_ii = alpha - (sup_f_all + sup_g_lo)
    cor3_ii = ConditionReport(
        "cor3-ii", bool(m2[j] > 0 and sum_margin_ii >= 0),
        (float(zs_lo[j]), float(min(m2[j], sum_margin_ii))), "grid-sufficient")
    return [cor3_i, cor3_ii]


def check_corollary4(f: PowerFunctionSpec, g: PowerFunctionSpec, tau: float,
                     alpha: float, grid: int = 1001) -> list[ConditionReport]:
    """Shared-graph specialization: f(z) + g(z) <= alpha on [0,1] and f vs
    alpha z crosses exactly at tau (above on (tau,1), below on (0,tau))."""
    zs = np.linspace(0.0, 1.0, grid)
    sums = np.asarray(f.value(zs), dtype=float) + np.asarray(g.value(zs), dtype=float)
    i = int(np.argmax(sums))
    sum_margin = alpha - float(sums[i])
    cor4_sum = ConditionReport("cor4-sum", bool(sum_margin >= 0),
                               (float(zs[i]), sum_margin), "grid-sufficient")

    hi = np.linspace(tau, 1.0, grid, endpoint=False)[1:]
    lo = np.linspace(0.0, tau, grid, endpoint=False)[1:]
    m_hi = np.asarray(f.value(hi), dtype=float) - alpha * hi
    m_lo = alpha * lo - np.asarray(f.value(lo), dtype=float)
    worst = min(float(m_hi.min()), float(m_lo.min()))
    at = float(hi[int(np.argmin(m_hi))]) if m_hi.min() <= m_lo.min() \
        else float(lo[int(np.argmin(m_lo))])
    cor4_thr = ConditionReport("cor4-threshold", bool(worst > 0), (at, worst),
                               "grid-sufficient")
    return [cor4_sum, cor4_thr]


def spot_check_case1(trajectory_states: np.ndarray, f: PowerFunctionSpec,
                     g: PowerFunctionSpec, spec: ThresholdSpec,
                     g_b: Graph, g_r: Graph) -> ConditionReport:
    """Evaluate the sum condition along an actual orbit (not a proof)."""
    c_b = row_normalized(g_b)
    c_r = row_normalized(g_r)
    worst = (0.0, np.inf)
    for state in trajectory_states:
        vals = np.asarray(f.value(c_b.dot(state)), dtype=float) \
            + np.asarray(g.value(c_r.dot(state)), dtype=float)
        i = int(np.argmax(vals))
        margin = spec.alpha - float(vals[i])
        if margin < worst[1]:
            worst = (float(state[i]), margin)
    return ConditionReport("eq11", bool(worst[1] >= 0), worst, "trajectory-spot")


@dataclass(frozen=True)
class TransitionResult:
    initial_membership: str  # xi-B | xi-R | neither
    outcome: str             # converged-to-1 | converged-to-0 | undecided
    t_decide: float


def verify_transition(cfg: SimConfig, spec: ThresholdSpec) -> TransitionResult:
    """Simulate and report which attractor (if any) the run reaches."""
    rng = np.random.default_rng(cfg.seed)
    initial = cfg.initial.sample(cfg.graph_B.node_count, rng)
    if in_xi(initial, cfg.graph_B, spec.tau1, spec.strict):
        membership = "xi-B"
    elif in_xi(1.0 - initial, cfg.graph_R, spec.tau2, spec.strict):
        membership = "xi-R"
    else:
        membership = "neither"

    traj = integrate(cfg)
    hit_one = np.nonzero(traj.min_blue >= 1.0 - CONVERGE_TOL)[0]
    hit_zero = np.nonzero(traj.max_blue <= CONVERGE_TOL)[0]
    if hit_one.size and (not hit_zero.size or hit_one[0] <= hit_zero[0]):
        return TransitionResult(membership, "converged-to-1", float(traj.times[hit_one[0]]))
    if hit_zero.size:
        return TransitionResult(membership, "converged-to-0", float(traj.times[hit_zero[0]]))
    return TransitionResult(membership, "undecided", float("nan"))
