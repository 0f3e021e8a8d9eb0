"""Bifurcation diagrams (parameter and structural sweeps), extrema/period
counting, and Lyapunov exponents via QR re-orthonormalization of a tangent
block integrated under the variational equation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal, Optional

import numpy as np

from .dynamics import (
    EXCURSION_TOL,
    SimConfig,
    _rk4_step,
    _segment_steps,
    integrate,
    jacobian_matvec,
    rhs,
)
from .errors import IsolatedNode, NonFinite, StepTooLarge
from .graphs import Graph, perturb_edges, row_normalized

PERTURB_RETRY_LIMIT = 100


@dataclass(frozen=True)
class SweepConfig:
    base: SimConfig
    kind: Literal["parameter", "structural"]
    window: tuple[float, float]
    cluster_tol: float = 1e-3
    # parameter sweep
    nu_lo: float = 0.0
    nu_hi: float = 0.0
    nu_step: float = 0.0
    chain_initial: bool = False
    # structural sweep (delete phase then add phase, half each)
    iterations: int = 0
    edges_per_iteration: int = 0

    def __post_init__(self):
        if self.window[1] > self.base.t_end:
            raise ValueError("window must end within the simulation horizon")
        if self.kind == "parameter" and self.nu_step <= 0:
            raise ValueError("parameter sweep needs a positive nu step")


@dataclass
class BifurcationDiagram:
    rows: list[tuple[float, list[float], int]]  # (coordinate, extrema, clusters)


@dataclass(frozen=True)
class LyapunovResult:
    exponents: tuple[float, ...]  # descending
    mle: float
    t_total: float
    t_transient: float
    qr_interval: float
    k: int


def extrema_clusters(times: np.ndarray, values: np.ndarray,
                     window: tuple[float, float], cluster_tol: float
                     ) -> tuple[list[float], int]:
    """Local extrema of a uniformly sampled series inside the window, grouped
    by single-linkage at cluster_tol.

    A series whose extrema span less than cluster_tol is treated as settled
    (numerical dither around a fixed point): no extrema, zero clusters.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = (times >= window[0]) & (times <= window[1])
    v = values[mask]
    if v.size < 3:
        return [], 0
    interior = v[1:-1]
    is_max = (interior > v[:-2]) & (interior > v[2:])
    is_min = (interior < v[:-2]) & (interior < v[2:])
    ext = interior[is_max | is_min]
    if ext.size == 0:
        return [], 0
    if float(ext.max() - ext.min()) < cluster_tol:
        return [], 0
    order = np.sort(ext)
    breaks = np.nonzero(np.diff(order) > cluster_tol)[0]
    clusters = np.split(order, breaks + 1)
    return ext.tolist(), len(clusters)


def cluster_representatives(extrema: list[float], cluster_tol: float) -> list[float]:
    """Mean value of each single-linkage cluster, ascending."""
    if not extrema:
        return []
    order = np.sort(np.asarray(extrema))
    breaks = np.nonzero(np.diff(order) > cluster_tol)[0]
    return [float(c.mean()) for c in np.split(order, breaks + 1)]


def bifurcation_sweep(cfg: SweepConfig) -> BifurcationDiagram:
    """Rebuild the nu-parameterized functions per grid point and collect the
    windowed extrema of the mean trajectory."""
    if cfg.kind != "parameter":
        raise ValueError("bifurcation_sweep requires a parameter sweep config")
    rows = []
    base = cfg.base
    carried: Optional[np.ndarray] = None
    for nu in np.arange(cfg.nu_lo, cfg.nu_hi, cfg.nu_step):
        run = base.with_functions(base.f.with_nu(float(nu)), base.g.with_nu(float(nu)))
        if carried is not None:
            from .dynamics import InitialCondition
            run = replace(run, initial=InitialCondition(
                "explicit", values=tuple(carried.tolist())))
        traj = integrate(run)
        if cfg.chain_initial:
            carried = traj.final_state
        ext, count = extrema_clusters(traj.times, traj.mean_blue,
                                      cfg.window, cfg.cluster_tol)
        rows.append((float(nu), ext, count))
    return BifurcationDiagram(rows)


def perturb_edges_resampled(g: Graph, delete_count: int, add_count: int,
                            seed: int):
    """perturb_edges, resampling with derived seeds when a deletion strands
    a node (retry limit shared with the graph module)."""
    for attempt in range(PERTURB_RETRY_LIMIT):
        try:
            return perturb_edges(g, delete_count, add_count,
                                 seed + 7919 * attempt)
        except IsolatedNode:
            continue
    raise IsolatedNode(range(0))


def structural_sweep(cfg: SweepConfig) -> BifurcationDiagram:
    """Delete edges from the attack graph for the first half of the
    iterations, then add the same count per iteration among absent pairs,
    simulating after each change. Coordinate = iteration index; index 0 is
    the unperturbed graph."""
    if cfg.kind != "structural":
        raise ValueError("structural_sweep requires a structural sweep config")
    base = cfg.base
    g_r = base.graph_R
    rows = []
    half = cfg.iterations // 2
    for it in range(cfg.iterations + 1):
        if it > 0:
            deleting = it <= half
            g_r, _ = perturb_edges_resampled(
                g_r,
                cfg.edges_per_iteration if deleting else 0,
                0 if deleting else cfg.edges_per_iteration,
                seed=base.seed + 1_000_003 * it,
            )
        run = replace(base, graph_R=g_r)
        traj = integrate(run)
        ext, count = extrema_clusters(traj.times, traj.mean_blue,
                                      cfg.window, cfg.cluster_tol)
        rows.append((float(it), ext, count))
    return BifurcationDiagram(rows)


def lyapunov_spectrum(cfg: SimConfig, k: int = 1, t_transient: float = 200.0,
                      t_total: float = 2000.0, qr_interval: float = 1.0
                      ) -> LyapunovResult:
    """Top-k Lyapunov exponents by joint RK4 integration of the state and an
    n x k tangent block under the variational equation, with periodic QR
    re-orthonormalization. Accumulation of ln|r_ii| starts after the
    transient."""
    n = cfg.graph_B.node_count
    if not 1 <= k <= n:
        raise ValueError("k must lie in [1, n]")
    if t_transient >= t_total:
        raise ValueError("t_transient must be below t_total")
    c_b = row_normalized(cfg.graph_B)
    c_r = row_normalized(cfg.graph_R)
    rng = np.random.default_rng(cfg.seed)
    state = cfg.initial.sample(n, rng)
    f, g = cfg.f, cfg.g

    w = np.linalg.qr(rng.standard_normal((n, k)))[0]
    sums = np.zeros(k)
    covered = 0.0
    t_prev_qr = 0.0

    h = cfg.step
    steps_per_qr = max(1, int(round(qr_interval / h)))
    total_steps = int(round(t_total / h))
    t = 0.0

    def aug_rhs(s, block):
        return rhs(s, f, g, c_b, c_r), jacobian_matvec(s, block, f, g, c_b, c_r)

    for step_idx in range(total_steps):
        k1s, k1w = aug_rhs(state, w)
        s2 = state + 0.5 * h * k1s
        k2s, k2w = aug_rhs(s2, w + 0.5 * h * k1w)
        s3 = state + 0.5 * h * k2s
        k3s, k3w = aug_rhs(s3, w + 0.5 * h * k2w)
        s4 = state + h * k3s
        k4s, k4w = aug_rhs(s4, w + h * k3w)
        state = state + (h / 6.0) * (k1s + 2 * k2s + 2 * k3s + k4s)
        w = w + (h / 6.0) * (k1w + 2 * k2w + 2 * k3w + k4w)

        excursion = max(float(state.max() - 1.0), float(-state.min()), 0.0)
        if excursion > EXCURSION_TOL:
            raise StepTooLarge(f"pre-clamp excursion {excursion:.3e}; reduce h")
        np.clip(state, 0.0, 1.0, out=state)
        t += h

        if (step_idx + 1) % steps_per_qr == 0 or step_idx == total_steps - 1:
            q, r = np.linalg.qr(w)
            diag = np.abs(np.diag(r))
            if not np.all(np.isfinite(diag)) or np.any(diag == 0.0):
                raise NonFinite("tangent block collapsed or diverged")
            w = q
            if t_prev_qr >= t_transient:  # skip intervals straddling the transient
                sums += np.log(diag)
                covered += t - t_prev_qr
            t_prev_qr = t

    if covered <= 0.0:
        raise ValueError("no full QR interval after the transient; lengthen t_total")
    exponents = np.sort(sums / covered)[::-1]
    if not np.all(np.isfinite(exponents)):
        raise NonFinite("non-finite Lyapunov accumulator")
    return LyapunovResult(tuple(exponents.tolist()), float(exponents[0]),
                          t_total, t_transient, qr_interval, k)


def mle_sweep(cfg: SweepConfig, k: int = 1, t_transient: float = 200.0,
              t_total: float = 1000.0, qr_interval: float = 1.0
              ) -> list[tuple[float, float]]:
    """Maximum Lyapunov exponent per nu grid point."""
    if cfg.kind != "parameter":
        raise ValueError("mle_sweep requires a parameter sweep config")
    base = cfg.base
    out = []
    for nu in np.arange(cfg.nu_lo, cfg.nu_hi, cfg.nu_step):
        run = base.with_functions(base.f.with_nu(float(nu)), base.g.with_nu(float(nu)))
        res = lyapunov_spectrum(run, k=k, t_transient=t_transient,
                                t_total=t_total, qr_interval=qr_interval)
        out.append((float(nu), res.mle))
    return out
