"""Master-equation integration: dB_v/dt = f(avg_B) (1 - B_v) - g(avg_R) B_v.

Fixed-step classical Runge-Kutta (RK4); the step grid snaps to scheduled
event times so function switches and state perturbations land exactly when
scheduled. After every step the state is clamped to [0,1]^n and the
pre-clamp excursion is tracked as a loud failure signal for too-coarse steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal, Optional

import numpy as np

from .errors import ConfigError, StepTooLarge
from .graphs import Graph, RowStochasticMatrix, row_normalized
from .powerfun import PowerFunctionSpec

EXCURSION_TOL = 1e-3


@dataclass(frozen=True)
class InitialCondition:
    kind: Literal["constant", "uniform-interval", "explicit"]
    sigma0: float = 0.0
    lo: float = 0.0
    hi: float = 1.0
    values: Optional[tuple[float, ...]] = None

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "constant":
            if not 0.0 <= self.sigma0 <= 1.0:
                raise ConfigError("constant initial must lie in [0, 1]")
            return np.full(n, float(self.sigma0))
        if self.kind == "uniform-interval":
            if not (0.0 <= self.lo <= self.hi <= 1.0):
                raise ConfigError("uniform interval must satisfy 0 <= lo <= hi <= 1")
            return rng.uniform(self.lo, self.hi, size=n)
        if self.values is None or len(self.values) != n:
            raise ConfigError("explicit initial condition has wrong length")
        arr = np.asarray(self.values, dtype=float)
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ConfigError("explicit initial values must lie in [0, 1]")
        return arr.copy()


@dataclass(frozen=True)
class ScheduleEvent:
    time: float
    action: Literal["switch-functions", "perturb-state"]
    new_f: Optional[PowerFunctionSpec] = None
    new_g: Optional[PowerFunctionSpec] = None
    sign: int = -1
    magnitude_lo: float = 0.0
    magnitude_hi: float = 0.01


@dataclass(frozen=True)
class SimConfig:
    graph_B: Graph
    graph_R: Graph
    f: PowerFunctionSpec
    g: PowerFunctionSpec
    initial: InitialCondition
    t_end: float
    step: float = 0.01
    record_every: int = 1
    events: tuple[ScheduleEvent, ...] = ()
    seed: int = 0
    keep_states: bool = False

    def __post_init__(self):
        if self.graph_B.node_count != self.graph_R.node_count:
            raise ConfigError("defense and attack graphs must share node count")
        if self.step <= 0:
            raise ConfigError("step must be positive")
        if self.record_every < 1:
            raise ConfigError("record_every must be >= 1")
        times = [e.time for e in self.events]
        if times != sorted(times):
            raise ConfigError("events must be sorted by time")
        if times and (times[0] < 0 or times[-1] > self.t_end):
            raise ConfigError("event times must lie within [0, t_end]")

    def with_functions(self, f: PowerFunctionSpec, g: PowerFunctionSpec) -> "SimConfig":
        return replace(self, f=f, g=g)


@dataclass
class Trajectory:
    times: np.ndarray
    mean_blue: np.ndarray
    min_blue: np.ndarray
    max_blue: np.ndarray
    final_state: np.ndarray
    states: Optional[np.ndarray] = None
    max_excursion: float = 0.0


def mean_blue(state: np.ndarray) -> float:
    """Average portion of blue nodes."""
    state = np.asarray(state, dtype=float)
    if state.size == 0:
        raise ValueError("empty state vector")
    return float(state.mean())


def rhs(state: np.ndarray, f: PowerFunctionSpec, g: PowerFunctionSpec,
        c_b: RowStochasticMatrix, c_r: RowStochasticMatrix) -> np.ndarray:
    avg_b = c_b.dot(state)
    avg_r = c_r.dot(state)
    return f.value(avg_b) * (1.0 - state) - g.value(avg_r) * state


def rhs_jacobian(state: np.ndarray, f: PowerFunctionSpec, g: PowerFunctionSpec,
                 c_b: RowStochasticMatrix, c_r: RowStochasticMatrix) -> np.ndarray:
    """Dense Jacobian of the right-hand side at the given state."""
    avg_b = c_b.dot(state)
    avg_r = c_r.dot(state)
    jac = (f.deriv(avg_b) * (1.0 - state))[:, None] * c_b.toarray()
    jac -= (g.deriv(avg_r) * state)[:, None] * c_r.toarray()
    jac -= np.diag(f.value(avg_b) + g.value(avg_r))
    return jac


def jacobian_matvec(state: np.ndarray, w: np.ndarray,
                    f: PowerFunctionSpec, g: PowerFunctionSpec,
                    c_b: RowStochasticMatrix, c_r: RowStochasticMatrix) -> np.ndarray:
    """J(state) @ w without materializing J; w may be a vector or n x k block."""
    avg_b = c_b.dot(state)
    avg_r = c_r.dot(state)
    fb = f.deriv(avg_b) * (1.0 - state)
    gr = g.deriv(avg_r) * state
    diag = f.value(avg_b) + g.value(avg_r)
    if w.ndim == 1:
        return fb * c_b.dot(w) - gr * c_r.dot(w) - diag * w
    return fb[:, None] * c_b.dot(w) - gr[:, None] * c_r.dot(w) - diag[:, None] * w


def _segment_steps(t0: float, t1: float, h: float) -> list[float]:
    """Step sizes covering [t0, t1]: full steps of h plus a final remainder."""
    span = t1 - t0
    n_full = int(np.floor(span / h + 1e-12))
    steps = [h] * n_full
    rem = span - n_full * h
    if rem > 1e-12:
        steps.append(rem)
    return steps


def _rk4_step(state, h, f, g, c_b, c_r):
    k1 = rhs(state, f, g, c_b, c_r)
    k2 = rhs(state + 0.5 * h * k1, f, g, c_b, c_r)
    k3 = rhs(state + 0.5 * h * k2, f, g, c_b, c_r)
    k4 = rhs(state + h * k3, f, g, c_b, c_r)
    return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(cfg: SimConfig, excursion_tol: float = EXCURSION_TOL) -> Trajectory:
    """Integrate the master equation; see module docstring for the contract."""
    n = cfg.graph_B.node_count
    c_b = row_normalized(cfg.graph_B)
    c_r = row_normalized(cfg.graph_R)
    rng = np.random.default_rng(cfg.seed)
    state = cfg.initial.sample(n, rng)
    f, g = cfg.f, cfg.g

    boundaries = sorted({0.0, cfg.t_end, *(e.time for e in cfg.events)})
    events_at = {}
    for ev in cfg.events:
        events_at.setdefault(ev.time, []).append(ev)

    times = [0.0]
    means = [state.mean()]
    mins = [state.min()]
    maxs = [state.max()]
    snaps = [state.copy()] if cfg.keep_states else None
    max_excursion = 0.0
    step_count = 0

    def apply_events(t):
        nonlocal f, g, state
        for ev in events_at.get(t, []):
            if ev.action == "switch-functions":
                f = ev.new_f if ev.new_f is not None else f
                g = ev.new_g if ev.new_g is not None else g
            else:
                eps = rng.uniform(ev.magnitude_lo, ev.magnitude_hi, size=n)
                state = np.clip(state + ev.sign * eps, 0.0, 1.0)

    apply_events(0.0)
    t = 0.0
    for seg_start, seg_end in zip(boundaries[:-1], boundaries[1:]):
        if seg_start > 0.0:
            apply_events(seg_start)
        steps = _segment_steps(seg_start, seg_end, cfg.step)
        for i, h in enumerate(steps):
            state = _rk4_step(state, h, f, g, c_b, c_r)
            excursion = max(float(state.max() - 1.0), float(-state.min()), 0.0)
            if excursion > excursion_tol:
                raise StepTooLarge(
                    f"pre-clamp excursion {excursion:.3e} at t={t:.6g}; reduce h")
            max_excursion = max(max_excursion, excursion)
            np.clip(state, 0.0, 1.0, out=state)
            # indexed, not accumulated, so recorded times don't drift
            t = seg_end if i == len(steps) - 1 else seg_start + (i + 1) * h
            step_count += 1
            if step_count % cfg.record_every == 0:
                times.append(t)
                means.append(state.mean())
                mins.append(state.min())
                maxs.append(state.max())
                if snaps is not None:
                    snaps.append(state.copy())

    if times[-1] != t:  # always record the endpoint
        times.append(t)
        means.append(state.mean())
        mins.append(state.min())
        maxs.append(state.max())
        if snaps is not None:
            snaps.append(state.copy())

    return Trajectory(
        times=np.asarray(times),
        mean_blue=np.asarray(means),
        min_blue=np.asarray(mins),
        max_blue=np.asarray(maxs),
        final_state=state,
        states=None if snaps is None else np.asarray(snaps),
        max_excursion=max_excursion,
    )
