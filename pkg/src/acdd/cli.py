"""Config-driven command-line front door.

One JSON config describes one run; outputs are CSV files plus a
``manifest.json`` echoing the fully resolved config, so every dataset can be
regenerated byte-for-byte. Unknown config keys are rejected.

Exit codes: 0 success, 2 config error, 3 graph generation error,
4 numerical error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__, figures
from . import powerfun as pf
from .dynamics import InitialCondition, ScheduleEvent, SimConfig, integrate
from .equilibria import analyze_equilibria, find_h0_roots
from .errors import (
    ConfigError,
    ConfigParseError,
    ConfigValidationError,
    GraphError,
    NumericalError,
)
from .graphs import (
    Graph,
    generate_er,
    perturb_edges,
    read_graph_file,
    row_normalized,
)
from .perturbation import (
    delta_M_parameter,
    delta_M_structure,
    find_hopf_critical,
    leading_eigentriple,
    delta_lambda1,
)
from .equilibria import jacobian_M, leading_eigenvalue
from .sweeps import (
    SweepConfig,
    bifurcation_sweep,
    lyapunov_spectrum,
    mle_sweep,
    structural_sweep,
)
from .thresholds import ThresholdSpec, check_case1, check_case2, verify_transition

COMMANDS = ("simulate", "equilibria", "threshold", "hopf", "sweep",
            "structural-sweep", "lyapunov", "perturb-estimate", "figure")

EXIT_CONFIG = 2
EXIT_GENERATION = 3
EXIT_NUMERICAL = 4
EXIT_IO = 5


# -- formatting ---------------------------------------------------------------

def fmt(value) -> str:
    """Shortest round-trip decimal (repr) for floats, plain str otherwise."""
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not np.isfinite(v):
            raise NumericalError(f"refusing to persist non-finite value {v}")
        return repr(v)
    return str(value)


def write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    lines += [",".join(fmt(x) for x in row) for row in rows]
    _atomic_write(path, "\n".join(lines) + "\n")


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# -- config parsing -----------------------------------------------------------

def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigValidationError(f"unknown keys in {where}: {sorted(unknown)}")


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigParseError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigParseError("config root must be a JSON object")
    return cfg


def parse_graph(obj: dict, default_seed: int, scale: str | None = None) -> Graph:
    _require_keys(obj, {"generator", "path"}, "graph")
    if ("generator" in obj) == ("path" in obj):
        raise ConfigValidationError("graph needs exactly one of generator/path")
    if "path" in obj:
        try:
            return read_graph_file(obj["path"])
        except FileNotFoundError as exc:
            raise ConfigValidationError(str(exc)) from exc
    gen = obj["generator"]
    _require_keys(gen, {"kind", "n", "p", "directed", "seed"}, "graph.generator")
    if gen.get("kind", "er") != "er":
        raise ConfigValidationError(f"unknown generator kind {gen.get('kind')!r}")
    n = int(gen["n"])
    p = float(gen["p"])
    if scale == "desk" and n == figures.PAPER_N:
        p = figures.scale_p("desk", p)
        n = figures.DESK_N
    return generate_er(n, p, bool(gen.get("directed", False)),
                       int(gen.get("seed", default_seed)))


def parse_function(obj: dict) -> pf.PowerFunctionSpec:
    try:
        return pf.from_config(obj)
    except (ValueError, KeyError) as exc:
        raise ConfigValidationError(f"bad power function: {exc}") from exc


def parse_initial(obj: dict) -> InitialCondition:
    _require_keys(obj, {"kind", "sigma0", "lo", "hi", "values"}, "initial")
    kind = obj.get("kind")
    if kind == "constant":
        return InitialCondition("constant", sigma0=float(obj["sigma0"]))
    if kind == "uniform-interval":
        return InitialCondition("uniform-interval", lo=float(obj["lo"]),
                                hi=float(obj["hi"]))
    if kind == "explicit":
        return InitialCondition("explicit",
                                values=tuple(float(v) for v in obj["values"]))
    raise ConfigValidationError(f"unknown initial kind {kind!r}")


def parse_events(items) -> tuple[ScheduleEvent, ...]:
    events = []
    for obj in items:
        _require_keys(obj, {"time", "action", "f", "g", "sign", "magnitude"},
                      "event")
        action = obj["action"]
        if action == "switch-functions":
            events.append(ScheduleEvent(
                float(obj["time"]), "switch-functions",
                new_f=parse_function(obj["f"]) if "f" in obj else None,
                new_g=parse_function(obj["g"]) if "g" in obj else None))
        elif action == "perturb-state":
            lo, hi = obj.get("magnitude", [0.0, 0.01])
            events.append(ScheduleEvent(
                float(obj["time"]), "perturb-state", sign=int(obj.get("sign", -1)),
                magnitude_lo=float(lo), magnitude_hi=float(hi)))
        else:
            raise ConfigValidationError(f"unknown event action {action!r}")
    return tuple(events)


TOP_KEYS = {"command", "seed", "out", "graph_B", "graph_R", "f", "g", "params"}


def build_sim_config(cfg: dict, seed: int, scale: str | None,
                     extra_params: dict | None = None) -> SimConfig:
    params = dict(cfg.get("params", {}))
    if extra_params:
        params.update(extra_params)
    g_b = parse_graph(cfg["graph_B"], seed, scale)
    g_r = g_b if cfg.get("graph_R") is None or cfg["graph_R"] == {"same_as_B": True} \
        else parse_graph(cfg["graph_R"], seed + 1, scale)
    return SimConfig(
        graph_B=g_b,
        graph_R=g_r,
        f=parse_function(cfg["f"]),
        g=parse_function(cfg["g"]),
        initial=parse_initial(params.get("initial", {"kind": "constant", "sigma0": 0.5})),
        t_end=float(params.get("t_end", 200.0)),
        step=float(params.get("step", 0.01)),
        record_every=int(params.get("record_every", 10)),
        events=parse_events(params.get("events", ())),
        seed=seed,
        keep_states=bool(params.get("wide", False)),
    )


def _graph_field(cfg: dict, key: str):
    if key == "graph_R" and (cfg.get(key) is None or cfg.get(key) == {"same_as_B": True}):
        return {"same_as_B": True}
    return cfg.get(key)


# -- command implementations --------------------------------------------------

def cmd_simulate(cfg, seed, scale, outdir):
    sim = build_sim_config(cfg, seed, scale)
    traj = integrate(sim)
    outputs = [("trajectory.csv", "t,mean_blue",
                list(zip(traj.times.tolist(), traj.mean_blue.tolist())))]
    if sim.keep_states:
        header = "t," + ",".join(f"B_{i}" for i in range(sim.graph_B.node_count))
        rows = [(t, *state.tolist())
                for t, state in zip(traj.times.tolist(), traj.states)]
        outputs.append(("trajectory_wide.csv", header, rows))
    return outputs


def cmd_equilibria(cfg, seed, scale, outdir):
    g_b = parse_graph(cfg["graph_B"], seed, scale)
    g_r = g_b if _graph_field(cfg, "graph_R") == {"same_as_B": True} \
        else parse_graph(cfg["graph_R"], seed + 1, scale)
    f, g = parse_function(cfg["f"]), parse_function(cfg["g"])
    reports = analyze_equilibria(f, g, row_normalized(g_b), row_normalized(g_r))
    rows = [(r.sigma, r.residual, r.verdict,
             r.lambda1.real if r.lambda1 is not None else "",
             r.lambda1.imag if r.lambda1 is not None else "", r.method)
            for r in reports]
    return [("equilibria.csv", "sigma,residual,verdict,re_lambda1,im_lambda1,method",
             rows)]


def cmd_threshold(cfg, seed, scale, outdir):
    params = dict(cfg.get("params", {}))
    _require_keys(params, {"initial", "t_end", "step", "record_every", "tau1",
                           "tau2", "alpha", "beta", "strict", "grid"},
                  "threshold params")
    spec = ThresholdSpec(
        tau1=float(params.get("tau1", 0.5)),
        tau2=float(params.get("tau2", 0.5)),
        alpha=float(params.get("alpha", 1.0)),
        beta=float(params.get("beta", 1.0)),
        strict=bool(params.get("strict", False)),
    )
    grid = int(params.get("grid", 1001))
    sim = build_sim_config(cfg, seed, scale)
    reports = check_case1(sim.f, sim.g, spec, grid) + \
        check_case2(sim.f, sim.g, spec, grid)
    result = verify_transition(sim, spec)
    rows = [("condition", r.condition_id, r.satisfied, r.worst_case[0],
             r.worst_case[1], r.check_kind) for r in reports]
    rows.append(("outcome", result.initial_membership, result.outcome,
                 result.t_decide, "", ""))
    return [("threshold.csv", "record,id,value,sample,margin,check_kind", rows)]


def cmd_hopf(cfg, seed, scale, outdir):
    params = dict(cfg.get("params", {}))
    _require_keys(params, {"nu_lo", "nu_hi", "nu_step"}, "hopf params")
    g_b = parse_graph(cfg["graph_B"], seed, scale)
    g_r = g_b if _graph_field(cfg, "graph_R") == {"same_as_B": True} \
        else parse_graph(cfg["graph_R"], seed + 1, scale)
    f, g = parse_function(cfg["f"]), parse_function(cfg["g"])
    result = find_hopf_critical(
        f, g, row_normalized(g_b), row_normalized(g_r),
        float(params.get("nu_lo", 3.0)), float(params.get("nu_hi", 4.0)),
        float(params.get("nu_step", 0.01)))
    rows = list(result.samples)
    summary = [("nu_star", result.nu_star), ("sigma_star", result.sigma_star),
               ("imag_nonzero", result.imag_nonzero),
               ("re_bracket_lo", result.re_lambda1_bracket[0]),
               ("re_bracket_hi", result.re_lambda1_bracket[1])]
    return [("hopf.csv", "nu,sigma,re_lambda1,im_lambda1", rows),
            ("hopf_summary.csv", "key,value", summary)]


def _sweep_common(cfg, seed, scale, kind):
    params = dict(cfg.get("params", {}))
    allowed = {"initial", "t_end", "step", "record_every", "window",
               "cluster_tol", "nu_lo", "nu_hi", "nu_step", "chain_initial",
               "iterations", "edges_per_iteration"}
    _require_keys(params, allowed, "sweep params")
    sim = build_sim_config(cfg, seed, scale)
    window = params.get("window", [sim.t_end / 2, sim.t_end])
    return params, SweepConfig(
        base=sim, kind=kind, window=(float(window[0]), float(window[1])),
        cluster_tol=float(params.get("cluster_tol", 1e-3)),
        nu_lo=float(params.get("nu_lo", 0.0)),
        nu_hi=float(params.get("nu_hi", 0.0)),
        nu_step=float(params.get("nu_step", 0.05 if kind == "parameter" else 0.0)),
        chain_initial=bool(params.get("chain_initial", False)),
        iterations=int(params.get("iterations", 0)),
        edges_per_iteration=int(params.get("edges_per_iteration", 0)),
    )


def cmd_sweep(cfg, seed, scale, outdir):
    _, sweep = _sweep_common(cfg, seed, scale, "parameter")
    diagram = bifurcation_sweep(sweep)
    return [("sweep.csv", "coordinate,extremum", figures.extrema_rows(diagram)),
            ("clusters.csv", "coordinate,cluster_count", figures.cluster_rows(diagram))]


def cmd_structural_sweep(cfg, seed, scale, outdir):
    params, sweep = _sweep_common(cfg, seed, scale, "structural")
    if sweep.edges_per_iteration == 0:
        per = max(1, round(0.01 * sweep.base.graph_R.edge_count))
        sweep = SweepConfig(**{**sweep.__dict__, "edges_per_iteration": per})
    diagram = structural_sweep(sweep)
    return [("sweep.csv", "coordinate,extremum", figures.extrema_rows(diagram)),
            ("clusters.csv", "coordinate,cluster_count", figures.cluster_rows(diagram))]


def cmd_lyapunov(cfg, seed, scale, outdir):
    params = dict(cfg.get("params", {}))
    allowed = {"initial", "t_end", "step", "record_every", "k", "t_transient",
               "t_total", "qr_interval", "nu_lo", "nu_hi", "nu_step", "window"}
    _require_keys(params, allowed, "lyapunov params")
    k = int(params.get("k", 1))
    t_total = float(params.get("t_total", 1000.0))
    t_transient = float(params.get("t_transient", 200.0))
    qr_interval = float(params.get("qr_interval", 1.0))
    sim = build_sim_config(cfg, seed, scale, {"t_end": t_total})
    if "nu_step" in params:
        sweep = SweepConfig(base=sim, kind="parameter", window=(0.0, t_total),
                            nu_lo=float(params["nu_lo"]),
                            nu_hi=float(params["nu_hi"]),
                            nu_step=float(params["nu_step"]))
        rows = mle_sweep(sweep, k=k, t_transient=t_transient, t_total=t_total,
                         qr_interval=qr_interval)
        return [("mle.csv", "nu,mle", rows)]
    res = lyapunov_spectrum(sim, k=k, t_transient=t_transient,
                            t_total=t_total, qr_interval=qr_interval)
    rows = list(enumerate(res.exponents))
    return [("exponents.csv", "index,exponent", rows)]


def cmd_perturb_estimate(cfg, seed, scale, outdir):
    params = dict(cfg.get("params", {}))
    _require_keys(params, {"mode", "sigma", "d_nu", "delete_count", "add_count",
                           "perturb_seed"}, "perturb-estimate params")
    g_b = parse_graph(cfg["graph_B"], seed, scale)
    shared = _graph_field(cfg, "graph_R") == {"same_as_B": True}
    g_r = g_b if shared else parse_graph(cfg["graph_R"], seed + 1, scale)
    f, g = parse_function(cfg["f"]), parse_function(cfg["g"])
    c_b, c_r = row_normalized(g_b), (row_normalized(g_r) if not shared else None)
    if c_r is None:
        c_r = c_b
    if "sigma" in params:
        sigma = float(params["sigma"])
    else:
        interior = [r for r in find_h0_roots(f, g) if 0 < r < 1]
        if not interior:
            raise ConfigValidationError("no interior equilibrium; provide sigma")
        sigma = interior[-1]
    m = jacobian_M(sigma, f, g, c_b, c_r)
    triple = leading_eigentriple(m)

    mode = params.get("mode", "parameter")
    rows = []
    if mode == "parameter":
        for d_nu in params.get("d_nu", [1e-2, 5e-3, 2.5e-3]):
            d_nu = float(d_nu)
            dm = delta_M_parameter(sigma, f, g, c_b, c_r, d_nu)
            est = delta_lambda1(triple, dm)
            f2 = f.with_nu(f.nu + d_nu) if f.has_nu else f
            g2 = g.with_nu(g.nu + d_nu) if g.has_nu else g
            m2 = jacobian_M(sigma, f2, g2, c_b, c_r)
            exact = leading_eigenvalue(np.linalg.eigvals(m2)) - triple.lambda1
            rows.append((d_nu, est.real, est.imag, exact.real, exact.imag,
                         abs(est - exact)))
    elif mode == "structure":
        g_r_new, _delta = perturb_edges(
            g_r, int(params.get("delete_count", 0)),
            int(params.get("add_count", 0)),
            int(params.get("perturb_seed", seed + 99)))
        c_r_new = row_normalized(g_r_new)
        dm = delta_M_structure(sigma, f, g, c_b, c_b, c_r, c_r_new)
        est = delta_lambda1(triple, dm)
        m2 = jacobian_M(sigma, f, g, c_b, c_r_new)
        exact = leading_eigenvalue(np.linalg.eigvals(m2)) - triple.lambda1
        rows.append(("structure", est.real, est.imag, exact.real, exact.imag,
                     abs(est - exact)))
    else:
        raise ConfigValidationError(f"unknown perturb-estimate mode {mode!r}")
    return [("perturb_estimate.csv",
             "case,estimate_re,estimate_im,exact_re,exact_im,abs_error", rows)]


DISPATCH = {
    "simulate": cmd_simulate,
    "equilibria": cmd_equilibria,
    "threshold": cmd_threshold,
    "hopf": cmd_hopf,
    "sweep": cmd_sweep,
    "structural-sweep": cmd_structural_sweep,
    "lyapunov": cmd_lyapunov,
    "perturb-estimate": cmd_perturb_estimate,
}


def run(command: str, config_path: str | None, outdir: str, seed: int | None,
        scale: str | None, figure_id: str | None = None) -> list[Path]:
    """Execute one command and persist CSVs plus manifest.json."""
    started = time.monotonic()
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)

    if command == "figure":
        if figure_id is None:
            raise ConfigValidationError("figure command requires --id")
        use_seed = 0 if seed is None else seed
        use_scale = scale or "desk"
        datasets = figures.emit_figure_dataset(figure_id, use_scale, use_seed)
        resolved = {"command": "figure", "figure_id": figure_id,
                    "scale": use_scale, "seed": use_seed}
    else:
        cfg = load_config(config_path)
        _require_keys(cfg, TOP_KEYS, "config")
        cfg_command = cfg.get("command", command)
        if cfg_command != command:
            raise ConfigValidationError(
                f"config command {cfg_command!r} does not match CLI {command!r}")
        use_seed = seed if seed is not None else int(cfg.get("seed", 0))
        datasets = DISPATCH[command](cfg, use_seed, scale, out)
        resolved = {**cfg, "command": command, "seed": use_seed}
        if scale:
            resolved["scale"] = scale

    written = []
    for name, header, rows in datasets:
        path = out / name
        write_csv(path, header, rows)
        written.append(path)

    manifest = {
        "config": resolved,
        "version": __version__,
        "duration_seconds": time.monotonic() - started,
        "outputs": [{"file": p.name, "sha256": _sha256(p)} for p in written],
    }
    _atomic_write(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    return written + [out / "manifest.json"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acdd",
        description="Attack-defense dynamics numerical laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        if cmd == "figure":
            p.add_argument("--id", required=True, choices=figures.FIGURE_IDS)
        else:
            p.add_argument("--config", required=True)
        p.add_argument("--out", default="out")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--scale", choices=("paper", "desk"), default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        paths = run(args.command, getattr(args, "config", None), args.out,
                    args.seed, args.scale, getattr(args, "id", None))
    except ConfigError as exc:
        _emit_error(exc)
        return EXIT_CONFIG
    except GraphError as exc:
        _emit_error(exc)
        return EXIT_GENERATION
    except NumericalError as exc:
        _emit_error(exc)
        return EXIT_NUMERICAL
    except OSError as exc:
        _emit_error(exc)
        return EXIT_IO
    except ValueError as exc:
        _emit_error(exc)
        return EXIT_CONFIG
    for p in paths:
        print(p)
    return 0


def _emit_error(exc: Exception) -> None:
    record = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
