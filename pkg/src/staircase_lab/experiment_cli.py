"""Experiment configuration, sweep orchestration, persistence, and the CLI.

A sweep minimizes the perturbed energy for a list of eps values (largest
first, warm-starting each solve from the previous minimizer), and records per
eps the minimum, its scaling ratios against the predicted limit, staircase
fits of blow-ups at configured centers, and varifold-pairing residuals.
Records go to ``records.csv`` (shortest round-trip floats) with a JSON mirror
and per-eps minimizer CSVs; plots are rendered as SVG.

Subcommands: minimize, sweep, limit, blowup, varifold, check, plot.
Exit codes: 0 ok, 1 check failure, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .blowup_analysis import extract_blowup, fit_staircase, test_function, \
    varifold_limit, varifold_pair
from .energy_core import SampledFunction, omega, trapezoid_weights
from .limit_solver import LimitProblem, mu0, mu0_star, mu_bounds
from .pure_jump import ALPHA0, staircase_params
from .variational_solver import SolveOptions, minimize_pmf, required_grid_size

__all__ = [
    "Forcing",
    "ExperimentConfig",
    "SweepRecord",
    "get_forcing",
    "parse_config",
    "run_sweep",
    "write_records",
    "main",
]

PJ_SCALING_CONSTANT = 4.0 * math.sqrt(2.0 / 3.0) * 5.0 ** 0.75


@dataclass(frozen=True)
class Forcing:
    """A catalog forcing: closed-form samples plus (optional) derivative."""

    id: str
    params: dict
    smooth: bool

    def __call__(self, x):
        return _forcing_fn(self.id, self.params, np.asarray(x, dtype=float))

    def derivative(self, x):
        d = _forcing_dfn(self.id, self.params, np.asarray(x, dtype=float))
        return d

    def sample(self, n: int) -> SampledFunction:
        x = np.linspace(0.0, 1.0, n)
        return SampledFunction(0.0, 1.0 / (n - 1), self(x))


def _forcing_fn(fid: str, params: dict, x: np.ndarray) -> np.ndarray:
    if fid == "constant":
        return np.full_like(x, float(params.get("c", 0.5)))
    if fid == "linear":
        return float(params.get("M", 1.0)) * x
    if fid == "cubic":
        return 1.5 * x - x ** 3 / 14.0
    if fid == "sine":
        return float(params.get("amplitude", 0.5)) * np.sin(math.pi * x)
    if fid == "purejump":
        return float(params.get("J", 1.0)) * (x > 0.5).astype(float)
    if fid == "file":
        data = np.loadtxt(params["path"], delimiter=",")
        return np.interp(x, data[:, 0], data[:, 1])
    raise ValueError(f"unknown forcing id {fid!r}")


def _forcing_dfn(fid: str, params: dict, x: np.ndarray):
    if fid == "constant":
        return np.zeros_like(x)
    if fid == "linear":
        return np.full_like(x, float(params.get("M", 1.0)))
    if fid == "cubic":
        return 1.5 - 3.0 * x ** 2 / 14.0
    if fid == "sine":
        a = float(params.get("amplitude", 0.5))
        return a * math.pi * np.cos(math.pi * x)
    return None  # purejump / file: no analytic derivative


def get_forcing(fid: str, **params) -> Forcing:
    smooth = fid not in ("purejump",)
    f = Forcing(fid, params, smooth)
    f(np.array([0.0, 0.5, 1.0]))  # validate id early
    return f


@dataclass(frozen=True)
class ExperimentConfig:
    forcing_id: str = "linear"
    forcing_params: dict = field(default_factory=dict)
    beta: float = 1.0
    eps_list: tuple[float, ...] = (0.2, 0.1, 0.07, 0.05)
    grid_size: int = 0  # 0: resolution rule decides per eps
    max_iterations: int = 50000
    seeds: tuple[str, ...] = ("forcing", "recovery", "mollified")
    centers: tuple[float, ...] = (0.3, 0.5, 0.7)
    phis: tuple[str, ...] = ("one", "cos_theta", "sin_theta", "x_poly_1*sin_theta")
    output_dir: str = "out"
    label: str = "sweep"

    def __post_init__(self):
        if not all(0.0 < e < 1.0 for e in self.eps_list):
            raise ValueError("all eps must lie in (0,1)")
        if list(self.eps_list) != sorted(self.eps_list, reverse=True):
            raise ValueError("eps list must be sorted decreasing")
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    def forcing(self) -> Forcing:
        return get_forcing(self.forcing_id, **self.forcing_params)


def parse_config(path: str) -> ExperimentConfig:
    """Flat key=value config file; '#' starts a comment."""
    kv: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            k, v = line.split("=", 1)
            kv[k.strip()] = v.strip()
    params = {}
    for key in ("M", "c", "amplitude", "J"):
        if key in kv:
            params[key] = float(kv.pop(key))
    if "path" in kv:
        params["path"] = kv.pop("path")

    def floats(s):
        return tuple(float(t) for t in s.split(",") if t.strip())

    def strs(s):
        return tuple(t.strip() for t in s.split(",") if t.strip())

    cfg = {}
    if "forcing" in kv:
        cfg["forcing_id"] = kv.pop("forcing")
    if "beta" in kv:
        cfg["beta"] = float(kv.pop("beta"))
    if "eps" in kv:
        cfg["eps_list"] = floats(kv.pop("eps"))
    if "grid_size" in kv:
        cfg["grid_size"] = int(kv.pop("grid_size"))
    if "max_iterations" in kv:
        cfg["max_iterations"] = int(kv.pop("max_iterations"))
    if "seeds" in kv:
        cfg["seeds"] = strs(kv.pop("seeds"))
    if "centers" in kv:
        cfg["centers"] = floats(kv.pop("centers"))
    if "phis" in kv:
        cfg["phis"] = strs(kv.pop("phis"))
    if "out" in kv:
        cfg["output_dir"] = kv.pop("out")
    if "label" in kv:
        cfg["label"] = kv.pop("label")
    if kv:
        raise ValueError(f"unknown config keys: {sorted(kv)}")
    return ExperimentConfig(forcing_params=params, **cfg)


@dataclass(frozen=True)
class SweepRecord:
    eps: float
    omega: float
    m_eps: float
    m_over_omega2: float
    m_over_omega52: float
    predicted_limit: float
    bending: float
    gradient_log: float
    fidelity: float
    iterations: int
    converged: bool
    initializer_id: str
    wall_time: float
    fits: dict = field(default_factory=dict)       # (kind, center) -> fit summary
    varifold: dict = field(default_factory=dict)   # phi id -> (pair, limit, residual)

    def flat(self) -> dict:
        row = {
            "eps": self.eps, "omega": self.omega, "m_eps": self.m_eps,
            "m_over_omega2": self.m_over_omega2,
            "m_over_omega52": self.m_over_omega52,
            "predicted_limit": self.predicted_limit,
            "bending": self.bending, "gradient_log": self.gradient_log,
            "fidelity": self.fidelity, "iterations": self.iterations,
            "converged": self.converged, "initializer_id": self.initializer_id,
            "wall_time": self.wall_time,
        }
        for (kind, center), fit in sorted(self.fits.items()):
            tag = f"fit_{kind}_{center:g}"
            row[f"{tag}_distance"] = fit["distance"]
            row[f"{tag}_tau0"] = fit["tau0"]
            row[f"{tag}_kind"] = fit["best_kind"]
            row[f"{tag}_step_length"] = fit["step_length"]
            row[f"{tag}_step_height"] = fit["step_height"]
        for phi, (pair, lim, res) in sorted(self.varifold.items()):
            tag = "varifold_" + phi.replace("*", ".")
            row[f"{tag}_pair"] = pair
            row[f"{tag}_limit"] = lim
            row[f"{tag}_residual"] = res
        return row


def predicted_limit_value(config: ExperimentConfig, n: int = 8193) -> float:
    """Limit constant for the sweep's m/omega^2 (smooth forcing) or
    m/omega^(5/2) (pure-jump forcing) column."""
    f = config.forcing()
    if f.id == "purejump":
        jh = math.sqrt(abs(float(f.params.get("J", 1.0))))
        return PJ_SCALING_CONSTANT * jh
    x = np.linspace(0.0, 1.0, n)
    fp = f.derivative(x)
    if fp is None:
        sf = f.sample(n)
        from .energy_core import first_derivative
        fp = first_derivative(sf)
    c1 = 10.0 * (2.0 * config.beta / 27.0) ** 0.2
    w = trapezoid_weights(n, 1.0 / (n - 1))
    return c1 * float(w @ np.abs(fp) ** 0.8)


def _record_fits(u: SampledFunction, f_s: SampledFunction, forcing: Forcing,
                 config: ExperimentConfig, eps: float) -> dict:
    fits = {}
    w_eps = omega(eps)
    # fix the blow-up window per center across the sweep (sized to be feasible
    # from the second-smallest eps on) so fit distances at different eps are
    # integrals over identical windows and therefore comparable
    eps_ref = config.eps_list[-2] if len(config.eps_list) > 1 else config.eps_list[-1]
    w_ref = omega(eps_ref)
    for center in config.centers:
        fpx = forcing.derivative(np.array([center]))
        if fpx is None:
            continue
        slope = float(fpx[0])
        H, _ = staircase_params(config.beta, slope)
        dist = min(center, 1.0 - center)
        W = min(0.95 * dist / w_ref, 6.0 * H)
        if W < 1.55 * H:
            continue  # window too narrow to hold a full step
        if W * w_eps > 0.95 * dist:
            continue  # window not yet feasible at this eps
        for kind, fit_kinds in (("fake", ("oblique",)),
                                ("true", ("horizontal", "vertical"))):
            b = extract_blowup(u, f_s, center, eps, W, kind)
            try:
                fit = fit_staircase(b, config.beta, slope, kinds=fit_kinds)
            except ValueError:
                continue
            step, height = fit.step_length_estimate, fit.step_height_estimate
            if not math.isfinite(step):
                # spacing estimation needs two jumps in view; retry on the
                # widest window feasible at this eps (distance keeps the
                # fixed window so it stays comparable across the sweep)
                W_wide = min(0.95 * dist / w_eps, 6.0 * H)
                if W_wide > W:
                    try:
                        wide = fit_staircase(
                            extract_blowup(u, f_s, center, eps, W_wide, kind),
                            config.beta, slope, kinds=fit_kinds)
                        step = wide.step_length_estimate
                        height = wide.step_height_estimate
                    except ValueError:
                        pass
            fits[(kind, center)] = {
                "distance": fit.distance, "tau0": fit.tau0_star,
                "best_kind": fit.best_kind,
                "step_length": step,
                "step_height": height,
                "halfwidth": W,
            }
    return fits


def run_sweep(config: ExperimentConfig, progress=None):
    """Run the eps sweep; returns (records, minimizers dict eps->profile).

    Solves serialize largest-eps-first so each solve warm-starts from the
    previous minimizer; records and minimizer CSVs are written incrementally
    when the output directory exists.
    """
    forcing = config.forcing()
    limit = predicted_limit_value(config)
    outdir = config.output_dir
    os.makedirs(outdir, exist_ok=True)
    records: list[SweepRecord] = []
    minimizers: dict[float, SampledFunction] = {}
    # fixed fine grid for the varifold limit, shared across eps
    f_fine = forcing.sample(16385)
    fp_fine = forcing.derivative(f_fine.x)
    warm = None
    for eps in config.eps_list:
        t0 = time.perf_counter()
        n = config.grid_size or max(required_grid_size(eps, 1.0, rescaled=False), 64)
        f_s = forcing.sample(n)
        opts = SolveOptions(grid_size=n, multistart_seeds=config.seeds,
                            max_iterations=config.max_iterations)
        res = minimize_pmf(eps, config.beta, f_s, opts, warm=warm)
        warm = res.minimizer
        minimizers[eps] = res.minimizer
        w_eps = omega(eps)
        fits = _record_fits(res.minimizer, f_s, forcing, config, eps)
        varifold = {}
        for phi_id in config.phis:
            phi = test_function(phi_id)
            pair = varifold_pair(res.minimizer, phi)
            lim = varifold_limit(f_fine, fp_fine, phi)
            varifold[phi_id] = (pair, lim, abs(pair - lim))
        rec = SweepRecord(
            eps=eps, omega=w_eps, m_eps=res.energy.total,
            m_over_omega2=res.energy.total / w_eps ** 2,
            m_over_omega52=res.energy.total / w_eps ** 2.5,
            predicted_limit=limit, bending=res.energy.bending,
            gradient_log=res.energy.gradient_log, fidelity=res.energy.fidelity,
            iterations=res.iterations, converged=res.converged,
            initializer_id=res.initializer_id,
            wall_time=time.perf_counter() - t0, fits=fits, varifold=varifold)
        records.append(rec)
        _write_minimizer(outdir, eps, res.minimizer)
        write_records(records, outdir)
        if progress is not None:
            progress(rec)
    return records, minimizers


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_minimizer(outdir: str, eps: float, u: SampledFunction) -> None:
    path = os.path.join(outdir, f"minimizer_{eps:g}.csv")
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["x", "u"])
        for x, v in zip(u.x, u.values):
            wr.writerow([repr(float(x)), repr(float(v))])


def write_records(records: list[SweepRecord], outdir: str) -> None:
    rows = [r.flat() for r in records]
    cols: list[str] = []
    for row in rows:
        for k in row:
            if k not in cols:
                cols.append(k)
    with open(os.path.join(outdir, "records.csv"), "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(cols)
        for row in rows:
            wr.writerow([_fmt(row.get(c, "")) for c in cols])
    with open(os.path.join(outdir, "records.json"), "w") as fh:
        json.dump(rows, fh, indent=1)


# ---------------------------------------------------------------------------
# CLI


def _cmd_minimize(args) -> int:
    forcing = get_forcing(args.forcing, **_forcing_args(args))
    n = args.grid_size or max(required_grid_size(args.eps, 1.0, False), 64)
    f_s = forcing.sample(n)
    opts = SolveOptions(grid_size=n)
    res = minimize_pmf(args.eps, args.beta, f_s, opts)
    outdir = _outdir(args)
    os.makedirs(outdir, exist_ok=True)
    _write_minimizer(outdir, args.eps, res.minimizer)
    print(f"minimum {res.energy.total!r} (bending {res.energy.bending!r}, "
          f"log {res.energy.gradient_log!r}, fidelity {res.energy.fidelity!r}) "
          f"start={res.initializer_id} converged={res.converged}")
    return 0


def _cmd_sweep(args) -> int:
    if args.config:
        config = parse_config(args.config)
    else:
        config = ExperimentConfig(
            forcing_id=args.forcing, forcing_params=_forcing_args(args),
            beta=args.beta,
            eps_list=tuple(sorted(args.eps_list, reverse=True)),
            output_dir=_outdir(args))
    config = dataclasses.replace(config, output_dir=_outdir(args, config.output_dir))

    def progress(rec: SweepRecord):
        print(f"eps={rec.eps:g} m={rec.m_eps!r} m/omega^2={rec.m_over_omega2!r} "
              f"limit={rec.predicted_limit!r} [{rec.wall_time:.1f}s]")

    records, minimizers = run_sweep(config, progress=progress)
    if args.plots:
        from .plots import emit_plots
        emit_plots(records, minimizers, config)
    return 0


def _cmd_limit(args) -> int:
    p = LimitProblem(args.alpha, args.beta, args.length, args.slope)
    v_star, mini_star, n_star = mu0_star(p)
    v_free, mini_free = mu0(p)
    c1, c2, c3, lower, upper = mu_bounds(p)
    print(f"mu0_star = {v_star!r}  (n* = {n_star})")
    print(f"mu0      = {v_free!r}  ({len(mini_free.jumps)} jumps)")
    print(f"bounds: [{lower!r}, {upper!r}]  c1={c1!r} c2={c2!r} c3={c3!r}")
    print("minimizer (boundary-value problem):",
          json.dumps(mini_star.to_record()))
    print("minimizer (free):", json.dumps(mini_free.to_record()))
    return 0


def _cmd_blowup(args) -> int:
    data = np.loadtxt(args.minimizer, delimiter=",", skiprows=1)
    u = SampledFunction(data[0, 0], data[1, 0] - data[0, 0], data[:, 1])
    forcing = get_forcing(args.forcing, **_forcing_args(args))
    f_s = forcing.sample(u.n)
    b = extract_blowup(u, f_s, args.center, args.eps, args.halfwidth, args.kind)
    fpx = forcing.derivative(np.array([args.center]))
    slope = float(fpx[0]) if fpx is not None else 0.0
    fit = fit_staircase(b, args.beta, slope)
    print(f"best fit: kind={fit.best_kind} tau0={fit.tau0_star!r} "
          f"distance={fit.distance!r} step_length={fit.step_length_estimate!r} "
          f"step_height={fit.step_height_estimate!r}")
    return 0


def _cmd_varifold(args) -> int:
    data = np.loadtxt(args.minimizer, delimiter=",", skiprows=1)
    u = SampledFunction(data[0, 0], data[1, 0] - data[0, 0], data[:, 1])
    forcing = get_forcing(args.forcing, **_forcing_args(args))
    f_s = forcing.sample(16385)
    fp = forcing.derivative(f_s.x)
    for phi_id in args.phis:
        pair = varifold_pair(u, phi_id)
        lim = varifold_limit(f_s, fp, phi_id)
        print(f"{phi_id}: pair={pair!r} limit={lim!r} residual={abs(pair - lim)!r}")
    return 0


def _cmd_check(args) -> int:
    from .acceptance import run_suite, SUITES
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}",
              file=sys.stderr)
        return 2
    report = run_suite(args.suite)
    for c in report.criteria:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    print(f"suite {args.suite}: {'PASS' if report.passed else 'FAIL'} "
          f"({sum(c.passed for c in report.criteria)}/{len(report.criteria)})")
    return 0 if report.passed else 1


def _cmd_plot(args) -> int:
    from .plots import plots_from_directory
    paths = plots_from_directory(args.records_dir)
    for p in paths:
        print(p)
    return 0


def _forcing_args(args) -> dict:
    params = {}
    for key in ("M", "c", "amplitude", "J"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    if getattr(args, "path", None):
        params["path"] = args.path
    return params


def _outdir(args, fallback: str = "out") -> str:
    return args.out or os.environ.get("STAIRCASE_LAB_OUT") or fallback


def _add_forcing_flags(sp) -> None:
    sp.add_argument("--forcing", default="linear")
    sp.add_argument("--M", type=float, default=None)
    sp.add_argument("--c", type=float, default=None)
    sp.add_argument("--amplitude", type=float, default=None)
    sp.add_argument("--J", type=float, default=None)
    sp.add_argument("--path", default=None)
    sp.add_argument("--beta", type=float, default=1.0)
    sp.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="staircase-lab",
        description="Minimize the perturbed Perona-Malik energy, solve its "
                    "limit problem, and verify staircase microstructure.")
    sub = ap.add_subparsers(dest="command")

    sp = sub.add_parser("minimize", help="single minimization")
    _add_forcing_flags(sp)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--grid-size", dest="grid_size", type=int, default=0)
    sp.set_defaults(fn=_cmd_minimize)

    sp = sub.add_parser("sweep", help="eps sweep with records and plots")
    _add_forcing_flags(sp)
    sp.add_argument("--config", default=None, help="flat key=value config file")
    sp.add_argument("--eps-list", dest="eps_list", type=float, nargs="+",
                    default=[0.2, 0.1, 0.07, 0.05])
    sp.add_argument("--plots", action="store_true")
    sp.set_defaults(fn=_cmd_sweep)

    sp = sub.add_parser("limit", help="solve the limit problem for a linear slope")
    sp.add_argument("--alpha", type=float, default=ALPHA0)
    sp.add_argument("--beta", type=float, default=1.0)
    sp.add_argument("--length", type=float, default=10.0)
    sp.add_argument("--slope", type=float, default=1.0)
    sp.set_defaults(fn=_cmd_limit)

    sp = sub.add_parser("blowup", help="blow up a saved minimizer and fit a staircase")
    _add_forcing_flags(sp)
    sp.add_argument("--minimizer", required=True, help="minimizer_<eps>.csv path")
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--center", type=float, default=0.5)
    sp.add_argument("--halfwidth", type=float, default=4.0)
    sp.add_argument("--kind", choices=["fake", "true"], default="fake")
    sp.set_defaults(fn=_cmd_blowup)

    sp = sub.add_parser("varifold", help="varifold pairings of a saved minimizer")
    _add_forcing_flags(sp)
    sp.add_argument("--minimizer", required=True)
    sp.add_argument("--phis", nargs="+",
                    default=["one", "cos_theta", "sin_theta", "x_poly_1*sin_theta"])
    sp.set_defaults(fn=_cmd_varifold)

    sp = sub.add_parser("check", help="run an acceptance suite")
    sp.add_argument("suite")
    sp.set_defaults(fn=_cmd_check)

    sp = sub.add_parser("plot", help="re-render plots from a records directory")
    sp.add_argument("records_dir")
    sp.set_defaults(fn=_cmd_plot)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not getattr(args, "fn", None):
        ap.print_help()
        return 2
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, (ValueError,)) and "unknown" in str(exc).lower() else 3


if __name__ == "__main__":
    sys.exit(main())
