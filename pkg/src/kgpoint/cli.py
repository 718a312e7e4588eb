"""Command-line front end: reproducible experiments from config files.

Commands

    kgpoint check          --config PATH
    kgpoint solve          --config PATH --omega W | --omega-range A:B:STEP [--out DIR]
    kgpoint simulate       --config PATH [--out DIR] [--seed N | --seeds N,N,...] [--parallel K]
    kgpoint spectrum       --trace CSV --windows t0:T[,t0:T...] [--out DIR] [--taper hann|none]
    kgpoint counterexample --kind wide_gap|linear_deg [parameter flags] [--out DIR] [--simulate]

Exit codes: 0 success, 1 usage or parse failure, 2 domain or assumption
failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import counterexamples as cx
from . import io as kio
from .config import ConfigError, ExperimentConfig, parse_config, parse_windows
from .model import UnboundedPotentialError, check_assumptions, lower_bound_constants
from .simulator import (
    FieldState,
    NoCommensurateGrid,
    apriori_bound,
    build_grid,
    energy_norm,
    evolve,
    perturbed_solitary_state,
    solitary_state,
)
from .solitary import ConvergedToZero, NoConvergence, amplitude_residual, continue_branch, solve_profile
from .spectral import time_spectrum

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3


def _print_json(obj):
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_check(args) -> int:
    cfg = parse_config(args.config)
    if cfg.model is None:
        raise ConfigError("check requires a [model] section")
    report = check_assumptions(cfg.model)
    out = {"a1": report.a1, "a2": report.a2, "a3": report.a3, "details": report.details}
    try:
        consts = lower_bound_constants(cfg.model)
        out["lower_bounds"] = {"A": list(consts.A), "B": list(consts.B)}
        bounded = True
    except UnboundedPotentialError as err:
        out["lower_bounds"] = {"error": str(err)}
        bounded = False
    _print_json(out)
    return EXIT_OK if (report.all_hold and bounded) else EXIT_DOMAIN


def _default_guess(cfg: ExperimentConfig):
    return [0.7 + 0j] * cfg.model.count


def cmd_solve(args) -> int:
    cfg = parse_config(args.config)
    if cfg.model is None:
        raise ConfigError("solve requires a [model] section")
    out_dir = Path(args.out)
    guess = _default_guess(cfg)
    try:
        if args.guess:
            guess = [complex(float(v), 0.0) for v in args.guess.split(",")]
        omega_range = None
        if args.omega_range:
            a, b, step = (float(v) for v in args.omega_range.split(":"))
            omega_range = (a, b, step)
    except ValueError as err:
        raise ConfigError(f"bad solve arguments: {err}") from err

    if omega_range:
        a, b, step = omega_range
        try:
            waves = continue_branch(cfg.model, a, b, step, guess)
            failed_at = None
        except NoConvergence as err:
            waves, failed_at = err.waves, err.omega
        header = ["omega", "kappa"]
        for j in range(cfg.model.count):
            header += [f"C{j + 1}_re", f"C{j + 1}_im"]
        header.append("residual_max")
        rows = []
        for w in waves:
            row = [w.omega, w.kappa]
            for c in w.amplitudes:
                row += [c.real, c.imag]
            row.append(float(np.max(np.abs(amplitude_residual(cfg.model, w)))))
            rows.append(row)
        kio.write_csv(out_dir / "branch.csv", header, rows)
        summary = {
            "solved": len(waves),
            "last_good_omega": waves[-1].omega if waves else None,
            "failed_at": failed_at,
        }
        _print_json(summary)
        kio.write_json(out_dir / "branch_summary.json", summary)
        return EXIT_NUMERICAL if failed_at is not None else EXIT_OK

    if args.omega is None:
        raise ConfigError("solve needs --omega or --omega-range")
    try:
        wave = solve_profile(cfg.model, args.omega, guess)
        zero = False
    except ConvergedToZero as err:
        wave, zero = err.wave, True
    except NoConvergence as err:
        print(f"no convergence at omega={err.omega}", file=sys.stderr)
        return EXIT_NUMERICAL
    doc = wave.to_json_dict()
    doc["zero_branch"] = zero
    doc["residual_max"] = float(np.max(np.abs(amplitude_residual(cfg.model, wave))))
    _print_json(doc)
    kio.write_json(out_dir / "wave.json", doc)
    return EXIT_OK


def _counterexample_solution(initial):
    family = initial.family or initial.params.get("family")
    p = initial.params
    if family == "wide_gap":
        return cx.wide_gap_construct(
            p.get("mass", 1.0), p.get("l", math.pi), p.get("alpha", 2.0), p.get("beta", -1.0)
        )
    if family == "linear_deg":
        return cx.linear_deg_construct(
            p.get("mass", 1.0), p.get("l", 1.0), p.get("omega", 0.3), p.get("alpha", 0.0), p.get("beta", 10.0)
        )
    raise ConfigError(f"unknown counterexample family {family!r}")


def build_initial_state(cfg: ExperimentConfig, grid, model, seed=None) -> FieldState:
    initial = cfg.initial
    if initial is None or initial.kind == "zero":
        z = np.zeros(grid.count, dtype=complex)
        return FieldState(z, z.copy(), 0.0)
    if initial.kind == "solitary":
        wave = solve_profile(model, initial.omega, _default_guess(cfg) if cfg.model else [0.7] * model.count)
        return solitary_state(model, grid, wave)
    if initial.kind == "perturbed_solitary":
        wave = solve_profile(model, initial.omega, [0.7 + 0j] * model.count)
        use_seed = initial.seed if seed is None else seed
        return perturbed_solitary_state(model, grid, wave, initial.noise_amplitude, use_seed)
    if initial.kind == "counterexample":
        return cx.init_from(_counterexample_solution(initial), grid)
    if initial.kind == "file":
        _, psi, pi = kio.read_state_csv(initial.path)
        if len(psi) != grid.count:
            raise ConfigError(f"state file has {len(psi)} nodes, grid has {grid.count}")
        return FieldState(psi, pi, 0.0)
    raise ConfigError(f"unknown initial data kind {initial.kind!r}")


def _resolve_model(cfg: ExperimentConfig):
    if cfg.initial is not None and cfg.initial.kind == "counterexample":
        return _counterexample_solution(cfg.initial).to_model()
    if cfg.model is None:
        raise ConfigError("simulate requires a [model] section or counterexample initial data")
    return cfg.model


def _run_simulation(cfg: ExperimentConfig, out_dir: Path, seed=None) -> dict:
    if cfg.grid is None or cfg.run is None:
        raise ConfigError("simulate requires [grid] and [run] sections")
    model = _resolve_model(cfg)
    grid = build_grid(model, cfg.grid.x_min, cfg.grid.x_max, cfg.grid.dx_target)
    state = build_initial_state(cfg, grid, model, seed=seed)
    series, final = evolve(
        model, grid, state, cfg.run.T, cfg.run.dt,
        observe_every=cfg.run.observe_every, seminorm_radii=cfg.run.seminorm_radii,
    )
    kio.series_to_csv(series, out_dir / "observers.csv")
    kio.state_to_csv(grid, final, out_dir / "final_state.csv")
    h0 = series.energy[0]
    scale = max(abs(h0), 1.0)
    bound = apriori_bound(model, grid, state)
    norms = [energy_norm(model, grid, s) for s in (state, final)]
    summary = {
        "grid": {"dx": grid.dx, "count": grid.count, "x_min": grid.x_min, "x_max": grid.x_max},
        "steps": int(round(cfg.run.T / cfg.run.dt)),
        "seed": seed if seed is not None else (cfg.initial.seed if cfg.initial else None),
        "max_energy_drift": float(np.max(np.abs(series.energy - h0))) / scale,
        "max_charge_drift": float(np.max(np.abs(series.charge - series.charge[0]))) / scale,
        "energy_norm_bound": bound,
        "energy_norm_initial": norms[0],
        "energy_norm_final": norms[1],
        "bound_violations": int(sum(n > bound for n in norms)),
    }
    kio.write_json(out_dir / "summary.json", summary)
    return summary


def _simulate_worker(config_path: str, out_dir: str, seed):
    cfg = parse_config(config_path)
    return _run_simulation(cfg, Path(out_dir), seed=seed)


def cmd_simulate(args) -> int:
    cfg = parse_config(args.config)
    out_dir = Path(args.out)
    if args.seeds:
        seeds = [int(s) for s in args.seeds.split(",")]
        jobs = [(args.config, str(out_dir / f"seed_{s}"), s) for s in seeds]
        if args.parallel > 1:
            with ProcessPoolExecutor(max_workers=args.parallel) as pool:
                summaries = list(pool.map(_simulate_worker, *zip(*jobs)))
        else:
            summaries = [_simulate_worker(*job) for job in jobs]
        _print_json({str(s): summ for s, summ in zip(seeds, summaries)})
        return EXIT_OK
    summary = _run_simulation(cfg, out_dir, seed=args.seed)
    _print_json(summary)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    windows = parse_windows(args.windows)
    times, trace = kio.read_trace_csv(args.trace, re_col=args.re_col, im_col=args.im_col)
    if len(times) < 2:
        raise ConfigError("trace is too short")
    sample_dt = float(times[1] - times[0])
    out_dir = Path(args.out)
    summary = []
    for i, (t0, T) in enumerate(windows):
        est = time_spectrum(trace, sample_dt, t0, T, taper=args.taper, trace_t0=float(times[0]))
        kio.spectrum_to_csv(est, out_dir / f"spectrum_{i}.csv")
        summary.append(
            {
                "t0": est.t0,
                "T": est.T,
                "dominant": None if not est.has_dominant else est.dominant,
                "band_mass_ratio": est.band_mass_ratio,
            }
        )
    kio.write_json(out_dir / "spectrum_summary.json", summary)
    _print_json(summary)
    return EXIT_OK


def cmd_counterexample(args) -> int:
    out_dir = Path(args.out)
    if args.kind == "wide_gap":
        sol = cx.wide_gap_construct(args.mass, args.L if args.L is not None else math.pi,
                                    args.alpha if args.alpha is not None else 2.0,
                                    args.beta if args.beta is not None else -1.0)
    elif args.kind == "linear_deg":
        sol = cx.linear_deg_construct(args.mass, args.L if args.L is not None else 1.0,
                                      args.omega if args.omega is not None else 0.3,
                                      args.alpha if args.alpha is not None else 0.0,
                                      args.beta if args.beta is not None else 10.0)
    else:
        raise ConfigError(f"unknown counterexample kind {args.kind!r}")
    report = cx.verify_exact(sol)
    params_doc = asdict(sol)
    kio.write_json(out_dir / "params.json", params_doc)
    kio.write_json(out_dir / "verification.json", report.to_json_dict())
    _print_json({"params": params_doc, "verification": report.to_json_dict()})

    if args.simulate:
        model = sol.to_model()
        half = args.half_width
        dx_target = args.dx_target
        grid = build_grid(model, -half, sol.L + half, dx_target)
        state = cx.init_from(sol, grid)
        dt = 0.45 * grid.dx
        series, final = evolve(model, grid, state, args.T, dt, observe_every=args.observe_every)
        kio.series_to_csv(series, out_dir / "observers.csv")
        kio.state_to_csv(grid, final, out_dir / "final_state.csv")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kgpoint", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check model assumptions")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="solve solitary-wave profiles")
    p.add_argument("--config", required=True)
    p.add_argument("--omega", type=float)
    p.add_argument("--omega-range", dest="omega_range")
    p.add_argument("--guess")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("simulate", help="evolve a configured experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="out")
    p.add_argument("--seed", type=int)
    p.add_argument("--seeds", help="comma-separated seed sweep")
    p.add_argument("--parallel", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="windowed spectra of a stored trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--windows", required=True)
    p.add_argument("--taper", default="hann", choices=("hann", "none"))
    p.add_argument("--re-col", dest="re_col", default="psi1_re")
    p.add_argument("--im-col", dest="im_col", default="psi1_im")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("counterexample", help="construct and verify a two-frequency wave")
    p.add_argument("--kind", required=True, choices=("wide_gap", "linear_deg"))
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--L", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--out", default="out")
    p.add_argument("--simulate", action="store_true", help="also evolve from the exact initial data")
    p.add_argument("--T", type=float, default=60.0)
    p.add_argument("--half-width", dest="half_width", type=float, default=30.0)
    p.add_argument("--dx-target", dest="dx_target", type=float, default=0.02)
    p.add_argument("--observe-every", dest="observe_every", type=int, default=5)
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (cx.GapTooSmall, cx.NoSolution, cx.Degenerate, NoCommensurateGrid,
            UnboundedPotentialError) as err:
        print(f"domain error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as err:
        print(f"domain error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NoConvergence, FloatingPointError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
