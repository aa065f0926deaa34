"""Batch command-line front end: simulate, fit, verify, predict, export-plot.

Reports are deterministic for fixed inputs and seeds: two runs with the
same argv and files produce byte-identical stdout. Exit codes: 0 success
(and verification passed), 1 verification failed, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .datagen import (
    GaussianBump,
    SineMode,
    WaveConfig,
    almost_periodic_history,
    periodic_history,
    simulate_wave_1d,
)
from .errors import SclRomError
from .model import FitOptions, SclRomModel, fit, predict, verify_mimetic
from .ohf import SnapshotHistory
from .persistence import (
    format_complex_entry,
    read_model,
    read_snapshots,
    write_model,
    write_snapshots,
)

_BANNER = "-" * 61
DEFAULT_VERIFY_EPS = 1e-10


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sclrom", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a snapshot file")
    sim_sub = sim.add_subparsers(dest="generator", required=True)

    periodic = sim_sub.add_parser("periodic", help="exactly periodic seeded trajectory")
    periodic.add_argument("--n", type=int, required=True)
    periodic.add_argument("--T", type=int, required=True, dest="period")
    periodic.add_argument("--seed", type=int, required=True)
    periodic.add_argument("--horizon", type=int, default=None)
    periodic.add_argument("--out", required=True)
    periodic.add_argument("--format", choices=["binary", "csv"], default="binary")
    periodic.add_argument("--log-style", choices=["plain", "paper"], default="plain")

    almost = sim_sub.add_parser("almost-periodic", help="periodic trajectory plus noise")
    almost.add_argument("--n", type=int, required=True)
    almost.add_argument("--T", type=int, required=True, dest="period")
    almost.add_argument("--eps-pert", type=float, required=True)
    almost.add_argument("--horizon", type=int, required=True)
    almost.add_argument("--seed", type=int, required=True)
    almost.add_argument("--out", required=True)
    almost.add_argument("--clean-out", default=None)
    almost.add_argument("--format", choices=["binary", "csv"], default="binary")
    almost.add_argument("--log-style", choices=["plain", "paper"], default="plain")

    wave = sim_sub.add_parser("wave", help="1-D fixed-end wave simulation")
    wave.add_argument("--nx", type=int, default=100)
    wave.add_argument("--nt", type=int, default=40)
    wave.add_argument("--L", type=float, default=1.0)
    wave.add_argument("--c", type=float, default=1.0)
    wave.add_argument("--dt", type=float, default=None,
                      help="time step; defaults to one fundamental period over nt")
    wave.add_argument("--profile", choices=["sine", "gaussian"], default="sine")
    wave.add_argument("--mode-k", type=int, default=1)
    wave.add_argument("--center", type=float, default=0.5)
    wave.add_argument("--width", type=float, default=0.1)
    wave.add_argument("--out", required=True)
    wave.add_argument("--format", choices=["binary", "csv"], default="binary")
    wave.add_argument("--log-style", choices=["plain", "paper"], default="plain")

    fit_p = sub.add_parser("fit", help="fit a reduced model to a snapshot file")
    fit_p.add_argument("snapshots")
    fit_p.add_argument("--mode", choices=["monomial", "lsq"], default="monomial")
    fit_p.add_argument("--eps", type=float, default=1e-10)
    fit_p.add_argument("--rank-tol", type=float, default=1e-12)
    fit_p.add_argument("--truncate-rank", action="store_true")
    fit_p.add_argument("--period", type=int, default=None)
    fit_p.add_argument("--out", required=True)
    fit_p.add_argument("--log-style", choices=["plain", "paper"], default="plain")

    verify = sub.add_parser("verify", help="replay a model against snapshots")
    verify.add_argument("model")
    verify.add_argument("snapshots")
    verify.add_argument("--eps", type=float, default=DEFAULT_VERIFY_EPS)
    verify.add_argument("--log-style", choices=["plain", "paper"], default="plain")

    predict_p = sub.add_parser("predict", help="write model predictions as snapshots")
    predict_p.add_argument("model")
    predict_p.add_argument("--t0", type=int, default=0)
    predict_p.add_argument("--t1", type=int, required=True)
    predict_p.add_argument("--out", required=True)
    predict_p.add_argument("--format", choices=["binary", "csv"], default="binary")

    export = sub.add_parser("export-plot", help="per-step residuals and components as CSV")
    export.add_argument("snapshots")
    export.add_argument("--model", default=None)
    export.add_argument("--components", default="0,1,2,3",
                        help="comma-separated state indices to export")
    export.add_argument("--out", required=True)

    return parser


def _banner_block(title: str) -> str:
    return f"{_BANNER}\n{title}\n{_BANNER}"


def _cmd_simulate(args) -> int:
    if args.generator == "periodic":
        history = periodic_history(args.n, args.period, args.seed, args.horizon)
    elif args.generator == "almost-periodic":
        pair = almost_periodic_history(
            args.n, args.period, args.eps_pert, args.horizon, args.seed
        )
        if args.clean_out:
            write_snapshots(pair.clean, args.clean_out, format=args.format)
        history = pair.perturbed
    else:
        dt = args.dt if args.dt is not None else 2.0 * args.L / (args.c * args.nt)
        if args.profile == "sine":
            w0 = SineMode(args.mode_k)
        else:
            w0 = GaussianBump(args.center, args.width)
        cfg = WaveConfig(L=args.L, c=args.c, nx=args.nx, nt=args.nt, dt=dt, w0=w0)
        if args.log_style == "paper":
            print(_banner_block("                     Running simulation:"))
        history = simulate_wave_1d(cfg)
    write_snapshots(history, args.out, format=args.format)
    print(f"simulate: wrote {args.out} (n = {history.n}, m = {history.m})")
    return 0


def _cmd_fit(args) -> int:
    history = read_snapshots(args.snapshots)
    mode = "least_squares" if args.mode == "lsq" else "monomial"
    opts = FitOptions(
        mode=mode,
        epsilon=args.eps,
        rank_tol=args.rank_tol,
        truncate_rank=args.truncate_rank,
        period=args.period,
    )
    if args.log_style == "paper":
        print(_banner_block(" Computing circular matrix representations in C[U[v1|vm]]:"))
    model, report = fit(history, opts)
    write_model(model, args.out)
    met = "yes" if report.target_met else "no"
    print(
        f"fit: wrote {args.out} (epsilon_achieved = {report.epsilon_achieved:.4e}, "
        f"target_met = {met})"
    )
    return 0


def _cmd_verify(args) -> int:
    model = read_model(args.model)
    history = read_snapshots(args.snapshots)
    report = verify_mimetic(model, history, args.eps)
    comparator = "<=" if report.passed else ">"
    lines = []
    if args.log_style == "paper":
        lines.append(_BANNER)
        lines.append(" Verifying circular mimetic constraints for C[U[v1|vm]]:")
        lines.append(_BANNER)
        lines.append("Verification passed..." if report.passed else "Verification failed...")
    lines.append(
        f"max{{||K U^k T x0 - xk|| | 1<=k<=m}} = {report.max_residual:.4e} {comparator} eps"
    )
    if args.log_style == "paper":
        lines.append(_BANNER)
    lines.append(f"For m = {report.m}")
    lines.append(f"For n = {report.n}")
    lines.append(f"For eps = {report.eps:.4e}")
    if args.log_style == "paper":
        lines.append(_BANNER)
    print("\n".join(lines))
    return 0 if report.passed else 1


def _cmd_predict(args) -> int:
    model = read_model(args.model)
    if args.t1 <= args.t0 or args.t0 < 0:
        print("predict: need 0 <= t0 < t1", file=sys.stderr)
        return 2
    columns = [predict(model, t) for t in range(args.t0, args.t1)]
    out_history = SnapshotHistory(np.column_stack(columns))
    write_snapshots(out_history, args.out, format=args.format)
    print(f"predict: wrote {args.out} (n = {out_history.n}, steps = {out_history.m})")
    return 0


def _cmd_export_plot(args) -> int:
    history = read_snapshots(args.snapshots)
    model: SclRomModel | None = read_model(args.model) if args.model else None
    try:
        components = [int(p) for p in args.components.split(",") if p.strip() != ""]
    except ValueError:
        print(f"export-plot: bad --components {args.components!r}", file=sys.stderr)
        return 2
    for idx in components:
        if idx < 0 or idx >= history.n:
            print(f"export-plot: component {idx} out of range for n={history.n}", file=sys.stderr)
            return 2
    header = ["step", "residual"] + [f"state{idx}" for idx in components]
    if model is not None:
        header += [f"model{idx}" for idx in components]
    rows = [",".join(header)]
    for k in range(history.m):
        fields = [str(k)]
        xk = history.data[:, k]
        if model is not None:
            pk = predict(model, k)
            fields.append(format_complex_entry(complex(np.linalg.norm(pk - xk))))
        else:
            fields.append("")
        fields += [format_complex_entry(xk[idx]) for idx in components]
        if model is not None:
            fields += [format_complex_entry(pk[idx]) for idx in components]
        rows.append(",".join(fields))
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(rows) + "\n")
    except OSError as exc:
        print(f"export-plot: cannot write {args.out}: {exc}", file=sys.stderr)
        return 2
    print(f"export-plot: wrote {args.out} ({history.m} steps)")
    return 0


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "fit":
            return _cmd_fit(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "predict":
            return _cmd_predict(args)
        if args.command == "export-plot":
            return _cmd_export_plot(args)
    except SclRomError as exc:
        print(f"sclrom {args.command}: {exc}", file=sys.stderr)
        return 2
    print(f"sclrom: unknown command {args.command!r}", file=sys.stderr)
    return 2


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
