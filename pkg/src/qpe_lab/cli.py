"""Command-line front end.

Verbs:

* ``build``     print or save a (optionally transpiled) circuit as text
* ``simulate``  run one noisy simulation and print the output stats
* ``sweep``     run a sweep described by a config file into an output dir
* ``fit``       fit the saturation model to sweep CSV rows
* ``report``    split a sweep CSV into per-figure panel files

All commands are deterministic given their arguments (plus seed where
randomness is involved).  ``QPE_LAB_SEED`` provides the seed fallback.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .channels import CHANNEL_KINDS
from .circuit import build_qpe, serialize_circuit
from .engine import (
    DEFAULT_SHOTS,
    TWO_QUBIT_NOISE_POLICIES,
    distribution_stats,
    qpe_distribution,
)
from .experiment import (
    DEFAULT_FIT_WINDOW,
    emit_results,
    fit_exponential,
    group_rows,
    load_sweep_config,
    read_rows_csv,
    run_sweep,
    write_fits_json,
)
from .transpile import transpile

__all__ = ["main"]


def _default_seed() -> int:
    return int(os.environ.get("QPE_LAB_SEED", "0"))


def _parse_window(text: str) -> tuple:
    try:
        lo, hi = text.split(":")
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"window must look like lo:hi, got {text!r}"
        )
    if hi <= lo:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return (lo, hi)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpe-lab",
        description="Noisy quantum phase estimation: simulate, sweep, fit.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_build = sub.add_parser("build", help="construct the QPE circuit")
    p_build.add_argument("--n", type=int, required=True, help="estimation qubits")
    p_build.add_argument("--theta", type=float, required=True)
    p_build.add_argument("--transpile", action="store_true")
    p_build.add_argument("--out", help="write circuit text here (default stdout)")

    p_sim = sub.add_parser("simulate", help="run one noisy simulation")
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--theta", type=float, required=True)
    p_sim.add_argument("--channel", required=True, choices=CHANNEL_KINDS)
    p_sim.add_argument("--p", type=float, required=True)
    p_sim.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p_sim.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    p_sim.add_argument("--seed", type=int, default=_default_seed())
    p_sim.add_argument(
        "--two-qubit-noise", choices=TWO_QUBIT_NOISE_POLICIES, default="both"
    )
    p_sim.add_argument("--dump", help="also write the k,probability table here")

    p_sweep = sub.add_parser("sweep", help="run a sweep from a config file")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--jobs", type=int, default=1)

    p_fit = sub.add_parser("fit", help="fit delta_theta(p) = k1 + k2*exp(-k3*p)")
    p_fit.add_argument("--csv", required=True, help="rows.csv from a sweep")
    p_fit.add_argument("--window", type=_parse_window, default=DEFAULT_FIT_WINDOW)
    p_fit.add_argument("--out", help="fit JSON path (default: print table only)")

    p_report = sub.add_parser("report", help="emit per-figure panel files")
    p_report.add_argument("--csv", required=True)
    p_report.add_argument("--out", required=True, help="output directory")
    return parser


def _cmd_build(args) -> int:
    circuit = build_qpe(args.n, args.theta)
    if args.transpile:
        circuit = transpile(circuit)
    text = serialize_circuit(circuit)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_simulate(args) -> int:
    dist = qpe_distribution(
        args.n,
        args.theta,
        args.channel,
        args.p,
        mode=args.mode,
        shots=args.shots,
        seed=args.seed,
        two_qubit_noise=args.two_qubit_noise,
    )
    theta_bar, delta_theta = distribution_stats(dist)
    print(f"theta_bar={theta_bar!r} delta_theta={delta_theta!r}")
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write("k,probability\n")
            for k, prob in enumerate(dist.probs):
                fh.write(f"{k},{float(prob)!r}\n")
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_sweep_config(args.config)
    rows = run_sweep(cfg, jobs=max(1, args.jobs))
    meta = {
        "channels": ",".join(cfg.channel_kinds),
        "mode": cfg.mode,
        "seed": cfg.seed,
        "shots": cfg.shots,
        "two_qubit_noise": cfg.two_qubit_noise,
    }
    paths = emit_results(rows, fits=None, out_dir=args.out, header_meta=meta)
    config_path = os.path.join(args.out, "config.json")
    with open(config_path, "w") as fh:
        json.dump(
            {
                "channels": list(cfg.channel_kinds),
                "n": list(cfg.n_list),
                "theta": list(cfg.theta_list),
                "p": list(cfg.p_grid),
                "mode": cfg.mode,
                "shots": cfg.shots,
                "seed": cfg.seed,
                "two_qubit_noise": cfg.two_qubit_noise,
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    print(f"wrote {paths['rows']} ({len(rows)} rows) and {config_path}")
    return 0


def _cmd_fit(args) -> int:
    rows = read_rows_csv(args.csv)
    if not rows:
        print("error: no rows in CSV", file=sys.stderr)
        return 1
    fits = [
        fit_exponential(series, window=args.window)
        for _, series in sorted(group_rows(rows).items())
    ]
    by_theta: dict = {}
    for fit in fits:
        by_theta.setdefault((fit.theta_actual, fit.n), []).append(fit)
    for (theta, n), group in sorted(by_theta.items()):
        print(f"theta_actual={theta} (n={n})")
        print(f"  {'channel':14s} {'k1':>8s} {'k2':>8s} {'k3':>8s} {'R^2':>8s}")
        for fit in sorted(group, key=lambda f: f.channel):
            print(
                f"  {fit.channel:14s} {fit.k1:8.3f} {fit.k2:8.3f} "
                f"{fit.k3:8.1f} {fit.r_squared:8.4f}"
            )
    if args.out:
        write_fits_json(fits, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_report(args) -> int:
    rows = read_rows_csv(args.csv)
    if not rows:
        print("error: no rows in CSV", file=sys.stderr)
        return 1
    os.makedirs(args.out, exist_ok=True)
    written = []

    # panels against p at fixed (channel, n, theta)
    for (channel, n, theta), series in sorted(group_rows(rows).items()):
        if len({r.p for r in series}) < 2:
            continue
        path = os.path.join(args.out, f"p_sweep_{channel}_n{n}_theta{theta}.csv")
        with open(path, "w") as fh:
            fh.write("p,theta_bar,delta_theta\n")
            for r in series:
                fh.write(f"{r.p!r},{r.theta_bar!r},{r.delta_theta!r}\n")
        written.append(path)

    # panels against n at fixed (channel, theta, p)
    by_np: dict = {}
    for r in rows:
        by_np.setdefault((r.channel, r.theta_actual, r.p), []).append(r)
    for (channel, theta, p), series in sorted(by_np.items()):
        if len({r.n for r in series}) < 2:
            continue
        series.sort(key=lambda r: r.n)
        path = os.path.join(args.out, f"n_sweep_{channel}_theta{theta}_p{p}.csv")
        with open(path, "w") as fh:
            fh.write("n,theta_bar,delta_theta\n")
            for r in series:
                fh.write(f"{r.n},{r.theta_bar!r},{r.delta_theta!r}\n")
        written.append(path)

    print(f"wrote {len(written)} panel file(s) under {args.out}")
    return 0


_HANDLERS = {
    "build": _cmd_build,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "fit": _cmd_fit,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.verb](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
