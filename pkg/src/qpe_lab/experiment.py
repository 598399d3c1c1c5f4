"""Sweep orchestration, result files, and the saturation-model fits.

A sweep runs the noisy phase-estimation simulation over the cross product of
(channel kind, estimation qubits n, actual theta, error probability p) and
records the output mean and standard deviation per point.  Rows are returned
and written in canonical order (channel, n, theta, p) so identical configs
reproduce identical files byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import CHANNEL_KINDS
from .engine import DEFAULT_SHOTS, distribution_stats, qpe_distribution
from .fitting import LinearFit, fit_exp_saturation, fit_line

__all__ = [
    "SweepConfig",
    "SweepRow",
    "FitResult",
    "LinearTrend",
    "ConfigError",
    "run_sweep",
    "fit_exponential",
    "n_sweep_summary",
    "group_rows",
    "write_rows_csv",
    "read_rows_csv",
    "write_fits_json",
    "emit_results",
    "parse_sweep_config",
    "load_sweep_config",
]

CSV_COLUMNS = (
    "channel",
    "n",
    "theta_actual",
    "p",
    "theta_bar",
    "delta_theta",
    "mode",
    "shots",
    "seed",
)

DEFAULT_FIT_WINDOW = (0.0, 0.01)


@dataclass(frozen=True)
class SweepConfig:
    n_list: tuple
    theta_list: tuple
    p_grid: tuple
    channel_kinds: tuple = CHANNEL_KINDS
    mode: str = "exact"
    shots: int = DEFAULT_SHOTS
    seed: int = 0
    two_qubit_noise: str = "both"

    def __post_init__(self):
        if not self.n_list or not self.theta_list or not self.p_grid:
            raise ValueError("n_list, theta_list and p_grid must be non-empty")
        if not self.channel_kinds:
            raise ValueError("channel_kinds must be non-empty")
        for kind in self.channel_kinds:
            if kind not in CHANNEL_KINDS:
                raise ValueError(f"unknown channel kind {kind!r}")
        if any(not 0.0 <= p <= 1.0 for p in self.p_grid):
            raise ValueError("p values must lie in [0, 1]")
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"mode must be exact or sampled, got {self.mode!r}")


@dataclass(frozen=True)
class SweepRow:
    channel: str
    n: int
    theta_actual: float
    p: float
    theta_bar: float
    delta_theta: float
    mode: str
    shots: int
    seed: int


@dataclass(frozen=True)
class FitResult:
    """Exponential-saturation fit of one (channel, n, theta) series."""

    channel: str
    n: int
    theta_actual: float
    k1: float
    k2: float
    k3: float
    r_squared: float
    window: tuple
    iterations: int
    converged: bool


@dataclass(frozen=True)
class LinearTrend:
    """Linear fits of theta_bar and delta_theta against n at fixed p."""

    channel: str
    theta_actual: float
    p: float
    theta_bar_fit: LinearFit
    delta_theta_fit: LinearFit


def _sweep_points(cfg: SweepConfig) -> list:
    points = [
        (kind, int(n), float(theta), float(p))
        for kind in cfg.channel_kinds
        for n in cfg.n_list
        for theta in cfg.theta_list
        for p in cfg.p_grid
    ]
    points.sort()
    return points


def _point_seed(base_seed: int, index: int) -> int:
    # Stable per-point stream: replaying one row only needs its recorded seed.
    ss = np.random.SeedSequence([int(base_seed), int(index)])
    return int(ss.generate_state(1)[0])


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> list:
    """One SweepRow per (channel, n, theta, p), in canonical order."""
    points = _sweep_points(cfg)

    def evaluate(item) -> SweepRow:
        index, (kind, n, theta, p) = item
        seed = _point_seed(cfg.seed, index) if cfg.mode == "sampled" else cfg.seed
        dist = qpe_distribution(
            n,
            theta,
            kind,
            p,
            mode=cfg.mode,
            shots=cfg.shots,
            seed=seed,
            two_qubit_noise=cfg.two_qubit_noise,
        )
        theta_bar, delta_theta = distribution_stats(dist)
        return SweepRow(
            channel=kind,
            n=n,
            theta_actual=theta,
            p=p,
            theta_bar=theta_bar,
            delta_theta=delta_theta,
            mode=cfg.mode,
            shots=cfg.shots if cfg.mode == "sampled" else 0,
            seed=seed,
        )

    items = list(enumerate(points))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(evaluate, items))
    else:
        rows = [evaluate(item) for item in items]
    return rows


def group_rows(rows) -> dict:
    """Rows keyed by (channel, n, theta_actual), each sorted by p."""
    grouped: dict = {}
    for row in rows:
        grouped.setdefault((row.channel, row.n, row.theta_actual), []).append(row)
    for key in grouped:
        grouped[key].sort(key=lambda r: r.p)
    return grouped


def fit_exponential(rows, window=DEFAULT_FIT_WINDOW) -> FitResult:
    """Fit delta_theta(p) = k1 + k2*exp(-k3*p) over one series.

    ``rows`` must all belong to a single (channel, n, theta) series; only
    points with p inside ``window`` (inclusive) enter the fit.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to fit")
    keys = {(r.channel, r.n, r.theta_actual) for r in rows}
    if len(keys) != 1:
        raise ValueError(f"rows mix several series: {sorted(keys)}")
    lo, hi = float(window[0]), float(window[1])
    selected = sorted((r for r in rows if lo <= r.p <= hi), key=lambda r: r.p)
    if len(selected) < 6:
        raise ValueError(
            f"need at least 6 rows inside window [{lo}, {hi}], got {len(selected)}"
        )
    p = np.array([r.p for r in selected])
    y = np.array([r.delta_theta for r in selected])
    fit = fit_exp_saturation(p, y)
    channel, n, theta = next(iter(keys))
    return FitResult(
        channel=channel,
        n=n,
        theta_actual=theta,
        k1=fit.k1,
        k2=fit.k2,
        k3=fit.k3,
        r_squared=fit.r_squared,
        window=(lo, hi),
        iterations=fit.iterations,
        converged=fit.converged,
    )


def n_sweep_summary(rows) -> list:
    """Per-(channel, theta) linear trends of the stats against n at fixed p."""
    rows = list(rows)
    p_values = {r.p for r in rows}
    if len(p_values) != 1:
        raise ValueError(f"n-sweep rows must share one p, got {sorted(p_values)}")
    (p,) = p_values
    grouped: dict = {}
    for row in rows:
        grouped.setdefault((row.channel, row.theta_actual), []).append(row)

    trends = []
    for (channel, theta), series in sorted(grouped.items()):
        series.sort(key=lambda r: r.n)
        ns = [r.n for r in series]
        if len(set(ns)) < 3:
            raise ValueError(
                f"need at least 3 distinct n for {channel}, theta={theta}"
            )
        trends.append(
            LinearTrend(
                channel=channel,
                theta_actual=theta,
                p=p,
                theta_bar_fit=fit_line(ns, [r.theta_bar for r in series]),
                delta_theta_fit=fit_line(ns, [r.delta_theta for r in series]),
            )
        )
    return trends


# --------------------------------------------------------------------------
# files


def _format_value(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def write_rows_csv(rows, path, header_meta: dict | None = None) -> None:
    """CSV with the documented column order; floats keep full precision so
    the file round-trips exactly."""
    with open(path, "w", newline="") as fh:
        if header_meta:
            for key in sorted(header_meta):
                fh.write(f"# {key}={header_meta[key]}\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                [_format_value(getattr(row, column)) for column in CSV_COLUMNS]
            )


def read_rows_csv(path) -> list:
    with open(path, newline="") as fh:
        body = "".join(ln for ln in fh if not ln.startswith("#"))
    reader = csv.DictReader(io.StringIO(body))
    rows = []
    for record in reader:
        rows.append(
            SweepRow(
                channel=record["channel"],
                n=int(record["n"]),
                theta_actual=float(record["theta_actual"]),
                p=float(record["p"]),
                theta_bar=float(record["theta_bar"]),
                delta_theta=float(record["delta_theta"]),
                mode=record["mode"],
                shots=int(record["shots"]),
                seed=int(record["seed"]),
            )
        )
    return rows


def write_fits_json(fits, path) -> None:
    payload = [
        {
            "channel": f.channel,
            "n": f.n,
            "theta_actual": f.theta_actual,
            "k1": f.k1,
            "k2": f.k2,
            "k3": f.k3,
            "r_squared": f.r_squared,
            "window": [f.window[0], f.window[1]],
            "converged": f.converged,
        }
        for f in fits
    ]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def emit_results(rows, fits, out_dir, header_meta: dict | None = None) -> dict:
    """Write rows.csv (+ fits.json when fits given); returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {"rows": os.path.join(out_dir, "rows.csv")}
    write_rows_csv(rows, paths["rows"], header_meta=header_meta)
    if fits:
        paths["fits"] = os.path.join(out_dir, "fits.json")
        write_fits_json(fits, paths["fits"])
    return paths


# --------------------------------------------------------------------------
# config files


class ConfigError(ValueError):
    pass


def _parse_float_list(value: str, lineno: int) -> tuple:
    value = value.strip()
    if value.startswith("linspace:"):
        parts = value.split(":")[1:]
        if len(parts) != 3:
            raise ConfigError(
                f"line {lineno}: linspace takes start:stop:count, got {value!r}"
            )
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        return tuple(float(x) for x in np.linspace(start, stop, count))
    try:
        return tuple(float(x) for x in value.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: bad number list {value!r}") from exc


def parse_sweep_config(text: str) -> SweepConfig:
    """Parse the flat ``key = value`` sweep configuration format.

    Keys: channels, n, theta, p, mode, shots, seed, two_qubit_noise.  Lists
    are comma separated; ``p`` also accepts ``linspace:start:stop:count``.
    """
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key == "channels":
            values["channel_kinds"] = tuple(
                v.strip().lower() for v in value.split(",") if v.strip()
            )
        elif key in ("n", "n_list"):
            try:
                values["n_list"] = tuple(
                    int(v) for v in value.split(",") if v.strip()
                )
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad integer list {value!r}") from exc
        elif key in ("theta", "theta_list"):
            values["theta_list"] = _parse_float_list(value, lineno)
        elif key in ("p", "p_grid"):
            values["p_grid"] = _parse_float_list(value, lineno)
        elif key == "mode":
            values["mode"] = value.lower()
        elif key == "shots":
            values["shots"] = int(value)
        elif key == "seed":
            values["seed"] = int(value)
        elif key == "two_qubit_noise":
            values["two_qubit_noise"] = value.lower()
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    missing = [k for k in ("n_list", "theta_list", "p_grid") if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    try:
        return SweepConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_sweep_config(path) -> SweepConfig:
    with open(path) as fh:
        return parse_sweep_config(fh.read())
