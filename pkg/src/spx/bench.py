"""Experiment orchestration and report emission.

`bench_sweep` runs the known-optimum solver across an (n, seed) grid of
planted/random instances, collects measured work counters next to the
oracle-exact threshold/successful-set sizes and the predicted exponent,
and emits a fixed-column CSV plus a mirroring JSON report (schema
"spx-report/1") with the full run configuration embedded.  The report
path also renders a pair of matplotlib figures (measured vs predicted
scaling, per-n draw counts) next to the delimited output.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import log2
from pathlib import Path

from . import __version__
from .exponents import binary_entropy, flip_rates
from .formats import format_rational, gen_random_lin2
from .oracle import (brute_force_minimum, successful_set_count_correlated,
                     threshold_set_count)
from .sampling import RngStream
from .solvers import solve_case1

CSV_COLUMNS = [
    # one row per (n, seed); all counts exact, exponents binary64
    "family", "n", "k", "m", "seed", "eta",
    "h_min", "iterations", "raw_draws", "ball_points",
    "threshold_count", "successful_count", "predicted_exponent",
]


@dataclass
class RunConfig:
    """Everything needed to replay a run bit-for-bit."""

    command: str = "bench"
    family: str = "lin2"
    k: int = 3
    density: int = 2              # m = density * n
    n_values: tuple[int, ...] = (10, 12, 14)
    seeds: tuple[int, ...] = tuple(range(5))
    eta: Fraction = Fraction(1, 2)
    delta: Fraction = Fraction(1, 10)
    slack: float = 1.0
    budget: int = 10 ** 7
    workers: int = 1
    out_dir: str = "bench-out"
    report_format: str = "spx-report/1"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["eta"] = format_rational(self.eta)
        d["delta"] = format_rational(self.delta)
        d["n_values"] = list(self.n_values)
        d["seeds"] = list(self.seeds)
        return d


def effective_workers(config: RunConfig) -> int:
    env = os.environ.get("SPX_THREADS")
    if env:
        return max(1, int(env))
    return max(1, config.workers)


def _bench_cell(config: RunConfig, n: int, seed: int) -> dict | None:
    """One (n, seed) measurement; None when the instance is degenerate."""
    m = config.density * n
    inst = gen_random_lin2(n, config.k, m, (-1, 1), seed)
    res = brute_force_minimum(inst)
    if res.h_min >= 0:
        return None
    eta = config.eta
    t_count = threshold_set_count(inst, res.h_min, eta)
    s_count = successful_set_count_correlated(inst, res.minimizers[0],
                                              res.h_min, eta)
    rates = flip_rates(eta, config.k, n)
    predicted = max(0.0, 1.0 - binary_entropy(rates.q_eta))
    rng = RngStream(seed, stream_index=n)
    out = solve_case1(inst, res.h_min, eta, rng, budget=config.budget)
    return {
        "family": config.family, "n": n, "k": config.k, "m": m,
        "seed": seed, "eta": format_rational(eta),
        "h_min": format_rational(res.h_min),
        "iterations": out.iterations, "raw_draws": out.raw_draws,
        "ball_points": out.ball_points,
        "threshold_count": t_count, "successful_count": s_count,
        "predicted_exponent": predicted,
    }


def _regression_slope(points: list[tuple[float, float]]) -> float | None:
    """Least-squares slope of y on x; None with fewer than 2 distinct x."""
    if len({x for x, _ in points}) < 2:
        return None
    nx = len(points)
    mx = sum(x for x, _ in points) / nx
    my = sum(y for _, y in points) / nx
    num = sum((x - mx) * (y - my) for x, y in points)
    den = sum((x - mx) ** 2 for x, _ in points)
    return num / den


def bench_sweep(config: RunConfig) -> dict:
    """Run the sweep and return the in-memory report (not yet written)."""
    cells = [(n, seed) for n in config.n_values for seed in config.seeds]
    workers = effective_workers(config)
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_cell, [config] * len(cells),
                                 [n for n, _ in cells], [s for _, s in cells]))
    else:
        rows = [_bench_cell(config, n, s) for n, s in cells]
    rows = [r for r in rows if r is not None]

    draw_points = [(r["n"], log2(max(1, r["raw_draws"]))) for r in rows]
    work_points = [(r["n"], log2(max(1, r["raw_draws"] + r["ball_points"])))
                   for r in rows]
    return {
        "schema": config.report_format,
        "version": __version__,
        "config": config.to_dict(),
        "columns": CSV_COLUMNS,
        "rows": rows,
        "summary": {
            "runs": len(rows),
            "log2_draws_slope": _regression_slope(draw_points),
            "log2_work_slope": _regression_slope(work_points),
        },
    }


def _rows_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in report["rows"]:
        writer.writerow(row)
    return buf.getvalue()


def _render_figures(report: dict, out_dir: Path) -> list[str]:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = report["rows"]
    written = []
    if not rows:
        return written
    ns = sorted({r["n"] for r in rows})

    def mean_log2(key, n):
        vals = [log2(max(1, r[key])) for r in rows if r["n"] == n]
        return sum(vals) / len(vals)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, [mean_log2("raw_draws", n) for n in ns], "o-",
            label="measured log2 draws")
    ax.plot(ns, [n * rows[0]["predicted_exponent"] for n in ns], "--",
            label="predicted slope")
    ax.set_xlabel("n")
    ax.set_ylabel("log2(raw draws)")
    ax.legend()
    fig.tight_layout()
    path = out_dir / "scaling.png"
    fig.savefig(path)
    plt.close(fig)
    written.append(path.name)

    fig, ax = plt.subplots(figsize=(6, 4))
    for n in ns:
        draws = [r["raw_draws"] for r in rows if r["n"] == n]
        ax.scatter([n] * len(draws), draws, s=12)
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("raw draws per run")
    fig.tight_layout()
    path = out_dir / "draws.png"
    fig.savefig(path)
    plt.close(fig)
    written.append(path.name)
    return written


def write_report(report: dict, out_dir, figures: bool = True) -> dict[str, str]:
    """Write CSV + JSON (+ figures) into out_dir; returns name -> path.

    The JSON is byte-identical across runs with equal configs except for
    its single "timestamp" field.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}

    csv_path = out / "report.csv"
    csv_path.write_text(_rows_csv(report))
    paths["csv"] = str(csv_path)

    payload = dict(report)
    payload["timestamp"] = datetime.datetime.now(
        datetime.timezone.utc).isoformat()
    json_path = out / "report.json"
    json_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    paths["json"] = str(json_path)

    if figures:
        for name in _render_figures(report, out):
            paths[name] = str(out / name)
    return paths
