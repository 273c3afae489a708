"""Run replications of one experiment and write traces and summaries.

Workers return formatted CSV text; only the parent process touches the
output directory. Wall-clock timings go to ``timing.txt`` so that every
other output file is a deterministic function of the configuration.
"""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .. import annealer
from .config import ExperimentConfig

QUANTILES = (("q10", 0.10), ("q25", 0.25), ("median", 0.50), ("q75", 0.75), ("q90", 0.90))
CONFIG_ECHO = "config.json"
SUMMARY = "summary.txt"
TIMING = "timing.txt"


def trace_name(r: int) -> str:
    return "trace_%03d.csv" % r


@dataclass
class ReplicationResult:
    replication: int
    csv: str
    best: Dict[int, float]          # checkpoint -> best_value
    accept_rate: Dict[int, float]   # checkpoint -> fraction accepted in 1..n
    warnings: List[str]
    wall: float


def nearest_rank(values: Sequence[float], q: float) -> float:
    """Nearest-rank quantile: the ceil(q m)-th smallest of m values (rank >= 1)."""
    xs = sorted(values)
    if not xs:
        raise ValueError("no values")
    rank = max(1, math.ceil(q * len(xs)))
    return xs[rank - 1]


def csv_header(d: int) -> str:
    cols = ["n"] + ["x_%d" % (i + 1) for i in range(d)]
    cols += ["value", "best_value", "accepted", "A_n", "T_n", "sigma_eff", "kernel_index"]
    return ",".join(cols)


def format_trace(trace: annealer.ChainTrace, stride: int = 1, keep: Sequence[int] = ()) -> str:
    """CSV text with floats at 17 significant digits.

    Row 0, every ``stride``-th row, the last row and the rows in ``keep`` are
    written. best_value is taken from the full trace, so it stays exact.
    """
    N = trace.N
    rows = set(range(0, N + 1, stride)) | {0, N} | {k for k in keep if 0 <= k <= N}
    idx = np.array(sorted(rows), dtype=np.int64)
    d = trace.x.shape[1]
    fmt = "%d," + ",".join(["%.17g"] * d) + ",%.17g,%.17g,%d,%.17g,%.17g,%.17g,%d"
    cols = [idx.tolist()] + [trace.x[idx, i].tolist() for i in range(d)]
    cols += [trace.value[idx].tolist(), trace.best_value[idx].tolist(),
             trace.accepted[idx].astype(int).tolist(), trace.A_n[idx].tolist(), trace.T_n[idx].tolist(),
             trace.sigma_eff[idx].tolist(), trace.kernel_index[idx].tolist()]
    lines = [csv_header(d)]
    lines.extend(fmt % row for row in zip(*cols))
    return "\n".join(lines) + "\n"


def run_replication(cfg: ExperimentConfig, r: int) -> ReplicationResult:
    t0 = time.perf_counter()
    objective = cfg.build_objective()
    kernel = cfg.build_kernel(cfg.table_t())
    trace = annealer.run(cfg.start_point(), cfg.N, cfg.driver(r), kernel, cfg.build_cooling(), objective,
                         backend=cfg.backend, warn=False)
    cps = cfg.checkpoint_list()
    csv = format_trace(trace, cfg.stride, cps)
    acc = np.cumsum(trace.accepted)
    best = {c: float(trace.best_value[c]) for c in cps}
    rate = {c: (float(acc[c]) / c if c else math.nan) for c in cps}
    return ReplicationResult(r, csv, best, rate, list(trace.warnings), time.perf_counter() - t0)


def summarize(cfg: ExperimentConfig, best: Dict[int, List[float]], rates: Dict[int, List[float]],
              warnings: Sequence[str] = ()) -> str:
    """Key-value summary of the gap phi* - best_value per checkpoint."""
    phi_star = cfg.build_objective().phi_star
    lines = [
        "objective=%s" % cfg.objective,
        "d=%d" % cfg.d,
        "R=%s" % ("inf" if math.isinf(cfg.R) else int(cfg.R)),
        "N=%d" % cfg.N,
        "replications=%d" % cfg.replications,
        "phi_star=%.17g" % phi_star,
        "quantile_rule=nearest-rank",
        "checkpoints=%s" % ",".join(str(c) for c in sorted(best)),
    ]
    for c in sorted(best):
        gaps = [phi_star - v for v in best[c]]
        for key, q in QUANTILES:
            lines.append("gap.%d.%s=%.17g" % (c, key, nearest_rank(gaps, q)))
        good = [v for v in rates[c] if not math.isnan(v)]
        lines.append("acceptance_rate.%d.mean=%.17g" % (c, float(np.mean(good)) if good else math.nan))
    for i, w in enumerate(sorted(set(warnings))):
        lines.append("warning.%d=%s" % (i + 1, w))
    return "\n".join(lines) + "\n"


def echo_text(cfg: ExperimentConfig) -> str:
    data = cfg.to_dict()
    data.pop("out")  # the echo reproduces the run wherever it is placed
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def run_experiment(cfg: ExperimentConfig, out: Optional[str] = None, workers: int = 1,
                   log: Optional[Callable[[str], None]] = None) -> Dict[int, ReplicationResult]:
    """Run every replication and write all outputs under ``out``."""
    cfg = cfg.effective()
    out = out or cfg.out
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, CONFIG_ECHO), "w") as fh:
        fh.write(echo_text(cfg))

    results: Dict[int, ReplicationResult] = {}

    def collect(res: ReplicationResult):
        with open(os.path.join(out, trace_name(res.replication)), "w") as fh:
            fh.write(res.csv)
        res.csv = ""
        results[res.replication] = res
        if log:
            log("replication %d done in %.2fs" % (res.replication, res.wall))

    t0 = time.perf_counter()
    reps = range(cfg.replications)
    if workers > 1 and cfg.replications > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_replication, cfg, r) for r in reps]
            for fut in futures:
                collect(fut.result())
    else:
        for r in reps:
            collect(run_replication(cfg, r))
    total = time.perf_counter() - t0

    cps = cfg.checkpoint_list()
    best = {c: [results[r].best[c] for r in reps] for c in cps}
    rates = {c: [results[r].accept_rate[c] for r in reps] for c in cps}
    warns = [w for r in reps for w in results[r].warnings]
    with open(os.path.join(out, SUMMARY), "w") as fh:
        fh.write(summarize(cfg, best, rates, warns))
    with open(os.path.join(out, TIMING), "w") as fh:
        for r in reps:
            fh.write("replication.%d.wall_seconds=%.6f\n" % (r, results[r].wall))
        fh.write("total.wall_seconds=%.6f\n" % total)
    return results


def read_trace(path) -> np.ndarray:
    """Load a trace CSV as a structured array (column names from the header)."""
    return np.genfromtxt(path, delimiter=",", names=True, dtype=None, encoding="ascii")
