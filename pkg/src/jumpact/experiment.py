"""Seeded Monte-Carlo sweeps comparing the multi-scale and single-scale estimators.

Each replication derives its random streams from ``(cell seed, replication)``
only, and the reduction runs in replication order, so a sweep gives identical
bytes for any number of workers.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .comparator import DEFAULT_ALPHA, aj_confidence_interval, aj_estimate, aj_standardized_error
from .estimator import EstimatorConfig, confidence_interval, estimate, standardized_error
from .simulate import SimulationModel, simulate_path

logger = logging.getLogger(__name__)

METHOD_HAT = "multiscale"
METHOD_AJ = "aj"
METHODS = (METHOD_HAT, METHOD_AJ)

BETA_BINS = np.linspace(0.0, 2.0, 61)
U_BINS = np.linspace(-4.0, 4.0, 61)

TABLE_COLUMNS = ["beta", "p", "method", "mean", "std", "coverage", "rmse", "reps"]


@dataclass(frozen=True)
class ExperimentGrid:
    betas: tuple = (0.4, 0.8, 1.2, 1.6)
    ps: tuple = (0.005, 0.01, 0.02)
    reps: int = 10_000
    gamma: float = 0.95
    config: EstimatorConfig = field(default_factory=EstimatorConfig)
    aj_c: float = 0.05
    aj_rho: float = 2.0
    aj_alpha: float = DEFAULT_ALPHA
    base_seed: int = 0
    n: int = 23_400
    noise_sd: float = 0.01
    scaling: str = "integrand"

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps!r}")
        if not self.betas or not self.ps:
            raise ValueError("betas and ps must be nonempty")
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(self, "ps", tuple(float(p) for p in self.ps))

    def cell_seed(self, beta: float, p: float) -> int:
        """Seed for one (beta, p) cell, independent of the rest of the grid."""
        ss = np.random.SeedSequence([int(self.base_seed), round(beta * 1e6), round(p * 1e6)])
        return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class CellSummary:
    beta_true: float
    p: float
    method: str
    mean: float
    std_dev: float
    rmse: float
    coverage: float
    reps: int
    reps_effective: int
    failures: int = 0
    hist_beta: np.ndarray = field(default=None, repr=False)
    hist_u: np.ndarray = field(default=None, repr=False)
    estimates: np.ndarray = field(default=None, repr=False)
    u_values: np.ndarray = field(default=None, repr=False)

    @property
    def defined_u(self) -> np.ndarray:
        return self.u_values[np.isfinite(self.u_values)]


def replicate(beta: float, p: float, replication: int, grid: ExperimentGrid) -> np.ndarray:
    """One replication: ``[beta_hat, U_hat, covered_hat, beta_tilde, U_tilde, covered_tilde]``.

    Both estimators see the noisy observations as if they were the prices.
    """
    model = SimulationModel(beta, p, n=grid.n, noise_sd=grid.noise_sd,
                            seed=grid.cell_seed(beta, p), scaling=grid.scaling)
    _, observed = simulate_path(model, replication)
    est = estimate(observed, grid.config)
    aj = aj_estimate(observed, grid.aj_c, grid.aj_rho, grid.aj_alpha)
    return np.array([
        est.beta_hat,
        standardized_error(est, beta),
        float(beta in confidence_interval(est, grid.gamma)),
        aj.beta_tilde,
        aj_standardized_error(aj, beta),
        float(beta in aj_confidence_interval(aj, grid.gamma)),
    ])


def _run_chunk(args):
    beta, p, start, stop, grid, strict = args
    rows = np.full((stop - start, 6), np.nan)
    ok = np.ones(stop - start, dtype=bool)
    for i, r in enumerate(range(start, stop)):
        try:
            rows[i] = replicate(beta, p, r, grid)
        except (ArithmeticError, ValueError) as exc:
            if strict:
                raise
            logger.warning("replication %d of cell (%g, %g) excluded: %s", r, beta, p, exc)
            ok[i] = False
    return rows, ok


def _summarise(beta, p, method, est, u, covered, ok) -> CellSummary:
    est, u, covered = est[ok], u[ok], covered[ok]
    eff = int(ok.sum())
    if eff:
        mean = float(np.mean(est))
        std = float(np.std(est, ddof=1)) if eff > 1 else 0.0
        rmse = float(np.sqrt(np.mean((est - beta) ** 2)))
        coverage = float(np.mean(covered))
    else:
        mean = std = rmse = coverage = math.nan
    finite_u = u[np.isfinite(u)]
    return CellSummary(
        beta_true=beta, p=p, method=method, mean=mean, std_dev=std, rmse=rmse,
        coverage=coverage, reps=ok.size, reps_effective=eff, failures=ok.size - eff,
        hist_beta=np.histogram(est, BETA_BINS)[0],
        hist_u=np.histogram(finite_u, U_BINS)[0],
        estimates=est, u_values=u,
    )


def run_cell(beta: float, p: float, grid: ExperimentGrid, workers: int = 1,
             strict: bool = True) -> tuple[CellSummary, CellSummary]:
    """Simulate ``grid.reps`` paths at ``(beta, p)``; one summary per method."""
    reps = grid.reps
    if workers <= 1:
        chunks = [_run_chunk((beta, p, 0, reps, grid, strict))]
    else:
        size = max(1, math.ceil(reps / (4 * workers)))
        jobs = [(beta, p, s, min(reps, s + size), grid, strict) for s in range(0, reps, size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_chunk, jobs))
    rows = np.concatenate([c[0] for c in chunks])
    ok = np.concatenate([c[1] for c in chunks])
    hat = _summarise(beta, p, METHOD_HAT, rows[:, 0], rows[:, 1], rows[:, 2].astype(bool), ok)
    aj = _summarise(beta, p, METHOD_AJ, rows[:, 3], rows[:, 4], rows[:, 5].astype(bool), ok)
    return hat, aj


def run_grid(grid: ExperimentGrid, workers: int = 1, strict: bool = True) -> list[CellSummary]:
    table = []
    for beta in grid.betas:
        for p in grid.ps:
            logger.info("cell beta=%g p=%g (%d reps)", beta, p, grid.reps)
            table.extend(run_cell(beta, p, grid, workers, strict))
    return table


def default_workers() -> int:
    env = os.environ.get("JUMPACT_THREADS")
    return int(env) if env else 1


# -- output ---------------------------------------------------------------

def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def _cell_tag(s: CellSummary) -> str:
    return f"{s.method}_beta{s.beta_true:g}_p{s.p:g}"


def emit(table: list[CellSummary], out_dir) -> list[Path]:
    """Write ``table.csv``, ``rmse.csv``, per-cell histograms and ``metadata.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def write(name, header, rows):
        path = out / name
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows([[_fmt(v) for v in row] for row in rows])
        written.append(path)

    write("table.csv", TABLE_COLUMNS,
          [[s.beta_true, s.p, s.method, s.mean, s.std_dev, s.coverage, s.rmse, s.reps_effective]
           for s in table])
    write("rmse.csv", ["beta", "p", "method", "rmse"],
          [[s.beta_true, s.p, s.method, s.rmse] for s in table])
    for s in table:
        tag = _cell_tag(s)
        write(f"hist_beta_{tag}.csv", ["bin_lo", "bin_hi", "count"],
              zip(BETA_BINS[:-1], BETA_BINS[1:], s.hist_beta))
        write(f"hist_u_{tag}.csv", ["bin_lo", "bin_hi", "count"],
              zip(U_BINS[:-1], U_BINS[1:], s.hist_u))
    meta = {
        "beta_bins": {"lo": 0.0, "hi": 2.0, "count": len(BETA_BINS) - 1},
        "u_bins": {"lo": -4.0, "hi": 4.0, "count": len(U_BINS) - 1},
        "u_histogram": "finite standardised errors at the true beta; values outside [-4, 4] dropped",
        "coverage": "empty intervals count as misses",
    }
    path = out / "metadata.json"
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written


def read_table(path) -> list[dict]:
    """Parse ``table.csv`` back into typed rows."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        parsed = {k: float(v) for k, v in row.items() if k not in ("method", "reps")}
        parsed["method"] = row["method"]
        parsed["reps"] = int(row["reps"])
        out.append(parsed)
    return out
