"""Monte Carlo study of the estimators and of the adaptive choice of k.

Replication ``i`` always draws from stream ``i`` of the master seed and its
traces land in row ``i`` of preallocated arrays, so results do not depend
on the number of worker threads.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distributions import DistributionSpec, SeededStream, sample
from .estimators import amse_true, curves_from_logs

__all__ = [
    "AdaptiveSummary",
    "CURVES_HEADER",
    "CurveSummary",
    "SimulationConfig",
    "SimulationReport",
    "TABLE2_HEADER",
    "append_table2_row",
    "format_float",
    "k_opt",
    "read_curves_csv",
    "run_adaptive_study",
    "run_curves",
    "run_study",
    "simulate_traces",
    "write_curves_csv",
]

CURVES_HEADER = ["k", "mean_hat", "mean_tilde", "mean_check", "mse_hat", "mse_tilde", "mse_check"]
TABLE2_HEADER = [
    "dist",
    "theta",
    "rho",
    "mu_k_hat",
    "sigma_k_hat",
    "mu_theta_check",
    "sigma_theta_check",
    "R_n",
    "k_opt",
]


@dataclass(frozen=True)
class SimulationConfig:
    spec: DistributionSpec
    n: int = 500
    replications: int = 100
    k_curve_max: int = 360
    k_min: int = 2
    k_sel_max: int = 350
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("need at least one replication")
        if not 2 <= self.k_curve_max <= self.n - 1:
            raise ValueError(f"k_curve_max must be in [2, {self.n - 1}], got {self.k_curve_max}")
        if not 2 <= self.k_min <= self.k_sel_max <= self.n - 1:
            raise ValueError(
                f"selection grid [{self.k_min}, {self.k_sel_max}] must satisfy 2 <= k_min <= k_sel_max <= {self.n - 1}"
            )
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def k_max(self) -> int:
        return max(self.k_curve_max, self.k_sel_max)


@dataclass
class Traces:
    """Per-replication estimator traces, shape ``(replications, k_max)``, column ``k - 1``."""

    theta_tilde: np.ndarray
    theta_check: np.ndarray
    theta_hat: np.ndarray
    amse_hat: np.ndarray


def simulate_traces(config: SimulationConfig) -> Traces:
    N, kmax = config.replications, config.k_max
    out = Traces(*(np.empty((N, kmax)) for _ in range(4)))

    def work(i):
        x = sample(config.spec, config.n, SeededStream(config.master_seed, i))
        c = curves_from_logs(np.log(x[::-1]), config.n, kmax)
        out.theta_tilde[i] = c.theta_tilde
        out.theta_check[i] = c.theta_check
        out.theta_hat[i] = c.theta_hat
        out.amse_hat[i] = c.amse_hat

    if config.workers == 1:
        for i in range(N):
            work(i)
    else:
        with ThreadPoolExecutor(config.workers) as pool:
            list(pool.map(work, range(N)))
    return out


@dataclass
class CurveSummary:
    k: np.ndarray
    mean_hat: np.ndarray
    mean_tilde: np.ndarray
    mean_check: np.ndarray
    mse_hat: np.ndarray
    mse_tilde: np.ndarray
    mse_check: np.ndarray

    def columns(self):
        return [getattr(self, name) for name in CURVES_HEADER]


@dataclass
class AdaptiveSummary:
    mu_k_hat: float
    sigma_k_hat: float
    mu_theta_check: float
    sigma_theta_check: float
    r_n: float
    k_opt: int
    k_hats: np.ndarray = field(repr=False)
    theta_checks: np.ndarray = field(repr=False)


@dataclass
class SimulationReport:
    config: SimulationConfig
    curves: CurveSummary
    adaptive: AdaptiveSummary


def _curves(config: SimulationConfig, tr: Traces) -> CurveSummary:
    theta = config.spec.theta
    sl = slice(1, config.k_curve_max)  # k = 2..k_curve_max
    cols = {}
    for name, arr in (("hat", tr.theta_hat), ("tilde", tr.theta_tilde), ("check", tr.theta_check)):
        a = arr[:, sl]
        cols["mean_" + name] = a.mean(axis=0)
        cols["mse_" + name] = ((a - theta) ** 2).mean(axis=0)
    return CurveSummary(k=np.arange(2, config.k_curve_max + 1), **cols)


def _adaptive(config: SimulationConfig, tr: Traces) -> AdaptiveSummary:
    theta = config.spec.theta
    lo, hi = config.k_min - 1, config.k_sel_max
    amse = tr.amse_hat[:, lo:hi]
    idx = np.argmin(amse, axis=1)
    k_hats = idx + config.k_min
    rows = np.arange(config.replications)
    checks = tr.theta_check[:, lo:hi]
    chosen = checks[rows, idx]
    sse_selected = np.sum((chosen - theta) ** 2)
    sse_fixed = np.sum((checks - theta) ** 2, axis=0)
    return AdaptiveSummary(
        mu_k_hat=float(k_hats.mean()),
        sigma_k_hat=float(k_hats.std()),
        mu_theta_check=float(chosen.mean()),
        sigma_theta_check=float(chosen.std()),
        r_n=math.sqrt(sse_selected / sse_fixed.min()),
        k_opt=k_opt(config.spec, config.n, config.k_min, config.k_sel_max),
        k_hats=k_hats,
        theta_checks=chosen,
    )


def run_curves(config: SimulationConfig) -> CurveSummary:
    """Mean and MSE of each estimator against k, averaged over replications."""
    return _curves(config, simulate_traces(config))


def run_adaptive_study(config: SimulationConfig) -> AdaptiveSummary:
    """Adaptive-selection summary: mean/SD of k_hat and theta_check(k_hat), R_n and k_opt."""
    return _adaptive(config, simulate_traces(config))


def run_study(config: SimulationConfig) -> SimulationReport:
    tr = simulate_traces(config)
    return SimulationReport(config, _curves(config, tr), _adaptive(config, tr))


def k_opt(spec: DistributionSpec, n: int, k_min: int, k_max: int) -> int:
    """Argmin of the true AMSE over the integer grid; smallest k on ties."""
    ks = range(k_min, k_max + 1)
    vals = [amse_true(spec, n, k) for k in ks]
    return k_min + int(np.argmin(vals))


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def write_curves_csv(path: str | os.PathLike, curves: CurveSummary) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CURVES_HEADER)
        for row in zip(*curves.columns()):
            w.writerow([str(int(row[0]))] + [format_float(v) for v in row[1:]])


def read_curves_csv(path: str | os.PathLike) -> CurveSummary:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if header != CURVES_HEADER:
            raise ValueError(f"unexpected curves header {header}")
        rows = [[float(v) for v in row] for row in r]
    cols = np.array(rows).T
    return CurveSummary(cols[0].astype(int), *cols[1:])


def table2_row(label: str, spec: DistributionSpec, s: AdaptiveSummary) -> list[str]:
    return [
        label,
        format_float(spec.theta),
        format_float(spec.rho),
        format_float(s.mu_k_hat),
        format_float(s.sigma_k_hat),
        format_float(s.mu_theta_check),
        format_float(s.sigma_theta_check),
        format_float(s.r_n),
        str(s.k_opt),
    ]


def append_table2_row(path: str | os.PathLike, label: str, spec: DistributionSpec, s: AdaptiveSummary) -> list[str]:
    """Append one row to ``table2.csv``, writing the header when the file is new."""
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    row = table2_row(label, spec, s)
    with open(path, "a", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if new:
            w.writerow(TABLE2_HEADER)
        w.writerow(row)
    return row
