"""Monte Carlo harness, aggregate reports, and parameter sweeps.

Outputs are byte-reproducible: trials are pure functions of (config, trial
index), every float is written with 9 significant digits in a fixed column
order, and aggregation is independent of the worker count.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .info_measures import delta_mi_grid
from .sim import MissionConfig, TrialMetrics, run_trial

__all__ = [
    "ExperimentResult",
    "TheorySweepResult",
    "run_experiment",
    "theory_sweep",
    "write_deployments_csv",
    "write_summary_json",
    "write_theory_csvs",
    "write_bases_csv",
    "write_paths_csv",
    "fmt9",
]

DEPLOYMENT_COLUMNS = "trial,d,strategy,agent_class,alpha_used,theta,entropy_bits,cum_losses"
THEORY_COLUMNS = "alpha,p,lambda,gamma,delta_i,delta_h_obs"


def fmt9(x: float) -> str:
    """Fixed 9-significant-digit rendering used in every CSV."""
    return format(float(x), ".9g")


@dataclass
class ExperimentResult:
    config: MissionConfig
    trials: list  # TrialMetrics, in trial order

    @property
    def n_trials(self) -> int:
        return len(self.trials)

    def padded_series(self, attr: str) -> np.ndarray:
        """Per-trial series padded to budget+1 by holding the last value."""
        length = self.config.deployment_budget + 1
        out = np.zeros((self.n_trials, length))
        for i, tm in enumerate(self.trials):
            series = list(getattr(tm, attr))
            if len(series) < length:
                series = series + [series[-1]] * (length - len(series))
            out[i] = series[:length]
        return out

    def entropy_stats(self) -> tuple[np.ndarray, np.ndarray]:
        grid = self.padded_series("entropy_series")
        return grid.mean(axis=0), grid.std(axis=0)

    def loss_stats(self) -> tuple[np.ndarray, np.ndarray]:
        grid = self.padded_series("loss_series")
        return grid.mean(axis=0), grid.std(axis=0)

    def deployments_to_half(self) -> list:
        return [tm.deployments_to_half for tm in self.trials]

    def capped_deployments_to_half(self) -> np.ndarray:
        """Unreached trials count as budget + 1, for ordering comparisons."""
        cap = self.config.deployment_budget + 1
        return np.array([cap if v is None else v for v in self.deployments_to_half()], dtype=float)


def _run_trial_star(args) -> TrialMetrics:
    config, trial = args
    return run_trial(config, trial)


def run_experiment(config: MissionConfig, trials: int, workers: int = 1) -> ExperimentResult:
    """Run seeded trials (optionally across processes) in deterministic order."""
    if trials < 1:
        raise ParameterError("need at least one trial")
    jobs = [(config, t) for t in range(trials)]
    if workers <= 1:
        metrics = [_run_trial_star(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            metrics = list(pool.map(_run_trial_star, jobs))
    return ExperimentResult(config=config, trials=metrics)


def write_deployments_csv(path: str, results: Sequence[ExperimentResult]) -> None:
    lines = [DEPLOYMENT_COLUMNS]
    for res in results:
        name = res.config.strategy.value
        for tm in res.trials:
            for rec in tm.records:
                lines.append(",".join([
                    str(rec.trial),
                    str(rec.round_index),
                    name,
                    rec.agent_class.value,
                    fmt9(rec.alpha_used),
                    str(rec.theta),
                    fmt9(rec.entropy_bits),
                    str(rec.cum_losses),
                ]))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def write_bases_csv(path: str, results: Sequence[ExperimentResult]) -> None:
    lines = ["trial,d,strategy,base_cell"]
    for res in results:
        name = res.config.strategy.value
        for tm in res.trials:
            for d, cell in enumerate(tm.base_track, start=1):
                lines.append(f"{tm.trial},{d},{name},{cell}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def write_paths_csv(path: str, results: Sequence[ExperimentResult]) -> None:
    lines = ["trial,d,strategy,sector,start,cells"]
    for res in results:
        name = res.config.strategy.value
        for tm in res.trials:
            for rec in tm.records:
                cells = ";".join(str(c) for c in rec.trajectory.cells)
                lines.append(f"{rec.trial},{rec.round_index},{name},{rec.sector},{rec.trajectory.start},{cells}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def _round9(x: float) -> float:
    return float(fmt9(x))


def summary_dict(results: Sequence[ExperimentResult]) -> dict:
    out = {}
    for res in results:
        ent_mean, ent_std = res.entropy_stats()
        loss_mean, loss_std = res.loss_stats()
        d50 = res.deployments_to_half()
        reached = [v for v in d50 if v is not None]
        out[res.config.strategy.value] = {
            "trials": res.n_trials,
            "rounds": res.config.deployment_budget,
            "team_size": res.config.team_size,
            "horizon": res.config.horizon,
            "entropy_mean": [_round9(v) for v in ent_mean],
            "entropy_std": [_round9(v) for v in ent_std],
            "losses_mean": [_round9(v) for v in loss_mean],
            "losses_std": [_round9(v) for v in loss_std],
            "deployments_to_half": {
                "per_trial": d50,
                "mean_reached": _round9(float(np.mean(reached))) if reached else None,
                "unreached": len(d50) - len(reached),
                "capped_mean": _round9(float(res.capped_deployments_to_half().mean())),
            },
        }
    return out


def write_summary_json(path: str, results: Sequence[ExperimentResult]) -> None:
    with open(path, "w") as f:
        json.dump(summary_dict(results), f, indent=2, sort_keys=True)
        f.write("\n")


@dataclass
class TheorySweepResult:
    alpha_grid: np.ndarray
    prior_grid: np.ndarray
    lambda_grid: np.ndarray
    gamma_grid: np.ndarray
    delta_i: np.ndarray      # (alpha, p, lambda, gamma)
    delta_h_obs: np.ndarray  # same shape
    avg_delta_i: np.ndarray  # (alpha, p), mean over sensor grid
    avg_delta_h: np.ndarray
    zero_contour: list       # (alpha, p) points where avg_delta_i crosses 0


def theory_sweep(alpha_grid, prior_grid, lambda_grid, gamma_grid) -> TheorySweepResult:
    """Behavioral-vs-Shannon information gain across the parameter grids.

    Produces the per-configuration gain surface, the sensor-averaged
    surface, and the zero-gain contour of the averaged surface (linear
    interpolation between adjacent prior grid points with a sign change).
    """
    a = np.asarray(list(alpha_grid), dtype=float)
    p = np.asarray(list(prior_grid), dtype=float)
    lam = np.asarray(list(lambda_grid), dtype=float)
    gam = np.asarray(list(gamma_grid), dtype=float)
    for name, g in (("alpha", a), ("prior", p), ("lambda", lam), ("gamma", gam)):
        if g.size == 0:
            raise ParameterError(f"{name} grid is empty")
    terms = delta_mi_grid(
        p[None, :, None, None],
        lam[None, None, :, None],
        gam[None, None, None, :],
        a[:, None, None, None],
    )
    delta_i = np.asarray(terms.total)
    delta_h = np.asarray(terms.delta_h_obs)
    avg_i = delta_i.mean(axis=(2, 3))
    avg_h = delta_h.mean(axis=(2, 3))
    contour = []
    for i, alpha in enumerate(a):
        row = avg_i[i]
        for j in range(len(p) - 1):
            y0, y1 = row[j], row[j + 1]
            if y0 == 0.0:
                contour.append((float(alpha), float(p[j])))
            elif (y0 < 0.0 < y1) or (y1 < 0.0 < y0):
                t = y0 / (y0 - y1)
                contour.append((float(alpha), float(p[j] + t * (p[j + 1] - p[j]))))
        if row[-1] == 0.0:
            contour.append((float(alpha), float(p[-1])))
    return TheorySweepResult(a, p, lam, gam, delta_i, delta_h, avg_i, avg_h, contour)


def write_theory_csvs(out_dir: str, result: TheorySweepResult) -> None:
    """theory_sweep.csv plus the averaged surface and zero contour files."""
    lines = [THEORY_COLUMNS]
    a, p, lam, gam = result.alpha_grid, result.prior_grid, result.lambda_grid, result.gamma_grid
    for i in range(a.size):
        for j in range(p.size):
            for k in range(lam.size):
                for m in range(gam.size):
                    lines.append(",".join([
                        fmt9(a[i]), fmt9(p[j]), fmt9(lam[k]), fmt9(gam[m]),
                        fmt9(result.delta_i[i, j, k, m]), fmt9(result.delta_h_obs[i, j, k, m]),
                    ]))
    with open(os.path.join(out_dir, "theory_sweep.csv"), "w") as f:
        f.write("\n".join(lines) + "\n")

    lines = ["alpha,p,mean_delta_i,mean_delta_h_obs"]
    for i in range(a.size):
        for j in range(p.size):
            lines.append(",".join([
                fmt9(a[i]), fmt9(p[j]), fmt9(result.avg_delta_i[i, j]), fmt9(result.avg_delta_h[i, j]),
            ]))
    with open(os.path.join(out_dir, "theory_sweep_avg.csv"), "w") as f:
        f.write("\n".join(lines) + "\n")

    lines = ["alpha,p_zero"]
    for alpha, pz in result.zero_contour:
        lines.append(f"{fmt9(alpha)},{fmt9(pz)}")
    with open(os.path.join(out_dir, "theory_contour.csv"), "w") as f:
        f.write("\n".join(lines) + "\n")
