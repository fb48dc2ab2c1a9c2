"""Monte Carlo estimation and parameter sweeps.

A cell is one (theta, n_nodes, sd_distance) configuration run for a number
of independent trials; a sweep is the cross product of value lists.  Trial
t of a cell reseeds the config with derive_seed(seed, t), so results are
reproducible and independent of execution order; optional process-level
parallelism changes nothing but wall time.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from .engine import propagate
from .leafmodel import build_leaf, predicted_ratio, relative_error
from .scenario import ConfigError, ScenarioConfig, derive_seed, generate

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 500

# Default evaluation grid: theta 22.5..135 degrees, N 1000..3000, d 1000..3000 m.
DEFAULT_THETA_GRID_DEG = (22.5, 45.0, 67.5, 90.0, 112.5, 135.0)
DEFAULT_N_GRID = (1000, 2000, 3000)
DEFAULT_D_GRID = (1000.0, 2000.0, 3000.0)

_Z95 = 1.959963984540054  # two-sided 95% normal quantile


@dataclass(frozen=True)
class SweepSpec:
    """Cross-product sweep around a base config."""

    base: ScenarioConfig
    theta_values: tuple[float, ...] = tuple(math.radians(t) for t in DEFAULT_THETA_GRID_DEG)
    n_values: tuple[int, ...] = DEFAULT_N_GRID
    d_values: tuple[float, ...] = DEFAULT_D_GRID
    trials: int = DEFAULT_TRIALS

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not (self.theta_values and self.n_values and self.d_values):
            raise ConfigError("sweep value lists must be non-empty")

    def cells(self) -> list[ScenarioConfig]:
        """Derived configs ordered by (d, n, theta); invalid cells abort here."""
        out = []
        for d in sorted(self.d_values):
            for n in sorted(self.n_values):
                for theta in sorted(self.theta_values):
                    try:
                        out.append(replace(self.base, theta=theta, n_nodes=n, sd_distance=d))
                    except ConfigError as exc:
                        raise ConfigError(
                            f"invalid sweep cell (theta={math.degrees(theta):g} deg, "
                            f"n={n}, d={d}): {exc}"
                        ) from exc
        return out


@dataclass(frozen=True)
class CellResult:
    """Aggregated metrics for one cell.

    implicated_ratio_mean averages |implicated| / (n_nodes + 1) over the
    successful trials (all trials when none succeed), which is what the
    leaf-area model predicts and what makes the ratio insensitive to node
    density; success_rate captures the failures separately.  model_ratio
    and model_relative_error are None when the cell has no leaf (d <= r)
    or the chain is flagged non-terminating.
    """

    theta: float
    n_nodes: int
    sd_distance: float
    trials: int
    success_rate: float
    success_ci_halfwidth: float
    implicated_ratio_mean: float
    implicated_ratio_std: float
    bandwidth_gain: float
    mean_hops_on_success: float
    model_ratio: float | None
    model_relative_error: float | None


def _run_trial(config: ScenarioConfig, trial: int) -> tuple[bool, float, int]:
    """One propagate run: (success, implicated ratio, hops-or-0)."""
    cfg = replace(config, seed=derive_seed(config.seed, trial))
    scenario = generate(cfg)
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 1)))
    outcome = propagate(scenario, rng)
    ratio = len(outcome.implicated) / (cfg.n_nodes + 1)
    hops = outcome.first_delivery_hop if outcome.success else 0
    return outcome.success, ratio, hops


def _success_halfwidth(successes: int, trials: int) -> float:
    """95% half-width; exact Clopper-Pearson near the boundaries."""
    p = successes / trials
    if 5 <= successes <= trials - 5:
        return _Z95 * math.sqrt(p * (1.0 - p) / trials)
    lo = 0.0 if successes == 0 else float(stats.beta.ppf(0.025, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(stats.beta.ppf(0.975, successes + 1, trials - successes))
    return (hi - lo) / 2.0


def run_cell(config: ScenarioConfig, trials: int = DEFAULT_TRIALS,
             workers: int = 1) -> CellResult:
    """Monte Carlo estimate of one cell from seed-derived independent trials."""
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_trial, [config] * trials, range(trials),
                                 chunksize=max(1, trials // (8 * workers))))
    else:
        rows = [_run_trial(config, t) for t in range(trials)]

    success_flags = np.array([r[0] for r in rows], dtype=bool)
    ratios = np.array([r[1] for r in rows])
    hops = np.array([r[2] for r in rows])

    successes = int(success_flags.sum())
    success_rate = successes / trials
    selected = ratios[success_flags] if successes else ratios
    ratio_mean = float(np.mean(selected))
    ratio_std = float(np.std(selected, ddof=1)) if len(selected) > 1 else 0.0
    mean_hops = float(np.mean(hops[success_flags])) if successes else float("nan")

    model_ratio = None
    model_err = None
    if config.sd_distance > config.radius:
        model = build_leaf(config.sd_distance, config.radius, config.theta)
        if not model.non_terminating:
            model_ratio = predicted_ratio(model, config.square_side)
            if ratio_mean > 0.0:
                model_err = relative_error(model_ratio, ratio_mean)

    return CellResult(
        theta=config.theta,
        n_nodes=config.n_nodes,
        sd_distance=config.sd_distance,
        trials=trials,
        success_rate=success_rate,
        success_ci_halfwidth=_success_halfwidth(successes, trials),
        implicated_ratio_mean=ratio_mean,
        implicated_ratio_std=ratio_std,
        bandwidth_gain=ratio_mean * config.theta / (2.0 * math.pi),
        mean_hops_on_success=mean_hops,
        model_ratio=model_ratio,
        model_relative_error=model_err,
    )


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[CellResult]:
    """Run every cell of the sweep; deterministic (d, n, theta) order."""
    cells = spec.cells()
    t0 = time.perf_counter()
    results = [run_cell(cfg, spec.trials, workers=workers) for cfg in cells]
    logger.info("sweep: %d cells x %d trials in %.1f s",
                len(cells), spec.trials, time.perf_counter() - t0)
    return results


def linear_fit_r2(points: list[tuple[float, float]]) -> float:
    """Coefficient of determination of the least-squares line through points."""
    if len(points) < 3:
        raise ValueError(f"need at least 3 points, got {len(points)}")
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    if np.all(xs == xs[0]):
        raise ValueError("abscissae are all identical")
    slope, intercept = np.polyfit(xs, ys, 1)
    ss_res = float(np.sum((ys - (intercept + slope * xs)) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0
    return 1.0 - ss_res / ss_tot
