"""Monte Carlo range experiments and convergence tables."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from bridgewalk.bridge.lamplighter import (
    LampBridgePath,
    SamplingMode,
    sample_lamplighter_bridge,
)
from bridgewalk.bridge.sampler import sample_bridge, sample_walk
from bridgewalk.bridge.tables import BackwardTable, backward_table
from bridgewalk.kernels.generating import spectral_radius_estimate
from bridgewalk.kernels.sequences import (
    escape_probability,
    first_return_probabilities,
    return_probabilities,
)
from bridgewalk.kernels.tree import tree_closed_forms
from bridgewalk.range_stats.exact import (
    exact_bridge_range_mean,
    exact_unconditioned_range_mean,
)
from bridgewalk.range_stats.paths import max_distance_of_path, path_vertices, range_of_path
from bridgewalk.rng import chunk_ranges, trial_generator
from bridgewalk.walk_models import LamplighterModel, LatticeModel, TreeModel, WalkModel
from config import Settings, get_settings
from utils.errors import (
    BudgetExceededError,
    PeriodError,
    UnsupportedDistanceError,
    UnsupportedModelError,
)
from utils.helpers import fit_loglog_slope

logger = logging.getLogger("bridgewalk.range_stats")

Mode = Literal["bridge", "unconditioned"]

Z_95 = 1.96
# Window used to estimate F for transient lattices.
_ESCAPE_WINDOW = 4000


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    range: int
    max_distance: int | None
    weight: float = 1.0
    keys: tuple[str, ...] = ()


@dataclass(frozen=True)
class RangeSummary:
    """Statistics of R_n/n (and D_n) over `trials` sampled paths."""

    model: str
    n: int
    mode: str
    trials: int
    seed: int
    mean_range: float
    var_range: float
    ci95: float
    mean_maxdist: float
    sampling: str = "rejection"
    ess: float | None = None
    outcomes: tuple[TrialOutcome, ...] = field(default=(), repr=False, compare=False)

    CSV_COLUMNS = (
        "model",
        "n",
        "mode",
        "trials",
        "seed",
        "mean_range",
        "var_range",
        "ci95",
        "mean_maxdist",
    )

    def as_row(self) -> dict[str, object]:
        return {name: getattr(self, name) for name in self.CSV_COLUMNS}


# =============================================================================
# TRIALS
# =============================================================================


def _draw(
    model: WalkModel,
    n: int,
    mode: str,
    table: BackwardTable | None,
    rng: np.random.Generator,
    sampling: SamplingMode,
    settings: Settings,
):
    if mode == "unconditioned":
        return sample_walk(model, n, rng)
    if isinstance(model, LamplighterModel):
        return sample_lamplighter_bridge(model.dim, n, rng, mode=sampling, settings=settings)
    assert table is not None
    return sample_bridge(model, table, rng)


def _run_chunk(
    model: WalkModel,
    n: int,
    mode: str,
    seed: int,
    trials: range,
    table: BackwardTable | None,
    collect_paths: bool,
    sampling: SamplingMode,
    settings: Settings,
) -> list[TrialOutcome]:
    outcomes: list[TrialOutcome] = []
    with_distance = model.supports_distance
    for trial in trials:
        path = _draw(model, n, mode, table, trial_generator(seed, trial), sampling, settings)
        keys: tuple[str, ...] = ()
        if collect_paths:
            keys = tuple(model.canonical_key(v).hex() for v in path_vertices(path))
        outcomes.append(
            TrialOutcome(
                trial=trial,
                range=range_of_path(model, path),
                max_distance=max_distance_of_path(model, path) if with_distance else None,
                weight=path.weight if isinstance(path, LampBridgePath) else 1.0,
                keys=keys,
            )
        )
    return outcomes


def run_trials(
    model: WalkModel,
    n: int,
    trials: int,
    mode: Mode = "bridge",
    seed: int = 0,
    workers: int = 1,
    collect_paths: bool = False,
    settings: Settings | None = None,
    sampling: SamplingMode = "rejection",
) -> list[TrialOutcome]:
    """Sample `trials` paths; outcomes come back in trial order for any worker count.

    `sampling="importance"` draws lamplighter bridges from the projected simple-walk
    bridge law and records the weight 2^-N_n on each outcome instead of rejecting.
    """
    settings = settings or get_settings()
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if mode not in ("bridge", "unconditioned"):
        raise ValueError(f"unknown mode {mode!r}")
    if sampling not in ("rejection", "importance"):
        raise ValueError(f"unknown sampling {sampling!r}")
    if sampling == "importance" and not (
        mode == "bridge" and isinstance(model, LamplighterModel)
    ):
        raise ValueError("importance sampling applies to lamplighter bridges only")

    table = None
    if mode == "bridge":
        if n % model.period:
            raise PeriodError(n, model.period)
        if not isinstance(model, LamplighterModel):
            table = backward_table(model, n, settings)

    chunks = chunk_ranges(trials, workers)
    if len(chunks) == 1:
        return _run_chunk(
            model, n, mode, seed, chunks[0], table, collect_paths, sampling, settings
        )

    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [
            pool.submit(
                _run_chunk,
                model,
                n,
                mode,
                seed,
                chunk,
                table,
                collect_paths,
                sampling,
                settings,
            )
            for chunk in chunks
        ]
        return [outcome for future in futures for outcome in future.result()]


def summarize(
    model: WalkModel,
    n: int,
    mode: str,
    seed: int,
    outcomes: Sequence[TrialOutcome],
    keep_outcomes: bool = False,
    sampling: str = "rejection",
) -> RangeSummary:
    """Merge outcomes with exact rational sums so the summary is bit-reproducible.

    Outcome weights are self-normalized. The variance carries the correction
    W^2 / (W^2 - sum w^2), which is the unbiased estimator when every weight is 1,
    and the interval uses the effective sample size W^2 / sum w^2.
    """
    trials = len(outcomes)
    weights = [Fraction(o.weight) for o in outcomes]
    total_w = sum(weights, Fraction(0))
    if total_w <= 0:
        raise ValueError("outcome weights must have a positive sum")
    total_w2 = sum((w * w for w in weights), Fraction(0))
    values = [Fraction(o.range, n) for o in outcomes]
    mean = sum((w * x for w, x in zip(weights, values)), Fraction(0)) / total_w
    second = sum((w * x * x for w, x in zip(weights, values)), Fraction(0)) / total_w
    spread = total_w * total_w - total_w2
    var = (second - mean * mean) * total_w * total_w / spread if spread > 0 else Fraction(0)
    ess = total_w * total_w / total_w2

    distances = [
        (w, o.max_distance) for w, o in zip(weights, outcomes) if o.max_distance is not None
    ]
    mean_maxdist = (
        float(sum((w * Fraction(d) for w, d in distances), Fraction(0)) / total_w)
        if len(distances) == trials
        else math.nan
    )
    return RangeSummary(
        model=model.model_id,
        n=n,
        mode=mode,
        trials=trials,
        seed=seed,
        mean_range=float(mean),
        var_range=float(var),
        ci95=Z_95 * math.sqrt(float(var / ess)),
        mean_maxdist=mean_maxdist,
        sampling=sampling,
        ess=float(ess),
        outcomes=tuple(outcomes) if keep_outcomes else (),
    )


def mc_range_experiment(
    model: WalkModel,
    n: int,
    trials: int,
    mode: Mode = "bridge",
    seed: int = 0,
    workers: int = 1,
    collect_paths: bool = False,
    settings: Settings | None = None,
    sampling: SamplingMode = "rejection",
) -> RangeSummary:
    logger.info(
        "Range experiment %s n=%d mode=%s sampling=%s trials=%d seed=%d workers=%d",
        model.model_id,
        n,
        mode,
        sampling,
        trials,
        seed,
        workers,
    )
    outcomes = run_trials(
        model, n, trials, mode, seed, workers, collect_paths, settings, sampling=sampling
    )
    summary = summarize(
        model, n, mode, seed, outcomes, keep_outcomes=collect_paths, sampling=sampling
    )
    logger.info(
        "Range experiment %s n=%d done: mean R/n=%.6f +- %.6f (ess %.1f)",
        model.model_id,
        n,
        summary.mean_range,
        summary.ci95,
        summary.ess,
    )
    return summary


# =============================================================================
# LIMITS AND CONVERGENCE
# =============================================================================


def theoretical_limit(model: WalkModel, mode: Mode) -> float | None:
    """Limit of R_n/n: 1 - F unconditioned, 1 - F(rho) for tree bridges, None if unknown."""
    if isinstance(model, TreeModel):
        forms = tree_closed_forms(model.b)
        return 1.0 - (forms.F_at_rho if mode == "bridge" else forms.F)
    if isinstance(model, LatticeModel):
        if model.dim <= 2:
            return 0.0
        # rho = 1 on lattices, so bridge and unconditioned limits agree.
        try:
            u = return_probabilities(model, _ESCAPE_WINDOW)
        except BudgetExceededError:
            return None
        f = first_return_probabilities(u)
        report = escape_probability(f, spectral_radius_estimate(u))
        return 1.0 - report.estimate
    return None


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    exact_mean: float | None
    mc_mean: float | None
    mc_ci95: float | None
    gap: float | None


@dataclass(frozen=True)
class ConvergenceTable:
    model: str
    mode: str
    limit: float | None
    rows: tuple[ConvergenceRow, ...]
    slope: float | None

    def gaps(self) -> list[float | None]:
        return [row.gap for row in self.rows]


def _exact_means(
    model: WalkModel, n_grid: Sequence[int], mode: str, settings: Settings
) -> dict[int, float]:
    N = max(n_grid)
    try:
        u = return_probabilities(model, N, settings=settings)
    except (BudgetExceededError, UnsupportedModelError) as exc:
        logger.info("No exact means for %s: %s", model.model_id, exc)
        return {}
    f = first_return_probabilities(u)
    out: dict[int, float] = {}
    for n in n_grid:
        if mode == "bridge":
            if n % model.period:
                continue
            out[n] = exact_bridge_range_mean(u, f, n) / n
        else:
            out[n] = exact_unconditioned_range_mean(f, n) / n
    return out


def convergence_table(
    model: WalkModel,
    n_grid: Sequence[int],
    mode: Mode = "bridge",
    trials: int = 0,
    seed: int = 0,
    limit: float | None = None,
    workers: int = 1,
    settings: Settings | None = None,
) -> ConvergenceTable:
    """Exact and Monte Carlo R_n/n along `n_grid` against the limit.

    `limit` defaults to theoretical_limit. When it is 0 the log-log slope of
    E{R_n} against n is fitted instead.
    """
    settings = settings or get_settings()
    n_grid = sorted(n_grid)
    if limit is None:
        limit = theoretical_limit(model, mode)
    exact = _exact_means(model, n_grid, mode, settings)

    rows: list[ConvergenceRow] = []
    for n in n_grid:
        mc_mean = mc_ci = None
        if trials > 0:
            summary = mc_range_experiment(model, n, trials, mode, seed, workers, settings=settings)
            mc_mean, mc_ci = summary.mean_range, summary.ci95
        value = exact.get(n, mc_mean)
        gap = None if value is None or limit is None else value - limit
        rows.append(ConvergenceRow(n, exact.get(n), mc_mean, mc_ci, gap))

    slope = None
    if limit == 0.0:
        points = []
        for row in rows:
            value = row.exact_mean if row.exact_mean is not None else row.mc_mean
            if value is not None and value > 0:
                points.append((row.n, value * row.n))
        if len(points) >= 2:
            slope = fit_loglog_slope([p[0] for p in points], [p[1] for p in points])
    return ConvergenceTable(
        model=model.model_id, mode=mode, limit=limit, rows=tuple(rows), slope=slope
    )


@dataclass(frozen=True)
class DistanceQuantiles:
    n: int
    scale_exponent: float
    median: float
    lower_quartile: float
    upper_quartile: float


def max_distance_quantiles(
    model: WalkModel,
    n: int,
    trials: int,
    seed: int = 0,
    scale_exponent: float = 0.5,
    workers: int = 1,
    settings: Settings | None = None,
) -> DistanceQuantiles:
    """Quartiles of n^-alpha D_n over bridge samples."""
    if not model.supports_distance:
        raise UnsupportedDistanceError(f"no exact distance for {model.model_id}")
    outcomes = run_trials(model, n, trials, "bridge", seed, workers, settings=settings)
    scaled = np.array([o.max_distance for o in outcomes], dtype=float) * n ** (-scale_exponent)
    q25, q50, q75 = np.quantile(scaled, [0.25, 0.5, 0.75])
    return DistanceQuantiles(n, scale_exponent, float(q50), float(q25), float(q75))
