"""Return probabilities u_n, first returns f_n and the return probability F."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal

import numpy as np
from scipy.special import zeta

from bridgewalk.bridge.lamplighter import lamplighter_return_probabilities
from bridgewalk.bridge.sampler import choose_neighbor
from bridgewalk.recursions import (
    axis_return_probabilities,
    lattice_return_grid,
    mix_axes,
    tree_log_rows,
)
from bridgewalk.rng import trial_generator
from bridgewalk.walk_models import LamplighterModel, LatticeModel, TreeModel, WalkModel
from config import Settings, get_settings
from utils.errors import BudgetExceededError, NumericalInstabilityError, UnsupportedModelError
from utils.helpers import safe_log

if TYPE_CHECKING:
    from bridgewalk.kernels.generating import GeneratingSummary

logger = logging.getLogger("bridgewalk.kernels")

ReturnMethod = Literal["exact", "monte_carlo"]

# Negative first-return values above this are round-off and get clamped to zero.
NEGATIVE_TOLERANCE = 1e-12
# Partial sums count as stabilized when the last quarter moves less than this.
STABILIZATION_TOLERANCE = 1e-6
# rho above 1 + this counts as exponential decay.
EXPONENTIAL_THRESHOLD = 2e-3
# Decay exponents of u above this count as transient (D > 2).
TRANSIENT_EXPONENT = 1.25


def _infer_period(u: np.ndarray) -> int:
    odd = u[1::2]
    return 2 if len(odd) and not np.any(odd > 0) else 1


@dataclass(frozen=True, eq=False)
class ReturnSequence:
    """u_0..u_N with log companions (-inf where u_n = 0)."""

    u: np.ndarray
    log_u: np.ndarray
    period: int
    model_id: str = "custom"
    method: str = "exact"
    stderr: np.ndarray | None = None

    @classmethod
    def from_values(
        cls, values, period: int | None = None, model_id: str = "custom"
    ) -> "ReturnSequence":
        u = np.asarray(values, dtype=float)
        if len(u) == 0 or u[0] != 1.0:
            raise ValueError("a return sequence must start with u_0 = 1")
        return cls(u=u, log_u=safe_log(u), period=period or _infer_period(u), model_id=model_id)

    @property
    def N(self) -> int:
        return len(self.u) - 1

    def __len__(self) -> int:
        return len(self.u)

    def __getitem__(self, n: int) -> float:
        return float(self.u[n])


@dataclass(frozen=True, eq=False)
class FirstReturnSequence:
    """f_0..f_N (f_0 = 0) with partial sums F_k.

    `log_values` keeps log f_n when it is known more precisely than log of the
    stored float (closed forms far into the tail).
    """

    f: np.ndarray
    partial: np.ndarray
    period: int
    model_id: str = "custom"
    log_values: np.ndarray | None = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return len(self.f) - 1

    @property
    def F(self) -> float:
        return float(self.partial[-1])

    @property
    def log_f(self) -> np.ndarray:
        if self.log_values is not None:
            return self.log_values
        return safe_log(self.f)

    @property
    def stabilized(self) -> bool:
        return _stabilized(self.partial)

    def __len__(self) -> int:
        return len(self.f)

    def __getitem__(self, n: int) -> float:
        return float(self.f[n])


def _stabilized(partial: np.ndarray) -> bool:
    N = len(partial) - 1
    if N < 4:
        return False
    return bool(partial[N] - partial[(3 * N) // 4] < STABILIZATION_TOLERANCE)


# =============================================================================
# RETURN PROBABILITIES
# =============================================================================


def return_probabilities(
    model: WalkModel,
    N: int,
    method: ReturnMethod = "exact",
    trials: int | None = None,
    seed: int = 0,
    settings: Settings | None = None,
) -> ReturnSequence:
    """u_n = P{S_n = e} for n = 0..N.

    Exact paths: trees through the height recursion, lattices through axis mixing
    (per-axis jump laws) or full-grid convolution, the d=1 lamplighter through the
    projected-range table. Monte Carlo has to be asked for explicitly.
    """
    settings = settings or get_settings()
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    if method == "monte_carlo":
        return _monte_carlo_returns(model, N, trials or settings.mc_return_trials, seed)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")

    if isinstance(model, TreeModel):
        if N > settings.tree_table_max_n:
            raise BudgetExceededError("tree_table_max_n", settings.tree_table_max_n, N)
        log_u = np.array([row[0] for row in tree_log_rows(model.b, N)])
        return ReturnSequence(
            u=np.exp(log_u), log_u=log_u, period=model.period, model_id=model.model_id
        )

    if isinstance(model, LatticeModel):
        if N > settings.lattice_return_max_n:
            raise BudgetExceededError("lattice_return_max_n", settings.lattice_return_max_n, N)
        if model.is_axis_separable:
            u = mix_axes(axis_return_probabilities(model.axis_law(), N), model.dim)
        else:
            cells = (2 * (N // 2) * model.max_jump + 1) ** model.dim
            if cells > settings.grid_return_max_cells:
                raise BudgetExceededError(
                    "grid_return_max_cells", settings.grid_return_max_cells, cells
                )
            u = lattice_return_grid(model, N)
        logger.debug("Lattice returns %s up to N=%d", model.model_id, N)
        return ReturnSequence(u=u, log_u=safe_log(u), period=model.period, model_id=model.model_id)

    if isinstance(model, LamplighterModel):
        if model.dim != 1:
            raise UnsupportedModelError(
                f"exact returns for {model.model_id} are unavailable; "
                "request method='monte_carlo'"
            )
        if N > settings.lamplighter_exact_max_n:
            raise BudgetExceededError(
                "lamplighter_exact_max_n", settings.lamplighter_exact_max_n, N
            )
        u = lamplighter_return_probabilities(N, settings)
        return ReturnSequence(u=u, log_u=safe_log(u), period=model.period, model_id=model.model_id)

    raise UnsupportedModelError(f"unsupported model {model!r}")


def _monte_carlo_returns(model: WalkModel, N: int, trials: int, seed: int) -> ReturnSequence:
    logger.info("Monte Carlo returns for %s (N=%d, trials=%d)", model.model_id, N, trials)
    origin = model.canonical_key(model.identity)
    hits = np.zeros(N + 1, dtype=np.int64)
    for trial in range(trials):
        rng = trial_generator(seed, trial)
        v = model.identity
        hits[0] += 1
        for n in range(1, N + 1):
            v = choose_neighbor(model.neighbors(v), rng)
            if model.canonical_key(v) == origin:
                hits[n] += 1
    u = hits / trials
    stderr = np.sqrt(u * (1.0 - u) / trials)
    return ReturnSequence(
        u=u,
        log_u=safe_log(u),
        period=model.period,
        model_id=model.model_id,
        method="monte_carlo",
        stderr=stderr,
    )


# =============================================================================
# FIRST RETURNS
# =============================================================================


def first_return_probabilities(u: ReturnSequence) -> FirstReturnSequence:
    """Invert the renewal identity u_n = sum_{k=1..n} f_k u_{n-k}."""
    values = u.u
    if values[0] != 1.0:
        raise ValueError("u_0 must be 1")
    N = len(values) - 1
    f = np.zeros(N + 1)
    for n in range(1, N + 1):
        # sum_{k=1}^{n-1} f_k u_{n-k}
        value = values[n] - float(np.dot(f[1:n], values[n - 1 : 0 : -1]))
        if value < 0.0:
            if value < -NEGATIVE_TOLERANCE:
                raise NumericalInstabilityError(
                    f"first-return probability f_{n} = {value!r} is negative beyond tolerance"
                )
            logger.warning("Clamped f_%d = %r to zero", n, value)
            value = 0.0
        f[n] = value
    return FirstReturnSequence(
        f=f, partial=np.cumsum(f), period=u.period, model_id=u.model_id
    )


def renewal_residuals(u: ReturnSequence, f: FirstReturnSequence) -> float:
    """max_n |u_n - sum_{k<=n} f_k u_{n-k}| over n >= 1."""
    values = u.u
    N = min(len(values), len(f.f)) - 1
    worst = 0.0
    for n in range(1, N + 1):
        rebuilt = float(np.dot(f.f[1 : n + 1], values[n - 1 :: -1][:n]))
        worst = max(worst, abs(values[n] - rebuilt))
    return worst


# =============================================================================
# RETURN PROBABILITY F
# =============================================================================


@dataclass(frozen=True)
class EscapeReport:
    """F = P{S_n = e for some n >= 1} from a truncated f-series.

    `tail_estimate` is the fitted mass beyond N (None when no fit applies); it is
    reported alongside `partial_sum`, and `estimate` is their sum capped at 1.
    """

    partial_sum: float
    tail_estimate: float | None
    estimate: float
    N: int
    stabilized: bool
    recurrent: bool
    tail_model: str

    @property
    def inconclusive(self) -> bool:
        return not self.stabilized


def escape_probability(
    f: FirstReturnSequence, summary: "GeneratingSummary | None" = None
) -> EscapeReport:
    """Truncated F with a tail estimate chosen from the decay profile in `summary`.

    rho > 1: f_n ~ a n^(-3/2) rho^(-n). rho = 1 with u_n ~ n^(-gamma), gamma > 1:
    f_n ~ a n^(-gamma). Otherwise the walk counts as recurrent (F = 1), but only once the
    partial sums have stabilized; before that the report is inconclusive and `estimate`
    is the partial sum.
    """
    partial = f.F
    stabilized = f.stabilized
    N = f.N
    p = f.period

    if summary is None:
        return EscapeReport(partial, None, min(partial, 1.0), N, stabilized, False, "none")

    window = _tail_window(f)
    if summary.rho > 1.0 + EXPONENTIAL_THRESHOLD and len(window):
        log_rho = math.log(summary.rho)
        scaled = f.log_f[window] + 1.5 * np.log(window) + window * log_rho
        a = float(np.exp(scaled[-1]))
        n = np.arange(N + p - (N % p), 40 * N + 1, p, dtype=float)
        tail = float(np.sum(a * np.exp(-1.5 * np.log(n) - n * log_rho)))
        model = "geometric"
        recurrent = False
    elif summary.gamma is not None and summary.gamma > TRANSIENT_EXPONENT and len(window):
        gamma = summary.gamma
        a = float(np.mean(f.f[window] * window.astype(float) ** gamma))
        # sum over multiples of p beyond N of a n^-gamma
        first = N // p + 1
        tail = float(a * p ** (-gamma) * zeta(gamma, first))
        model = "polynomial"
        recurrent = False
    elif stabilized:
        return EscapeReport(partial, 1.0 - partial, 1.0, N, stabilized, True, "recurrent")
    else:
        logger.warning(
            "F inconclusive for %s: partial sum %.6f still moving at N=%d", f.model_id, partial, N
        )
        return EscapeReport(partial, None, min(partial, 1.0), N, False, False, "inconclusive")

    estimate = min(partial + tail, 1.0)
    logger.debug("F estimate %.8f (partial %.8f, %s tail %.3g)", estimate, partial, model, tail)
    return EscapeReport(partial, tail, estimate, N, stabilized, recurrent, model)


def _tail_window(f: FirstReturnSequence) -> np.ndarray:
    """Indices of nonzero f in the last quarter."""
    start = (3 * f.N) // 4
    idx = np.nonzero(f.f[start:] > 0)[0] + start
    return idx[idx > 0]
