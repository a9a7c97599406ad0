"""
Lamplighter bridges through the projection on Z.

A lamplighter path projecting onto a simple-walk bridge y_0..y_n with N_n distinct
departed sites returns to the identity for exactly 2^(n - N_n) of its 2^n toggle
sequences. Hence the projected range has law proportional to 2^-r q_r, where
q_r = P{S_n = 0, range = r} for the simple walk on Z, and a lamplighter bridge can
be drawn by rejection from simple-walk bridges.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from bridgewalk.bridge.sampler import path_probability, sample_bridge
from bridgewalk.bridge.tables import BackwardTable, backward_table
from bridgewalk.walk_models import LampState, LatticeModel, ModelSpec, make_model
from config import Settings, get_settings
from utils.errors import (
    AcceptanceStarvationError,
    BudgetExceededError,
    PeriodError,
    UnsupportedModelError,
)

logger = logging.getLogger("bridgewalk.bridge.lamplighter")

SamplingMode = Literal["rejection", "importance"]

# One DP run serves every t up to the rounded-up horizon.
_HORIZON_STEP = 40


# =============================================================================
# PROJECTED RANGE TABLE
# =============================================================================


@dataclass(frozen=True, eq=False)
class ProjectionRangeTable:
    """q[r] = P{simple-walk bridge at time n AND range r}, r = 0..n+1."""

    n: int
    q: np.ndarray

    @property
    def total_mass(self) -> float:
        return float(self.q.sum())

    @property
    def pmf(self) -> np.ndarray:
        return lamplighter_projection_pmf(self)

    @property
    def expected_range(self) -> float:
        return expected_projection_range(self)

    @property
    def lamplighter_return_probability(self) -> float:
        return lamplighter_return_probability(self)


@lru_cache(maxsize=8)
def _projection_joint_all(horizon: int) -> np.ndarray:
    """Q[t, r] = P{S_t = 0, max - min + 1 = r} for the simple walk on Z, t <= horizon.

    Forward DP over (a, b, x) with a = -min, b = max, x the position. States with
    a or b beyond horizon/2 can no longer return in time and are dropped.
    """
    half = horizon // 2
    size = half + 1
    centre = half
    prob = np.zeros((size, size, 2 * half + 1))
    prob[0, 0, centre] = 1.0
    out = np.zeros((horizon + 1, horizon + 2))
    out[0, 1] = 1.0

    a_idx, b_idx = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    width = (a_idx + b_idx).ravel()
    steps = np.arange(half)

    for t in range(1, horizon + 1):
        half_mass = 0.5 * prob

        right = np.zeros_like(prob)
        right[:, :, 1:] = half_mass[:, :, :-1]
        # Moving right from x = b opens a new maximum.
        cols = centre + steps + 1
        moved = right[:, steps, cols].copy()
        right[:, steps, cols] = 0.0
        right[:, steps + 1, cols] += moved

        left = np.zeros_like(prob)
        left[:, :, :-1] = half_mass[:, :, 1:]
        # Moving left from x = -a opens a new minimum.
        cols = centre - steps - 1
        moved = left[steps, :, cols].copy()
        left[steps, :, cols] = 0.0
        left[steps + 1, :, cols] += moved

        prob = right + left
        at_origin = prob[:, :, centre].ravel()
        out[t, 1:] = np.bincount(width, weights=at_origin, minlength=horizon + 1)[: horizon + 1]

    logger.debug("Projection range DP finished (horizon=%d)", horizon)
    return out


def projection_range_joint(n: int, settings: Settings | None = None) -> ProjectionRangeTable:
    """Exact joint law of {bridge at n} and the range for the simple walk on Z."""
    settings = settings or get_settings()
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > settings.projection_max_n:
        raise BudgetExceededError("projection_max_n", settings.projection_max_n, n)
    horizon = max(_HORIZON_STEP, -(-n // _HORIZON_STEP) * _HORIZON_STEP)
    table = _projection_joint_all(horizon)
    return ProjectionRangeTable(n=n, q=table[n].copy())


def lamplighter_return_probability(table: ProjectionRangeTable) -> float:
    """Lamplighter u_n = sum_r 2^-r q_r (the pmf denominator)."""
    r = np.arange(len(table.q))
    return float(np.dot(np.exp2(-r.astype(float)), table.q))


def lamplighter_projection_pmf(table: ProjectionRangeTable) -> np.ndarray:
    """P{N_n = r} proportional to 2^-r q_r."""
    r = np.arange(len(table.q))
    weights = np.exp2(-r.astype(float)) * table.q
    total = weights.sum()
    if total <= 0:
        raise PeriodError(table.n, 2)
    return weights / total


def expected_projection_range(table: ProjectionRangeTable) -> float:
    """E{N_n} = sum_r r 2^-r q_r / sum_s 2^-s q_s."""
    pmf = lamplighter_projection_pmf(table)
    return float(np.dot(np.arange(len(pmf)), pmf))


def lamplighter_return_probabilities(n_max: int, settings: Settings | None = None) -> np.ndarray:
    """Exact u_0..u_{n_max} of the lamplighter walk over Z."""
    settings = settings or get_settings()
    if n_max > settings.projection_max_n:
        raise BudgetExceededError("projection_max_n", settings.projection_max_n, n_max)
    horizon = max(_HORIZON_STEP, -(-n_max // _HORIZON_STEP) * _HORIZON_STEP)
    table = _projection_joint_all(horizon)[: n_max + 1]
    r = np.arange(table.shape[1])
    return table @ np.exp2(-r.astype(float))


# =============================================================================
# BRIDGE SAMPLER
# =============================================================================


@dataclass(frozen=True)
class LampBridgePath:
    n: int
    states: tuple[LampState, ...]
    toggles: tuple[bool, ...]
    projection_range: int
    weight: float = 1.0
    attempts: int = 1

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(s.position[0] for s in self.states)


@lru_cache(maxsize=16)
def _line_bridge_table(n: int, cap: int) -> tuple[LatticeModel, BackwardTable]:
    model = make_model(ModelSpec(kind="lattice", dim=1))
    assert isinstance(model, LatticeModel)
    budget = get_settings().with_budgets({"lattice_table_max_n_1d": cap})
    return model, backward_table(model, n, budget)


def _resolve_toggles(positions: list[int], rng: np.random.Generator) -> list[bool]:
    """Uniform toggle sequence with even parity at every departed site.

    At a site departed v times the first v-1 toggles are fair coins and the last one
    restores the lamp.
    """
    remaining = Counter(positions[:-1])
    lit: set[int] = set()
    toggles: list[bool] = []
    for y in positions[:-1]:
        remaining[y] -= 1
        if remaining[y] == 0:
            flip = y in lit
        else:
            flip = bool(rng.random() < 0.5)
        if flip:
            lit ^= {y}
        toggles.append(flip)
    return toggles


def sample_lamplighter_bridge(
    d: int,
    n: int,
    rng: np.random.Generator,
    mode: SamplingMode = "rejection",
    max_attempts: int | None = None,
    settings: Settings | None = None,
) -> LampBridgePath:
    """Draw a lamplighter bridge over Z^d (d = 1) of length n.

    `max_attempts` defaults to settings.rejection_max_attempts; the projected
    simple-walk table is bounded by settings.lattice_table_max_n_1d.
    """
    if d != 1:
        raise UnsupportedModelError(
            f"exact lamplighter bridges are only available for d=1, got d={d}"
        )
    if n % 2:
        raise PeriodError(n, 2)
    settings = settings or get_settings()
    if max_attempts is None:
        max_attempts = settings.rejection_max_attempts

    line, table = _line_bridge_table(n, settings.lattice_table_max_n_1d)
    attempts = 0
    while True:
        attempts += 1
        projected = sample_bridge(line, table, rng)
        positions = [v[0] for v in projected.vertices]
        n_range = len(set(positions[:-1])) if n else 1
        if mode == "importance":
            weight = math.ldexp(1.0, -n_range)
            break
        if rng.random() < math.ldexp(1.0, -(n_range - 1)):
            weight = 1.0
            break
        if attempts >= max_attempts:
            raise AcceptanceStarvationError(attempts, n)

    toggles = _resolve_toggles(positions, rng)
    lamps: frozenset[tuple[int, ...]] = frozenset()
    states = [LampState(lamps, (positions[0],))]
    for k, flip in enumerate(toggles):
        if flip:
            lamps = lamps ^ {(positions[k],)}
        states.append(LampState(lamps, (positions[k + 1],)))
    return LampBridgePath(
        n=n,
        states=tuple(states),
        toggles=tuple(toggles),
        projection_range=n_range,
        weight=weight,
        attempts=attempts,
    )


def lamplighter_path_probability(
    path: tuple[LampState, ...], settings: Settings | None = None
) -> float:
    """Probability that the rejection sampler emits exactly `path` (d = 1).

    P(projection) * 2^-(N_n - 1) / E[2^-(N_n - 1)] times 2^-(n - N_n) for the
    toggle sequence, and 0 for anything that is not a lamplighter bridge.
    """
    settings = settings or get_settings()
    n = len(path) - 1
    identity = LampState(frozenset(), (0,))
    if n < 0 or n % 2 or path[0] != identity or path[-1] != identity:
        return 0.0
    positions = [s.position[0] for s in path]
    for k in range(n):
        if abs(positions[k + 1] - positions[k]) != 1:
            return 0.0
        lamps = path[k + 1].lamps
        if lamps != path[k].lamps and lamps != path[k].lamps ^ {(positions[k],)}:
            return 0.0

    line, table = _line_bridge_table(n, settings.lattice_table_max_n_1d)
    projected = path_probability(line, table, tuple((y,) for y in positions))
    n_range = len(set(positions[:-1])) if n else 1
    joint = projection_range_joint(n, settings)
    r = np.arange(len(joint.q), dtype=float)
    acceptance = float(np.dot(np.exp2(-(r - 1.0)), joint.q) / joint.total_mass)
    return projected * math.ldexp(1.0, -(n_range - 1)) / acceptance * math.ldexp(1.0, n_range - n)
