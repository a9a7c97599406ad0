"""Exhaustive path enumeration, the exact oracle for small n."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bridgewalk.walk_models import Vertex, WalkModel
from config import Settings, get_settings
from utils.errors import BudgetExceededError, PeriodError


@dataclass(frozen=True, eq=False)
class PathEnumeration:
    """Every n-step path from e with its probability.

    For bridges `probabilities` are conditional on S_n = e and `masses` hold the
    unconditional path probabilities (summing to u_n).
    """

    n: int
    paths: tuple[tuple[Vertex, ...], ...]
    probabilities: np.ndarray
    masses: np.ndarray

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def __iter__(self):
        return iter(zip(self.paths, self.probabilities.tolist()))

    def __len__(self) -> int:
        return len(self.paths)

    def expectation(self, statistic) -> float:
        """E[statistic(path)] under `probabilities`."""
        values = np.array([statistic(path) for path in self.paths], dtype=float)
        return float(np.dot(values, self.probabilities))


def _check_budget(model: WalkModel, n: int, settings: Settings) -> None:
    if n > settings.enumeration_max_n:
        raise BudgetExceededError("enumeration_max_n", settings.enumeration_max_n, n)
    count = model.degree**n
    if count > settings.enumeration_max_paths:
        raise BudgetExceededError("enumeration_max_paths", settings.enumeration_max_paths, count)


def _all_paths(model: WalkModel, n: int) -> tuple[list[tuple[Vertex, ...]], list[float]]:
    paths: list[tuple[Vertex, ...]] = []
    masses: list[float] = []
    stack: list[tuple[tuple[Vertex, ...], float]] = [((model.identity,), 1.0)]
    while stack:
        path, mass = stack.pop()
        if len(path) == n + 1:
            paths.append(path)
            masses.append(mass)
            continue
        for w, p in reversed(model.neighbors(path[-1])):
            stack.append((path + (w,), mass * p))
    return paths, masses


def enumerate_walks(model: WalkModel, n: int, settings: Settings | None = None) -> PathEnumeration:
    """All n-step paths from e with their unconditional probabilities."""
    settings = settings or get_settings()
    _check_budget(model, n, settings)
    paths, masses = _all_paths(model, n)
    weights = np.array(masses)
    return PathEnumeration(n=n, paths=tuple(paths), probabilities=weights, masses=weights)


def enumerate_bridges(
    model: WalkModel, n: int, settings: Settings | None = None
) -> PathEnumeration:
    """All n-step paths from e back to e with their conditional probabilities."""
    settings = settings or get_settings()
    if n % model.period:
        raise PeriodError(n, model.period)
    _check_budget(model, n, settings)
    origin = model.canonical_key(model.identity)
    paths, masses = _all_paths(model, n)
    kept = [
        (path, mass)
        for path, mass in zip(paths, masses)
        if model.canonical_key(path[-1]) == origin
    ]
    if not kept:
        raise PeriodError(n, model.period)
    weights = np.array([mass for _, mass in kept])
    return PathEnumeration(
        n=n,
        paths=tuple(path for path, _ in kept),
        probabilities=weights / weights.sum(),
        masses=weights,
    )
