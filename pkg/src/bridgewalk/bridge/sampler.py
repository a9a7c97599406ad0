"""Exact bridge sampling by backward (Doob) conditioning."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bridgewalk.bridge.tables import BackwardTable
from bridgewalk.walk_models import Vertex, WalkModel
from utils.errors import PeriodError, UnreachableStateError


@dataclass(frozen=True)
class BridgePath:
    model_id: str
    n: int
    vertices: tuple[Vertex, ...]
    conditioned: bool = True

    def __len__(self) -> int:
        return len(self.vertices)


def bridge_step_distribution(
    model: WalkModel, table: BackwardTable, v: Vertex, k: int
) -> list[tuple[Vertex, float]]:
    """Law of S_{k+1} given S_k = v and S_n = e.

    P(v -> w) = P(v, w) G_{n-k-1}(w) / G_{n-k}(v), evaluated as exp of log differences
    and renormalised locally so underflow of G never biases the choice.
    """
    m = table.n - k
    if m <= 0:
        raise ValueError(f"step index k={k} must be < n={table.n}")
    log_denominator = table.log_value(m, v)
    if log_denominator == -math.inf:
        raise UnreachableStateError(f"G_{m}({v!r}) = 0 at step {k} of a length-{table.n} bridge")

    candidates = model.neighbors(v)
    log_weights = np.array(
        [math.log(p) + table.log_value(m - 1, w) - log_denominator for w, p in candidates]
    )
    if np.all(np.isneginf(log_weights)):
        raise UnreachableStateError(f"no admissible step from {v!r} at step {k}")
    weights = np.exp(log_weights - log_weights.max())
    weights /= weights.sum()
    return [(w, float(q)) for (w, _p), q in zip(candidates, weights)]


def choose_neighbor(options: list[tuple[Vertex, float]], rng: np.random.Generator) -> Vertex:
    cumulative = np.cumsum([p for _, p in options])
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return options[min(index, len(options) - 1)][0]


def sample_bridge(model: WalkModel, table: BackwardTable, rng: np.random.Generator) -> BridgePath:
    """Draw S_0..S_n from the walk conditioned on S_n = e."""
    n = table.n
    if n % model.period:
        raise PeriodError(n, model.period)
    v = model.identity
    vertices = [v]
    for k in range(n):
        v = choose_neighbor(bridge_step_distribution(model, table, v, k), rng)
        vertices.append(v)
    return BridgePath(model_id=model.model_id, n=n, vertices=tuple(vertices), conditioned=True)


def sample_walk(model: WalkModel, n: int, rng: np.random.Generator) -> BridgePath:
    """Draw an unconditioned n-step walk from e."""
    v = model.identity
    vertices = [v]
    for _ in range(n):
        v = choose_neighbor(model.neighbors(v), rng)
        vertices.append(v)
    return BridgePath(model_id=model.model_id, n=n, vertices=tuple(vertices), conditioned=False)


def path_probability(model: WalkModel, table: BackwardTable, path: tuple[Vertex, ...]) -> float:
    """Probability that sample_bridge emits exactly `path`."""
    if len(path) != table.n + 1:
        raise ValueError(f"path has {len(path) - 1} steps, table is for n={table.n}")
    probability = 1.0
    for k in range(table.n):
        target = model.canonical_key(path[k + 1])
        step = sum(
            q
            for w, q in bridge_step_distribution(model, table, path[k], k)
            if model.canonical_key(w) == target
        )
        if step == 0.0:
            return 0.0
        probability *= step
    return probability
