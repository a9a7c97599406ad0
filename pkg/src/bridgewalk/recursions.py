"""Dynamic-programming recursions shared by the kernels and the bridge tables."""

from __future__ import annotations

import logging
import math
from typing import Iterator

import numpy as np
from scipy.stats import binom

from bridgewalk.walk_models import LatticeModel

logger = logging.getLogger("bridgewalk.recursions")


def tree_log_rows(b: int, n: int) -> Iterator[np.ndarray]:
    """Yield log G_m(h) for m = 0..n, each row indexed by height h = 0..m.

    G_m(h) is the probability that the height chain started at h is at 0 after m
    steps: G_m(0) = G_{m-1}(1) and, for h >= 1,
    G_m(h) = G_{m-1}(h-1)/(b+1) + b/(b+1) G_{m-1}(h+1).
    """
    log_down = math.log(1.0 / (b + 1))
    log_up = math.log(b / (b + 1))
    row = np.zeros(1)
    yield row
    for m in range(1, n + 1):
        prev = np.full(m + 2, -np.inf)
        prev[:m] = row
        new = np.empty(m + 1)
        new[0] = prev[1]
        new[1:] = np.logaddexp(log_down + prev[: m], log_up + prev[2 : m + 2])
        row = new
        yield row


def advance_grid(
    grid: np.ndarray,
    steps: tuple[tuple[tuple[int, ...], float], ...],
    radius: int,
    jmax: int,
    new_radius: int,
) -> np.ndarray:
    """One convolution step of a centred distribution grid.

    `grid` has half-width `radius`; the result has half-width `new_radius`
    (mass outside it is dropped).
    """
    dim = grid.ndim
    wide = radius + jmax
    out = np.zeros((2 * wide + 1,) * dim)
    span = 2 * radius + 1
    for vec, p in steps:
        index = tuple(slice(jmax + c, jmax + c + span) for c in vec)
        out[index] += p * grid
    if new_radius >= wide:
        return out
    crop = wide - new_radius
    return out[(slice(crop, crop + 2 * new_radius + 1),) * dim].copy()


def lattice_bridge_grids(model: LatticeModel, n: int) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (radius, P^m(e, .)) for m = 0..n, cropped to radius min(m, n-m)*jmax.

    Only points within that radius can be occupied at time n-m by a walk that is
    back at e at time n.
    """
    jmax = model.max_jump
    grid = np.ones((1,) * model.dim)
    radius = 0
    yield radius, grid
    for m in range(1, n + 1):
        new_radius = min(m, n - m) * jmax
        grid = advance_grid(grid, model.steps, radius, jmax, new_radius)
        radius = new_radius
        yield radius, grid


def lattice_return_grid(model: LatticeModel, n: int) -> np.ndarray:
    """u_0..u_n by full convolution on the cropped box."""
    u = np.zeros(n + 1)
    for m, (radius, grid) in enumerate(lattice_bridge_grids(model, n)):
        u[m] = grid[(radius,) * model.dim]
    return u


def axis_return_probabilities(law: tuple[tuple[int, float], ...], n: int) -> np.ndarray:
    """Return probabilities of the one-dimensional walk with step law `law`."""
    steps = tuple(((j,), p) for j, p in law)
    jmax = max(abs(j) for j, _ in law)
    u = np.zeros(n + 1)
    grid = np.ones(1)
    radius = 0
    u[0] = 1.0
    for m in range(1, n + 1):
        new_radius = min(m, n - m) * jmax
        grid = advance_grid(grid, steps, radius, jmax, new_radius)
        radius = new_radius
        u[m] = grid[radius]
    return u


def mix_axes(axis_u: np.ndarray, dim: int) -> np.ndarray:
    """Return probabilities of the walk that picks a uniform axis, then an axis step.

    Coordinates are independent given how many steps each axis received, so
    u^(j)_n = sum_k Binom(n, k; 1/j) u^(1)_k u^(j-1)_{n-k}.
    """
    current = axis_u.copy()
    n = len(axis_u) - 1
    for j in range(2, dim + 1):
        mixed = np.zeros(n + 1)
        for m in range(n + 1):
            k = np.arange(m + 1)
            weights = binom.pmf(k, m, 1.0 / j)
            mixed[m] = float(np.dot(weights * axis_u[: m + 1], current[m::-1]))
        current = mixed
    return current
