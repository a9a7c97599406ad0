"""Backward tables G_m(v): probability of being at e after m steps from v."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from bridgewalk.recursions import lattice_bridge_grids, tree_log_rows
from bridgewalk.walk_models import LatticeModel, TreeModel, Vertex, WalkModel
from config import Settings, get_settings
from utils.errors import BudgetExceededError, UnsupportedModelError
from utils.helpers import safe_log

logger = logging.getLogger("bridgewalk.bridge.tables")


@dataclass(frozen=True, eq=False)
class BackwardTable:
    """log G_m over reduced states for every remaining time m in [0, n].

    Trees are indexed by height (row m covers heights 0..min(m, n-m)); lattices by a
    centred box of half-width radii[m]. Entries outside the stored range are -inf.
    """

    model: WalkModel
    n: int
    log_g: tuple[np.ndarray, ...]
    radii: tuple[int, ...]

    def log_value(self, m: int, v: Vertex) -> float:
        if not 0 <= m <= self.n:
            raise ValueError(f"remaining time {m} outside [0, {self.n}]")
        row = self.log_g[m]
        radius = self.radii[m]
        if isinstance(self.model, TreeModel):
            assert isinstance(v, tuple)
            h = len(v)
            return float(row[h]) if h <= radius else -math.inf
        assert isinstance(v, tuple)
        if any(abs(c) > radius for c in v):
            return -math.inf
        return float(row[tuple(c + radius for c in v)])

    def value(self, m: int, v: Vertex) -> float:
        return math.exp(self.log_value(m, v))

    @property
    def log_u(self) -> np.ndarray:
        """log G_m(e) = log u_m for m = 0..n."""
        e = self.model.identity
        return np.array([self.log_value(m, e) for m in range(self.n + 1)])


def backward_table(model: WalkModel, n: int, settings: Settings | None = None) -> BackwardTable:
    """Build the exact conditioning kernel for bridges of length n."""
    settings = settings or get_settings()
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")

    if isinstance(model, TreeModel):
        if n > settings.tree_table_max_n:
            raise BudgetExceededError("tree_table_max_n", settings.tree_table_max_n, n)
        rows: list[np.ndarray] = []
        radii: list[int] = []
        for m, row in enumerate(tree_log_rows(model.b, n)):
            keep = min(m, n - m)
            rows.append(row[: keep + 1].copy())
            radii.append(keep)
        logger.debug("Built tree table b=%d n=%d", model.b, n)
        return BackwardTable(model=model, n=n, log_g=tuple(rows), radii=tuple(radii))

    if isinstance(model, LatticeModel):
        cap = settings.lattice_table_max_n(model.dim)
        if n > cap:
            raise BudgetExceededError(f"lattice_table_max_n_{model.dim}d", cap, n)
        grids: list[np.ndarray] = []
        radii = []
        for radius, grid in lattice_bridge_grids(model, n):
            grids.append(safe_log(grid))
            radii.append(radius)
        logger.debug(
            "Built lattice table %s n=%d (%d cells)",
            model.model_id,
            n,
            sum(g.size for g in grids),
        )
        return BackwardTable(model=model, n=n, log_g=tuple(grids), radii=tuple(radii))

    raise UnsupportedModelError(
        f"no backward table for {model.model_id}; lamplighter bridges use the projection sampler"
    )
