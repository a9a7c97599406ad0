from __future__ import annotations

import math

import numpy as np


def render_number(value: float | int | np.floating | np.integer) -> str:
    """Render a CSV cell: integers bare, floats as the shortest round-trip decimal."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def safe_log(values: np.ndarray) -> np.ndarray:
    """Natural log with -inf for exact zeros and no runtime warning."""
    values = np.asarray(values, dtype=float)
    out = np.full(values.shape, -np.inf)
    positive = values > 0
    out[positive] = np.log(values[positive])
    return out


def fit_loglog_slope(xs: np.ndarray | list[float], ys: np.ndarray | list[float]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)
