"""Exact range expectations from first-entry and last-exit decompositions."""

from __future__ import annotations

import numpy as np

from bridgewalk.kernels.sequences import FirstReturnSequence, ReturnSequence
from utils.errors import PeriodError


def exact_unconditioned_range_mean(f: FirstReturnSequence, n: int) -> float:
    """E{R_n} = sum_{k=0}^{n-1} (1 - F_k).

    For symmetric steps S_k is a new vertex with the probability that the walk has not
    returned to e within k steps (reverse the path).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if f.N < n - 1:
        raise ValueError(f"first returns known up to {f.N}, need {n - 1}")
    return float(np.sum(1.0 - f.partial[:n]))


def exact_bridge_range_mean(u: ReturnSequence, f: FirstReturnSequence, n: int) -> float:
    """E{R_n | S_n = e} = n + 1 - (1/u_n) sum_{r=1}^{n} (n - r + 1) f_r u_{n-r}.

    Sums, over k < n, the chance that S_k is not visited again before time n on the
    bridge; ratios u_{n-r}/u_n are taken in the log domain.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if u.N < n or f.N < n:
        raise ValueError(f"sequences known up to {min(u.N, f.N)}, need {n}")
    if not np.isfinite(u.log_u[n]):
        raise PeriodError(n, u.period)
    r = np.arange(1, n + 1)
    fr = f.f[1 : n + 1]
    keep = fr > 0
    ratios = np.exp(u.log_u[n - r[keep]] - u.log_u[n])
    correction = float(np.sum((n - r[keep] + 1) * fr[keep] * ratios))
    return float(n + 1 - correction)
