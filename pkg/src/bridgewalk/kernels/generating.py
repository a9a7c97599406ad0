"""Spectral radius fits and truncated generating-function values."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np
from scipy.special import logsumexp, zeta

from bridgewalk.kernels.sequences import FirstReturnSequence, ReturnSequence
from utils.errors import DivergenceError

logger = logging.getLogger("bridgewalk.kernels")

Correction = Literal["polynomial", "none"]

MIN_NONZERO = 50
# z may exceed rho by this relative amount before the series counts as divergent.
_RADIUS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GeneratingSummary:
    """Decay profile u_n ~ C n^-gamma rho^-n fitted over `window`."""

    rho: float
    gamma: float | None
    method: str
    window: tuple[int, int]
    clamped: bool = False
    monotone: bool = True
    F_at_rho: float | None = None
    F_at_rho_tail: float | None = None

    def to_dict(self) -> dict[str, object]:
        return {
            "rho": self.rho,
            "gamma": self.gamma,
            "method": self.method,
            "window": list(self.window),
            "clamped": self.clamped,
            "monotone": self.monotone,
            "F_at_rho": self.F_at_rho,
            "F_at_rho_tail": self.F_at_rho_tail,
        }


@dataclass(frozen=True)
class SeriesValue:
    """sum_{n<=K} c_n z^n and a bound on the omitted tail."""

    value: float
    tail_bound: float
    K: int
    z: float


def _coefficients(seq: ReturnSequence | FirstReturnSequence) -> tuple[np.ndarray, np.ndarray, int]:
    if isinstance(seq, ReturnSequence):
        return seq.u, seq.log_u, seq.period
    return seq.f, seq.log_f, seq.period


def spectral_radius_estimate(
    seq: ReturnSequence | FirstReturnSequence,
    correction: Correction = "polynomial",
    exponent: float | None = None,
) -> GeneratingSummary:
    """Fit rho from the exponential decay of the nonzero coefficients.

    With the polynomial correction, log c_n = c - n log rho - gamma log n is fitted by
    least squares on the top half of the window (gamma free unless `exponent` pins
    it). Without it, -log(c_n)/n = log rho + b/n is extrapolated to n = infinity.
    """
    _, log_c, _ = _coefficients(seq)
    idx = np.nonzero(np.isfinite(log_c))[0]
    idx = idx[idx > 0]
    if len(idx) < MIN_NONZERO:
        raise ValueError(
            f"spectral radius fit needs at least {MIN_NONZERO} nonzero values, got {len(idx)}"
        )
    top = idx[len(idx) // 2 :]
    n = top.astype(float)
    y = log_c[top]

    gamma: float | None
    if correction == "polynomial":
        if exponent is None:
            design = np.column_stack([np.ones_like(n), -n, -np.log(n)])
            (_, log_rho, gamma), *_ = np.linalg.lstsq(design, y, rcond=None)
            gamma = float(gamma)
        else:
            design = np.column_stack([np.ones_like(n), -n])
            (_, log_rho), *_ = np.linalg.lstsq(design, y + exponent * np.log(n), rcond=None)
            gamma = float(exponent)
    elif correction == "none":
        design = np.column_stack([np.ones_like(n), 1.0 / n])
        (log_rho, _), *_ = np.linalg.lstsq(design, -y / n, rcond=None)
        gamma = None
    else:
        raise ValueError(f"unknown correction {correction!r}")

    log_rho = float(log_rho)
    clamped = log_rho < 0.0
    if clamped:
        log_rho = 0.0

    # Local decay rates should drift one way only.
    steps = np.diff(y) / np.diff(n)
    drift = np.diff(steps)
    monotone = bool(np.all(drift >= -1e-12) or np.all(drift <= 1e-12))
    if not monotone:
        logger.warning(
            "Local decay rates of %s are not monotone over n=%d..%d",
            getattr(seq, "model_id", "sequence"),
            int(top[0]),
            int(top[-1]),
        )

    return GeneratingSummary(
        rho=math.exp(log_rho),
        gamma=gamma,
        method=f"fit-{correction}",
        window=(int(top[0]), int(top[-1])),
        clamped=clamped,
        monotone=monotone,
    )


def generating_value(
    seq: ReturnSequence | FirstReturnSequence,
    z: float,
    K: int | None = None,
    summary: GeneratingSummary | None = None,
) -> SeriesValue:
    """Truncated sum_{n<=K} c_n z^n for 0 <= z <= rho with a tail bound.

    The bound comes from the envelope c_n <= a n^-gamma rho^-n, a taken as the largest
    c_n n^gamma rho^n over the last quarter of the window. At z = rho it is a Hurwitz
    zeta tail, below rho a geometric one. Without a decay profile it is nan.
    """
    coeff, log_c, p = _coefficients(seq)
    N = len(coeff) - 1
    K = N if K is None else K
    if not 0 <= K <= N:
        raise ValueError(f"K={K} outside the available window 0..{N}")
    if z < 0:
        raise ValueError(f"z must be >= 0, got {z}")

    if summary is None:
        try:
            summary = spectral_radius_estimate(seq)
        except ValueError:
            summary = None
    if summary is not None and z > summary.rho * (1.0 + _RADIUS_TOLERANCE):
        raise DivergenceError(f"z={z!r} exceeds the radius of convergence rho={summary.rho!r}")

    if z == 0.0:
        value = float(coeff[0])
    else:
        n = np.arange(K + 1)
        terms = log_c[: K + 1] + n * math.log(z)
        value = float(np.exp(logsumexp(terms))) if np.any(np.isfinite(terms)) else 0.0

    tail = _tail_bound(log_c, K, z, p, summary)
    return SeriesValue(value=value, tail_bound=tail, K=K, z=z)


def _tail_bound(
    log_c: np.ndarray, K: int, z: float, p: int, summary: GeneratingSummary | None
) -> float:
    if summary is None or summary.gamma is None:
        return math.nan
    if z == 0.0:
        return 0.0
    N = len(log_c) - 1
    start = max(1, (3 * K) // 4)
    idx = np.arange(start, K + 1)
    idx = idx[np.isfinite(log_c[idx])]
    if len(idx) == 0:
        idx = np.nonzero(np.isfinite(log_c[1 : N + 1]))[0] + 1
        if len(idx) == 0:
            return 0.0
    gamma = summary.gamma
    log_rho = math.log(summary.rho)
    log_a = float(np.max(log_c[idx] + gamma * np.log(idx) + idx * log_rho))
    a = math.exp(log_a)

    first = K // p + 1
    q = z / summary.rho
    if q >= 1.0 - 1e-12:
        if gamma <= 1.0:
            return math.inf
        return float(a * p ** (-gamma) * zeta(gamma, first))
    # a n^-gamma q^n <= a (pK')^-gamma q^(pK') q^(p j) for the geometric remainder
    n0 = p * first
    return float(a * n0 ** (-gamma) * q**n0 / (1.0 - q**p))


def with_F_at_rho(summary: GeneratingSummary, f: FirstReturnSequence) -> GeneratingSummary:
    """Attach the truncated F(rho) and its tail bound to a fitted profile."""
    value = generating_value(f, summary.rho, summary=summary)
    return replace(summary, F_at_rho=value.value, F_at_rho_tail=value.tail_bound)
