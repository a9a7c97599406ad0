"""Finite-window checks of the moment inequalities and ratio behaviour of u_n."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from bridgewalk.kernels.sequences import ReturnSequence

logger = logging.getLogger("bridgewalk.kernels")

SLACK = 1e-12
# Relative spread over the last quarter below which a trajectory counts as settled.
_SETTLED_SPREAD = 0.05


@dataclass(frozen=True)
class Violation:
    family: str
    indices: tuple[int, ...]
    lhs: float
    rhs: float


@dataclass(frozen=True)
class MomentReport:
    N: int
    checked: dict[str, int]
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_family(self, family: str) -> list[Violation]:
        return [v for v in self.violations if v.family == family]


def verify_moment_properties(u: ReturnSequence, slack: float = SLACK) -> MomentReport:
    """Check the consequences of u_n being the moments of a measure on [-1, 1].

    Families:
      even_nonincreasing   u_{2n+2} <= u_{2n}
      odd_below_even       u_{2n+1} <= u_{2n}
      supermultiplicative  u_{2k+2l} >= u_{2k} u_{2l}
      product_monotone     u_{2r} u_{2n-2r} >= u_{2r+2} u_{2n-2r-2} for 2r+1 <= n
      ratio_lower_bound    u_{2n+2r}/u_{2n} >= n/(n+r) (r/(n+r))^(r/n) u_{2n}^(r/n)
    """
    values = u.u
    even = values[::2]
    M = len(even)
    violations: list[Violation] = []
    checked = dict.fromkeys(
        (
            "even_nonincreasing",
            "odd_below_even",
            "supermultiplicative",
            "product_monotone",
            "ratio_lower_bound",
        ),
        0,
    )

    for n in np.nonzero(even[1:] > even[:-1] + slack)[0]:
        violations.append(
            Violation("even_nonincreasing", (2 * n + 2, 2 * n), even[n + 1], even[n])
        )
    checked["even_nonincreasing"] = max(M - 1, 0)

    odd = values[1::2]
    for n in np.nonzero(odd > even[: len(odd)] + slack)[0]:
        violations.append(Violation("odd_below_even", (2 * n + 1, 2 * n), odd[n], even[n]))
    checked["odd_below_even"] = len(odd)

    for k in range(1, M):
        ell = np.arange(k, M - k)
        if not len(ell):
            break
        lhs = even[k + ell]
        rhs = even[k] * even[ell]
        checked["supermultiplicative"] += len(ell)
        for j in np.nonzero(lhs < rhs - slack)[0]:
            violations.append(
                Violation(
                    "supermultiplicative",
                    (2 * k, 2 * int(ell[j])),
                    float(lhs[j]),
                    float(rhs[j]),
                )
            )

    for n in range(1, M):
        r = np.arange(0, (n - 1) // 2 + 1)
        if not len(r):
            continue
        current = even[r] * even[n - r]
        following = even[r + 1] * even[n - r - 1]
        checked["product_monotone"] += len(r)
        for j in np.nonzero(following > current + slack)[0]:
            violations.append(
                Violation(
                    "product_monotone",
                    (2 * n, 2 * int(r[j])),
                    float(following[j]),
                    float(current[j]),
                )
            )

    log_even = u.log_u[::2]
    for n in range(1, M):
        if not np.isfinite(log_even[n]):
            continue
        r = np.arange(1, M - n, dtype=float)
        if not len(r):
            break
        ratio = r / n
        log_bound = (
            np.log(n / (n + r)) + ratio * np.log(r / (n + r)) + ratio * log_even[n] + log_even[n]
        )
        bound = np.exp(log_bound)
        actual = even[n + 1 :]
        checked["ratio_lower_bound"] += len(r)
        for j in np.nonzero(actual < bound - slack)[0]:
            violations.append(
                Violation(
                    "ratio_lower_bound",
                    (2 * n, 2 * int(r[j])),
                    float(actual[j]),
                    float(bound[j]),
                )
            )

    if violations:
        logger.warning(
            "%d moment-inequality violation(s) in %s", len(violations), u.model_id
        )
    return MomentReport(N=u.N, checked=checked, violations=violations)


# =============================================================================
# RATIO DIAGNOSTICS
# =============================================================================


@dataclass(frozen=True, eq=False)
class RatioDiagnostics:
    """Finite-grid ratio evidence; every sup is a max over the stated grid."""

    doubling_n: np.ndarray
    doubling_ratios: np.ndarray
    doubling_sup: float
    shift_n: np.ndarray
    shift_sup: np.ndarray
    shift_sup_overall: float
    trajectories: dict[int, tuple[np.ndarray, np.ndarray]]
    g_values: np.ndarray
    h_values: np.ndarray
    rho: float
    eta: float
    doubling_verdict: str
    trajectory_verdicts: dict[int, str]


def _settled(values: np.ndarray) -> bool:
    if len(values) < 4:
        return False
    tail = values[(3 * len(values)) // 4 :]
    centre = abs(float(np.mean(tail))) or 1.0
    return bool((tail.max() - tail.min()) / centre < _SETTLED_SPREAD)


def ratio_diagnostics(
    u: ReturnSequence,
    rho: float,
    eta: float,
    r_values: tuple[int, ...] = (0, 2, 4),
) -> RatioDiagnostics:
    """u_{2n}/u_{4n} and u_{n-r}/(rho^r u_n), all as exp of log differences.

    g(n) is reported as log(1/u_{2n}); h(n) as the log of the per-n supremum of
    u_{n-r}/(rho^r u_n) over r <= (1 - eta) n.
    """
    if rho <= 0:
        raise ValueError(f"rho must be > 0, got {rho}")
    if not 0 < eta < 1:
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    log_u = u.log_u
    N = u.N
    p = u.period
    log_rho = math.log(rho)

    doubling_n = np.arange(1, N // 4 + 1)
    doubling = log_u[2 * doubling_n] - log_u[4 * doubling_n]
    keep = np.isfinite(doubling)
    doubling_n, doubling_ratios = doubling_n[keep], np.exp(doubling[keep])
    doubling_sup = float(doubling_ratios.max()) if len(doubling_ratios) else math.nan

    shift_n = np.array([n for n in range(p, N + 1, p) if np.isfinite(log_u[n])], dtype=int)
    shift_sup = np.empty(len(shift_n))
    for i, n in enumerate(shift_n):
        r = np.arange(0, int((1 - eta) * n) + 1, p)
        shift_sup[i] = float(np.max(log_u[n - r] - r * log_rho - log_u[n]))
    h_values = shift_sup.copy()
    shift_sup = np.exp(shift_sup)
    shift_sup_overall = float(shift_sup.max()) if len(shift_sup) else math.nan

    trajectories: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    verdicts: dict[int, str] = {}
    for r in r_values:
        if r % p:
            continue
        ns = shift_n[shift_n >= r]
        ratios = np.exp(log_u[ns - r] - r * log_rho - log_u[ns])
        trajectories[r] = (ns, ratios)
        if len(ratios) >= 2 and abs(ratios[-1] - 1.0) <= abs(ratios[len(ratios) // 2] - 1.0):
            verdicts[r] = "consistent with -> 1"
        else:
            verdicts[r] = "not approaching 1 on this grid"

    g_values = -log_u[::2][1:]
    doubling_verdict = (
        "consistent with bounded" if _settled(doubling_ratios) else "growing on this grid"
    )
    return RatioDiagnostics(
        doubling_n=doubling_n,
        doubling_ratios=doubling_ratios,
        doubling_sup=doubling_sup,
        shift_n=shift_n,
        shift_sup=shift_sup,
        shift_sup_overall=shift_sup_overall,
        trajectories=trajectories,
        g_values=g_values,
        h_values=h_values,
        rho=rho,
        eta=eta,
        doubling_verdict=doubling_verdict,
        trajectory_verdicts=verdicts,
    )


# =============================================================================
# GROWTH DIAGNOSTICS
# =============================================================================


@dataclass(frozen=True, eq=False)
class GrowthDiagnostics:
    """n^(D/2) u_{2n} over [n_min, n_max] and the u_{2n}/u_{4n} trajectory."""

    degree: float
    n: np.ndarray
    scaled: np.ndarray
    c1: float
    c2: float
    doubling_n: np.ndarray
    doubling_ratios: np.ndarray
    doubling_settled: bool


def growth_diagnostics(
    u: ReturnSequence, degree: float, n_min: int = 20, n_max: int = 200
) -> GrowthDiagnostics:
    half = u.N // 2
    n = np.arange(n_min, min(n_max, half) + 1)
    scaled = np.exp(0.5 * degree * np.log(n) + u.log_u[2 * n])
    doubling_n = np.arange(1, u.N // 4 + 1)
    doubling_ratios = np.exp(u.log_u[2 * doubling_n] - u.log_u[4 * doubling_n])
    return GrowthDiagnostics(
        degree=degree,
        n=n,
        scaled=scaled,
        c1=float(scaled.min()) if len(scaled) else math.nan,
        c2=float(scaled.max()) if len(scaled) else math.nan,
        doubling_n=doubling_n,
        doubling_ratios=doubling_ratios,
        doubling_settled=_settled(doubling_ratios),
    )
