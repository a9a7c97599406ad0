"""Closed forms for the simple walk on the (b+1)-regular tree."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from bridgewalk.kernels.generating import GeneratingSummary
from bridgewalk.kernels.sequences import FirstReturnSequence, ReturnSequence
from utils.errors import DivergenceError, InvalidModelSpecError
from utils.helpers import safe_log


@lru_cache(maxsize=32)
def _sqrt_series(count: int) -> tuple[Fraction, ...]:
    """Coefficients of (1 + y)^(1/2) up to y^(count-1)."""
    coeffs = [Fraction(1)]
    half = Fraction(1, 2)
    for k in range(1, count):
        coeffs.append(coeffs[-1] * (half - (k - 1)) / k)
    return tuple(coeffs)


@dataclass(frozen=True)
class TreeClosedForms:
    b: int
    lam: float = field(init=False)
    F: float = field(init=False)
    rho: float = field(init=False)
    F_at_rho: float = field(init=False)

    def __post_init__(self) -> None:
        if self.b < 2:
            raise InvalidModelSpecError(f"tree branching must be >= 2, got b={self.b}")
        b = self.b
        object.__setattr__(self, "lam", b / (b + 1) ** 2)
        object.__setattr__(self, "F", 1.0 / b)
        object.__setattr__(self, "rho", (b + 1) / (2.0 * math.sqrt(b)))
        object.__setattr__(self, "F_at_rho", (b + 1) / (2.0 * b))

    @property
    def lam_exact(self) -> Fraction:
        return Fraction(self.b, (self.b + 1) ** 2)

    @property
    def period(self) -> int:
        return 2

    # -- first returns ---------------------------------------------------------

    def log_f_2k(self, k: np.ndarray | int) -> np.ndarray:
        """log f_{2k} = log[(b+1)/b * binom(2k-1, k)/(2k-1) * lam^k], k >= 1."""
        k = np.asarray(k, dtype=float)
        log_binom = gammaln(2 * k) - gammaln(k + 1) - gammaln(k)
        return (
            math.log((self.b + 1) / self.b)
            + log_binom
            - np.log(2 * k - 1)
            + k * math.log(self.lam)
        )

    def f_2k(self, k: int) -> float:
        if k < 1:
            return 0.0
        return float(np.exp(self.log_f_2k(k)))

    def first_return_sequence(self, N: int) -> FirstReturnSequence:
        """f_0..f_N straight from the closed form."""
        log_f = np.full(N + 1, -np.inf)
        k = np.arange(1, N // 2 + 1)
        if len(k):
            log_f[2 * k] = self.log_f_2k(k)
        f = np.exp(log_f)
        return FirstReturnSequence(
            f=f,
            partial=np.cumsum(f),
            period=2,
            model_id=f"tree-b{self.b}",
            log_values=log_f,
        )

    # -- return probabilities --------------------------------------------------

    def u_coefficients(self, N: int) -> list[Fraction]:
        """Exact u_0..u_N from U(z) = 2b / (b - 1 + (b + 1) sqrt(1 - 4 lam z^2))."""
        b = self.b
        half = N // 2
        four_lam = -4 * self.lam_exact
        roots = _sqrt_series(half + 1)
        # denominator as a series in x = z^2
        denominator = [(b + 1) * c * four_lam**k for k, c in enumerate(roots)]
        denominator[0] += b - 1
        head = denominator[0]
        series = [Fraction(2 * b) / head]
        for k in range(1, half + 1):
            acc = sum((denominator[j] * series[k - j] for j in range(1, k + 1)), Fraction(0))
            series.append(-acc / head)
        out = [Fraction(0)] * (N + 1)
        for k, value in enumerate(series):
            out[2 * k] = value
        return out

    def return_sequence(self, N: int) -> ReturnSequence:
        u = np.array([float(c) for c in self.u_coefficients(N)])
        return ReturnSequence(u=u, log_u=safe_log(u), period=2, model_id=f"tree-b{self.b}")

    # -- generating functions --------------------------------------------------

    def _root(self, z: float) -> float:
        if z < 0:
            raise ValueError(f"z must be >= 0, got {z}")
        if z > self.rho * (1.0 + 1e-12):
            raise DivergenceError(f"z={z!r} exceeds rho={self.rho!r}")
        return math.sqrt(max(0.0, 1.0 - 4.0 * self.lam * z * z))

    def F_of_z(self, z: float) -> float:
        """F(z) = (b+1)/(2b) * (1 - sqrt(1 - 4 lam z^2))."""
        return (self.b + 1) / (2.0 * self.b) * (1.0 - self._root(z))

    def U_of_z(self, z: float) -> float:
        return 2.0 * self.b / (self.b - 1 + (self.b + 1) * self._root(z))

    def generating_summary(self) -> GeneratingSummary:
        """Exact profile: u_{2k} ~ C k^(-3/2) rho^(-2k)."""
        return GeneratingSummary(
            rho=self.rho,
            gamma=1.5,
            method="closed-form",
            window=(0, 0),
            F_at_rho=self.F_at_rho,
            F_at_rho_tail=0.0,
        )


def tree_closed_forms(b: int) -> TreeClosedForms:
    return TreeClosedForms(b)
