"""
Closed-form probability bounds for random kernel approximation.

For n points drawn i.i.d. from P and the Monte Carlo approximant
g_n = (1/n) sum_i lambda(x_i) K(., x_i), the mean squared error is exactly

    E ||f - g_n||^2 = ||f - L lambda||^2 + (||lambda||^2_{P_K} - ||L lambda||^2) / n

and Chebyshev's inequality turns it into a bound on P(||f - g_n|| >= delta).
The same bound holds for the orthogonal projection onto the sampled
sections, whose error is never larger.

All probabilities are capped at 1; reports keep the uncapped value too.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .elements import RkhsElement
from .embedding import EmbeddingContext
from .kernels import DomainError, FourierSeriesKernel
from .measures import LambdaSpec, l2pk_norm_sq

__all__ = [
    "BoundReport",
    "chebyshev_bound",
    "thmbound_rhs",
    "expected_sq_error",
    "fourier_basis_bound",
    "hardy_monomial_bound",
]


def _check_delta(delta):
    if not delta > 0:
        raise ValueError("delta must be positive")


@dataclass(frozen=True)
class BoundReport:
    term_bias: float
    term_variance: float
    n: int
    delta: float

    @property
    def uncapped(self) -> float:
        return self.term_bias + self.term_variance

    @property
    def total(self) -> float:
        u = self.uncapped
        return u if math.isnan(u) else min(1.0, u)

    def as_dict(self) -> dict:
        """Fields named as in the report columns, plus the uncapped total."""
        return {
            "n": self.n,
            "delta": self.delta,
            "bound_term_bias": self.term_bias,
            "bound_term_variance": self.term_variance,
            "bound_total": self.total,
            "bound_uncapped": self.uncapped,
        }


def chebyshev_bound(second_moment: float, delta: float) -> float:
    """P(|X| >= delta) <= E|X|^2 / delta^2, capped at 1."""
    _check_delta(delta)
    if second_moment < 0:
        raise ValueError("second moment must be nonnegative")
    return min(1.0, second_moment / delta**2)


def _bias_variance(ctx: EmbeddingContext, f: RkhsElement, lam: LambdaSpec):
    bias = ctx.dist_to_hp_sq(f, lam)
    spread = l2pk_norm_sq(lam, ctx.measure, ctx.kernel) - ctx.image_norm_sq(lam)
    if spread < -1e-12 * max(1.0, abs(spread)):
        raise ArithmeticError("||lambda||_{P_K} < ||L lambda||: operator is not nonexpansive here")
    return bias, max(spread, 0.0)


def expected_sq_error(ctx: EmbeddingContext, f: RkhsElement, lam: LambdaSpec, n: int) -> float:
    """Mean of ||f - (1/n) sum lambda(x_i) K_{x_i}||^2 over n i.i.d. draws."""
    if n < 1:
        raise ValueError("n must be at least 1")
    bias, spread = _bias_variance(ctx, f, lam)
    return bias + spread / n


def thmbound_rhs(ctx: EmbeddingContext, f: RkhsElement, lam: LambdaSpec, n: int, delta: float) -> BoundReport:
    """Bias and variance terms of the Chebyshev bound on P(||f - g_n|| >= delta)."""
    _check_delta(delta)
    if n < 1:
        raise ValueError("n must be at least 1")
    bias, spread = _bias_variance(ctx, f, lam)
    return BoundReport(bias / delta**2, spread / (n * delta**2), int(n), float(delta))


def fourier_basis_bound(mu: Mapping[int, float] | FourierSeriesKernel, k: int, N: int, delta: float) -> float:
    """Bound for approximating the mode exp(i k t): sum_{j != k} mu_j / (N delta^2 mu_k^2)."""
    _check_delta(delta)
    if isinstance(mu, FourierSeriesKernel):
        mu_k = mu.coefficient(k)
        rest = mu.total - mu_k
    else:
        if k not in mu:
            raise DomainError(f"frequency {k} is not in the support of mu")
        mu_k = mu[k]
        rest = sum(v for j, v in mu.items() if j != k)
    if not mu_k > 0:
        raise ValueError("mu_k must be positive")
    return min(1.0, rest / (N * delta**2 * mu_k**2))


def hardy_monomial_bound(degree: int, N: int, delta: float) -> float:
    """Bound for approximating z**degree in the Hardy space: (n^2 + 3n + 1) / (N delta^2)."""
    _check_delta(delta)
    if N < 1 or degree < 0:
        raise ValueError("need N >= 1 and degree >= 0")
    return min(1.0, (degree**2 + 3 * degree + 1) / (N * delta**2))
