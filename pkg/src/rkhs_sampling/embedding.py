"""
The integral operator L_{P,K} lambda = int lambda(x) K(., x) dP(x) and the
kernel K_P of its range.

For the two closed-form settings the operator is diagonal:

* Fourier kernel, uniform P on [-pi, pi]: mode j is multiplied by mu_j.
* Szego kernel, uniform P on the disk: the weight
  (n+1)(n+2)(1-|z|^2) z^n is mapped to z^n.

Everything else goes through the Monte Carlo form
(1/n) sum_i lambda(x_i) K(., x_i) with x_i drawn from P.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elements import BasisElement, KernelCombination, RkhsElement, residual_norm_sq
from .kernels import DomainError, FourierSeriesKernel, Kernel, SzegoKernel, poisson_kernel
from .measures import (
    FourierCoeffs,
    HardyWeighted,
    LambdaSpec,
    Measure,
    UniformDisk,
    UniformInterval,
)

__all__ = ["EmbeddingContext", "hardy_kp_series"]


def hardy_kp_series(w, terms: int):
    """sum_{n < terms} w^n / ((n+1)(n+2))."""
    n = np.arange(terms)
    return np.power.outer(np.asarray(w, dtype=complex), n) @ (1.0 / ((n + 1) * (n + 2)))


def _hardy_kp(w):
    # sum_n w^n/((n+1)(n+2)) = (w + (w-1) * (-log(1-w))) / w^2 for w != 0
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    small = np.abs(w) < 0.25
    out[small] = hardy_kp_series(w[small], 40)
    wb = w[~small]
    out[~small] = (wb - (wb - 1) * np.log1p(-wb)) / wb**2
    return out


@dataclass(frozen=True)
class EmbeddingContext:
    """The pair (P, K) that defines L_{P,K}, P_K, H_P and K_P."""

    kernel: Kernel
    measure: Measure
    truncation_M: int | None = None

    def __post_init__(self):
        if self.kernel.domain is not self.measure.domain:
            raise DomainError("kernel and measure live on different domains")
        if self.truncation_M is None:
            object.__setattr__(self, "truncation_M", getattr(self.kernel, "M", None))

    @property
    def family(self) -> str | None:
        if isinstance(self.kernel, FourierSeriesKernel) and isinstance(self.measure, UniformInterval):
            return "fourier"
        if isinstance(self.kernel, SzegoKernel) and isinstance(self.measure, UniformDisk):
            return "hardy"
        return None

    def _require(self, family):
        if self.family != family:
            raise DomainError(f"operation needs the {family} setting, got {self.kernel!r} with {self.measure!r}")

    def apply_L(self, lam: LambdaSpec) -> BasisElement:
        """L_{P,K} lambda in coefficient form (closed-form families only)."""
        K = self.kernel
        if isinstance(lam, FourierCoeffs):
            self._require("fourier")
            return BasisElement(K, {j: c * K.coefficient(j) for j, c in lam.coeffs.items()})
        if isinstance(lam, HardyWeighted):
            self._require("hardy")
            return BasisElement(K, lam.coeffs)
        raise TypeError("no closed form for this lambda; use apply_L_mc")

    def apply_L_mc(self, lam: LambdaSpec, n: int, seed: int, stream: int = 0) -> KernelCombination:
        """(1/n) sum_i lambda(x_i) K(., x_i) with x_1..x_n drawn from P."""
        x = self.measure.sample(n, seed, stream)
        return KernelCombination(self.kernel, x, np.asarray(lam(x), dtype=complex) / n)

    def preimage(self, f: BasisElement) -> LambdaSpec:
        """The lambda with L_{P,K} lambda = f exactly."""
        if not isinstance(f, BasisElement):
            raise TypeError("preimage needs a coefficient-form element")
        if self.family == "fourier":
            return FourierCoeffs({j: c / self.kernel.coefficient(j) for j, c in f.coeffs.items()})
        if self.family == "hardy":
            return HardyWeighted(f.coeffs)
        raise DomainError("no closed-form preimage in this setting")

    preimage_coeffs = preimage

    def kp(self, x, y):
        """Matrix [K_P(x_i, y_j)]."""
        K = self.kernel
        x = K.validate(x)
        y = K.validate(y)
        if self.family == "fourier":
            if K.ratio is not None:
                # mu_j^2 = (r^2)^|j|
                return poisson_kernel(K.ratio**2, x[:, None] - y[None, :]).astype(complex) / K.total
            ex = K.basis_functions(K.indices, x)
            ey = K.basis_functions(K.indices, y)
            return (ex * (K.weights**2 / K.total)) @ ey.conj().T
        if self.family == "hardy":
            return _hardy_kp(x[:, None] * y[None, :].conj())
        raise DomainError("K_P has no closed form in this setting")

    def kp_eval(self, x, y) -> complex:
        return complex(self.kp(x, y)[0, 0])

    def dist_to_hp_sq(self, f: RkhsElement, lam: LambdaSpec) -> float:
        """||f - L_{P,K} lambda||^2, an upper bound on dist(f, H_P)^2."""
        g = self.apply_L(lam)
        if isinstance(f, BasisElement):
            return (f - g).norm_sq()
        return residual_norm_sq(f, g)

    def image_norm_sq(self, lam: LambdaSpec) -> float:
        return self.apply_L(lam).norm_sq()
