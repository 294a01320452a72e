"""
Sampling measures, the weighted measure P_K, and the weight functions lambda.

Random draws come from a counter-based Philox generator keyed by
``(seed, stream)``, so every stream is reproducible on its own and streams
can be drawn in any order or in parallel.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .kernels import DISK, DISK_RADIUS_MAX, INTERVAL, DomainError, FourierSeriesKernel, Kernel, SzegoKernel

__all__ = [
    "Measure",
    "UniformInterval",
    "UniformDisk",
    "generator",
    "sample",
    "pk_density",
    "LambdaSpec",
    "FourierCoeffs",
    "HardyWeighted",
    "Opaque",
    "l2pk_norm_sq",
    "l2pk_norm_sq_mc",
]

_SEED_MAX = 2**64


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    """A Philox generator for one ``(seed, stream)`` pair."""
    seed = int(seed)
    stream = int(stream)
    if not 0 <= seed < _SEED_MAX:
        raise ValueError("seed must be an unsigned 64-bit integer")
    if stream < 0:
        raise ValueError("stream index must be nonnegative")
    ss = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(ss))


class Measure:
    domain = None

    def sample(self, n: int, seed: int, stream: int = 0):
        if n < 1:
            raise DomainError("sample size must be at least 1")
        return self._draw(generator(seed, stream), int(n))

    def _draw(self, rng, n):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self))

    def __repr__(self):
        return f"{type(self).__name__}()"


class UniformInterval(Measure):
    """Normalized Lebesgue measure on [-pi, pi]."""

    domain = INTERVAL

    def _draw(self, rng, n):
        return -np.pi + 2 * np.pi * rng.random(n)


class UniformDisk(Measure):
    """Normalized area measure on the open unit disk (inverse-CDF radius)."""

    domain = DISK

    def _draw(self, rng, n):
        u = rng.random((n, 2))
        theta = 2 * np.pi * u[:, 0]
        r = np.minimum(np.sqrt(u[:, 1]), DISK_RADIUS_MAX)
        return r * np.exp(1j * theta)


def sample(measure: Measure, n: int, seed: int, stream: int = 0):
    return measure.sample(n, seed, stream)


def _check_pair(measure: Measure, kernel: Kernel):
    if measure.domain is not kernel.domain:
        raise DomainError(f"{measure!r} and {type(kernel).__name__} live on different domains")


def pk_density(measure: Measure, kernel: Kernel, points):
    """Density of P_K with respect to P, which is K(x, x)."""
    _check_pair(measure, kernel)
    return kernel.diag(points)


class LambdaSpec:
    """A weight function lambda in L^2(P_K)."""

    def __call__(self, points):
        raise NotImplementedError


def _as_coeffs(coeffs):
    return {int(k): complex(v) for k, v in (coeffs or {}).items()}


@dataclass(frozen=True, eq=False)
class FourierCoeffs(LambdaSpec):
    """lambda(t) = sum_j lambda_j exp(i j t), finitely supported."""

    coeffs: Mapping[int, complex]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    def __call__(self, points):
        t = INTERVAL.validate(points)
        if not self.coeffs:
            return np.zeros(len(t), dtype=complex)
        idx = np.array(list(self.coeffs))
        vals = np.array(list(self.coeffs.values()))
        return np.exp(1j * np.outer(t, idx)) @ vals


@dataclass(frozen=True, eq=False)
class HardyWeighted(LambdaSpec):
    """lambda(z) = sum_n (n+1)(n+2)(1-|z|^2) f_n z^n, finitely supported.

    This is the family whose image under L_{P,K} is exactly sum_n f_n z^n.
    """

    coeffs: Mapping[int, complex]

    def __post_init__(self):
        c = _as_coeffs(self.coeffs)
        if any(n < 0 for n in c):
            raise DomainError("Hardy degrees must be nonnegative")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, points):
        z = DISK.validate(points)
        if not self.coeffs:
            return np.zeros(len(z), dtype=complex)
        n = np.array(list(self.coeffs))
        vals = np.array(list(self.coeffs.values())) * (n + 1) * (n + 2)
        return (1 - np.abs(z) ** 2) * (np.power.outer(z, n) @ vals)


@dataclass(frozen=True, eq=False)
class Opaque(LambdaSpec):
    """An arbitrary vectorized weight function.

    Its L^2(P_K) norm is either supplied (``norm_sq``) or estimated by Monte
    Carlo when ``monte_carlo`` is set.
    """

    fn: Callable
    norm_sq: float | None = None
    monte_carlo: bool = False
    mc_samples: int = 100_000
    seed: int = 0

    def __call__(self, points):
        return np.asarray(self.fn(points), dtype=complex)


def l2pk_norm_sq_mc(lam: LambdaSpec, measure: Measure, kernel: Kernel, n: int = 100_000, seed: int = 0, stream: int = 0):
    """Monte Carlo estimate of int |lambda|^2 K(x,x) dP and its standard error."""
    _check_pair(measure, kernel)
    x = measure.sample(n, seed, stream)
    vals = np.abs(lam(x)) ** 2 * kernel.diag(x)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n)) if n > 1 else float("nan")


def l2pk_norm_sq(lam: LambdaSpec, measure: Measure, kernel: Kernel) -> float:
    """||lambda||^2 in L^2(P_K), in closed form for the two coefficient families.

    For Fourier weights the measure P_K is mu * P, so the norm is
    mu * sum_j |lambda_j|^2 with mu = sum_j mu_j.
    """
    _check_pair(measure, kernel)
    if isinstance(lam, FourierCoeffs):
        if not isinstance(kernel, FourierSeriesKernel) or not isinstance(measure, UniformInterval):
            raise DomainError("FourierCoeffs needs a Fourier kernel and the uniform interval measure")
        return kernel.total * float(sum(abs(v) ** 2 for v in lam.coeffs.values()))
    if isinstance(lam, HardyWeighted):
        if not isinstance(kernel, SzegoKernel) or not isinstance(measure, UniformDisk):
            raise DomainError("HardyWeighted needs the Szego kernel and the uniform disk measure")
        return float(sum((n + 1) * (n + 2) * abs(v) ** 2 for n, v in lam.coeffs.items()))
    if isinstance(lam, Opaque):
        if lam.norm_sq is not None:
            return float(lam.norm_sq)
        if lam.monte_carlo:
            return l2pk_norm_sq_mc(lam, measure, kernel, lam.mc_samples, lam.seed)[0]
        raise DomainError("opaque lambda needs norm_sq or monte_carlo=True")
    raise TypeError(f"unsupported lambda {lam!r}")
