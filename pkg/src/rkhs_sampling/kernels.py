"""
Positive-semidefinite kernels on the interval [-pi, pi] and the open unit disk.

Points are plain numpy arrays: real arrays for the interval, complex arrays
for the disk.  Every kernel is callable as ``K(x, y)`` and returns the matrix
``[K(x_i, y_j)]``.

Two concrete families are provided, the Fourier series kernel

    K(s, t) = sum_j mu_j exp(i j (s - t)),   |j| <= M

and the Szego kernel ``K(z, w) = 1 / (1 - z conj(w))``, together with the
usual kernel calculus (sum, scaling, normalization, restriction, pullback).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping

import numpy as np

__all__ = [
    "DomainError",
    "Domain",
    "INTERVAL",
    "DISK",
    "DISK_RADIUS_MAX",
    "Kernel",
    "FourierSeriesKernel",
    "SzegoKernel",
    "SumKernel",
    "ScaledKernel",
    "NormalizedKernel",
    "RestrictedKernel",
    "PullbackKernel",
    "eval_kernel",
    "kernel_diag",
    "psd_check",
    "poisson_kernel",
]

# largest admissible modulus of a disk point; keeps 1/(1-|z|^2) finite
DISK_RADIUS_MAX = 1.0 - 1e-12

PSD_TOL = 1e-10
SERIES_TAIL_TOL = 1e-12


class DomainError(ValueError):
    """A point or object does not belong to the space it is used with."""


class Domain:
    name = "abstract"

    def validate(self, points):
        raise NotImplementedError

    def __repr__(self):
        return f"<domain {self.name}>"


class _Interval(Domain):
    name = "interval"

    def validate(self, points):
        pts = np.atleast_1d(np.asarray(points))
        if np.iscomplexobj(pts):
            raise DomainError("interval points must be real")
        pts = pts.astype(float, copy=False)
        if pts.ndim != 1:
            raise DomainError("points must be a 1-D sequence")
        if not np.all(np.isfinite(pts)) or np.any(np.abs(pts) > np.pi):
            raise DomainError("interval points must lie in [-pi, pi]")
        return pts


class _Disk(Domain):
    name = "disk"

    def validate(self, points):
        pts = np.atleast_1d(np.asarray(points)).astype(complex, copy=False)
        if pts.ndim != 1:
            raise DomainError("points must be a 1-D sequence")
        if not np.all(np.isfinite(pts)) or np.any(np.abs(pts) > DISK_RADIUS_MAX):
            raise DomainError(f"disk points must satisfy |z| <= {DISK_RADIUS_MAX!r}")
        return pts


INTERVAL = _Interval()
DISK = _Disk()


class Kernel:
    """Base class.  Subclasses implement ``_matrix`` on validated points."""

    domain: Domain

    def __call__(self, x, y):
        x = self.validate(x)
        y = self.validate(y)
        return self._matrix(x, y)

    def validate(self, points):
        return self.domain.validate(points)

    def diag(self, x):
        """K(x_i, x_i) as a real array, clamped at zero."""
        x = self.validate(x)
        d = self._diag(x)
        return _real_diag(d)

    def _diag(self, x):
        return np.array([self._matrix(x[i : i + 1], x[i : i + 1])[0, 0] for i in range(len(x))])

    def _matrix(self, x, y):
        raise NotImplementedError

    def __add__(self, other):
        if not isinstance(other, Kernel):
            return NotImplemented
        return SumKernel(self, other)


def _real_diag(d, atol=1e-12):
    d = np.asarray(d)
    if np.iscomplexobj(d):
        scale = np.maximum(1.0, np.abs(d.real))
        if np.any(np.abs(d.imag) > atol * scale):
            raise ArithmeticError("kernel diagonal has a non-negligible imaginary part")
        d = d.real
    if np.any(d < -atol * np.maximum(1.0, np.abs(d))):
        raise ArithmeticError("kernel diagonal is negative")
    return np.maximum(d, 0.0)


def poisson_kernel(r, theta):
    """sum_{j in Z} r^|j| exp(i j theta) = (1 - r^2) / (1 - 2 r cos(theta) + r^2)."""
    return (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(theta) + r * r)


@dataclass(frozen=True)
class FourierSeriesKernel(Kernel):
    """Translation-invariant kernel on [-pi, pi] with positive Fourier weights.

    ``mu`` holds the weights mu_{-M}, ..., mu_M.  Use :meth:`from_rule` or
    :meth:`geometric` rather than building the tuple by hand.

    When ``ratio`` is set the weights are ``ratio**|j|`` and pointwise
    evaluation uses the closed Poisson form of the untruncated series; the
    coefficient-space operations always use the truncated weights.
    """

    mu: tuple
    ratio: float | None = None
    tail_bound: float | None = None
    domain: Domain = field(default=INTERVAL, init=False, repr=False, compare=False)

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        if mu.ndim != 1 or len(mu) % 2 != 1:
            raise ValueError("mu must have odd length 2M+1")
        if np.any(~np.isfinite(mu)) or np.any(mu <= 0):
            raise ValueError("Fourier weights must be finite and positive")
        if self.tail_bound is not None and not self.tail_bound < SERIES_TAIL_TOL:
            raise ValueError(f"series tail bound {self.tail_bound!r} exceeds {SERIES_TAIL_TOL!r}")

    @classmethod
    def from_rule(cls, rule: Callable[[int], float] | Mapping[int, float], M: int = 64, tail_bound=None):
        if M < 0:
            raise ValueError("truncation M must be nonnegative")
        get = rule.__getitem__ if isinstance(rule, Mapping) else rule
        mu = tuple(float(get(j)) for j in range(-M, M + 1))
        return cls(mu, tail_bound=tail_bound)

    @classmethod
    def geometric(cls, ratio: float = 0.5, M: int = 64):
        """Weights mu_j = ratio**|j|, i.e. a Poisson kernel."""
        if not 0 < ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        mu = tuple(ratio ** abs(j) for j in range(-M, M + 1))
        tail = 2 * ratio ** (M + 1) / (1 - ratio)
        return cls(mu, ratio=float(ratio), tail_bound=tail)

    @property
    def M(self) -> int:
        return (len(self.mu) - 1) // 2

    @cached_property
    def indices(self):
        return np.arange(-self.M, self.M + 1)

    @cached_property
    def weights(self):
        return np.asarray(self.mu, dtype=float)

    @property
    def total(self) -> float:
        """mu = sum_j mu_j, which is also K(t, t)."""
        if self.ratio is not None:
            return (1 + self.ratio) / (1 - self.ratio)
        return float(np.sum(self.weights))

    def coefficient(self, j: int) -> float:
        if abs(j) > self.M:
            raise DomainError(f"frequency {j} outside truncation M={self.M}")
        return float(self.weights[j + self.M])

    # basis interface used by rkhs elements
    def basis_index_ok(self, idx):
        idx = np.asarray(idx)
        return np.all(np.abs(idx) <= self.M)

    def basis_functions(self, idx, x):
        """Matrix [phi_j(x_i)] with phi_j(t) = exp(i j t)."""
        idx = np.asarray(idx)
        if len(idx) == len(self.indices) and np.array_equal(idx, self.indices):
            return self._full_basis(x)
        return np.exp(1j * np.outer(x, idx))

    def _full_basis(self, x):
        # powers of exp(i t) by repeated multiplication, conjugated for j < 0
        M = self.M
        out = np.empty((len(x), 2 * M + 1), dtype=complex)
        out[:, M] = 1.0
        if M:
            step = np.exp(1j * np.asarray(x))
            pos = np.cumprod(np.broadcast_to(step[:, None], (len(x), M)), axis=1)
            out[:, M + 1 :] = pos
            out[:, :M] = pos[:, ::-1].conj()
        return out

    def basis_norm_weights(self, idx):
        return 1.0 / self.weights[np.asarray(idx) + self.M]

    def _matrix(self, x, y):
        if self.ratio is not None:
            r = self.ratio
            # cos(s - t) expanded so the matrix costs two outer products
            c = np.outer(np.cos(x), np.cos(y)) + np.outer(np.sin(x), np.sin(y))
            return ((1.0 - r * r) / (1.0 - 2.0 * r * c + r * r)).astype(complex)
        ex = self.basis_functions(self.indices, x)
        ey = self.basis_functions(self.indices, y)
        return (ex * self.weights) @ ey.conj().T

    def _diag(self, x):
        return np.full(len(x), self.total)


@dataclass(frozen=True)
class SzegoKernel(Kernel):
    """Reproducing kernel of the Hardy space, 1 / (1 - z conj(w)).

    ``truncation`` bounds the polynomial degree used by coefficient-form
    elements; the kernel itself is always evaluated in closed form.
    """

    truncation: int = 128
    domain: Domain = field(default=DISK, init=False, repr=False, compare=False)

    @property
    def M(self) -> int:
        return self.truncation

    def basis_index_ok(self, idx):
        idx = np.asarray(idx)
        return np.all((idx >= 0) & (idx <= self.truncation))

    def basis_functions(self, idx, z):
        return np.power.outer(z, np.asarray(idx))

    def basis_norm_weights(self, idx):
        return np.ones(len(np.atleast_1d(idx)))

    def _matrix(self, x, y):
        return 1.0 / (1.0 - x[:, None] * y[None, :].conj())

    def _diag(self, x):
        return 1.0 / (1.0 - np.abs(x) ** 2)


def _same_domain(a: Kernel, b: Kernel):
    if a.domain is not b.domain:
        raise DomainError(f"kernels live on different domains: {a.domain} vs {b.domain}")


@dataclass(frozen=True)
class SumKernel(Kernel):
    left: Kernel
    right: Kernel

    def __post_init__(self):
        _same_domain(self.left, self.right)

    @property
    def domain(self):
        return self.left.domain

    def _matrix(self, x, y):
        return self.left._matrix(x, y) + self.right._matrix(x, y)

    def _diag(self, x):
        return self.left._diag(x) + self.right._diag(x)


@dataclass(frozen=True)
class ScaledKernel(Kernel):
    """conj(g(p)) K(p, q) g(q) for a vectorized scale function g."""

    scale_fn: Callable
    inner: Kernel

    @property
    def domain(self):
        return self.inner.domain

    def _matrix(self, x, y):
        gx = np.asarray(self.scale_fn(x), dtype=complex)
        gy = np.asarray(self.scale_fn(y), dtype=complex)
        return gx.conj()[:, None] * self.inner._matrix(x, y) * gy[None, :]

    def _diag(self, x):
        g = np.asarray(self.scale_fn(x), dtype=complex)
        return np.abs(g) ** 2 * self.inner._diag(x)


@dataclass(frozen=True)
class NormalizedKernel(Kernel):
    """K(p, q) / sqrt(K(p, p) K(q, q)); zero where either diagonal vanishes."""

    inner: Kernel

    @property
    def domain(self):
        return self.inner.domain

    def _scale(self, x):
        d = _real_diag(self.inner._diag(x))
        out = np.zeros_like(d)
        pos = d > 0
        out[pos] = 1.0 / np.sqrt(d[pos])
        return out

    def _matrix(self, x, y):
        return self._scale(x)[:, None] * self.inner._matrix(x, y) * self._scale(y)[None, :]

    def _diag(self, x):
        return (_real_diag(self.inner._diag(x)) > 0).astype(float)


@dataclass(frozen=True)
class RestrictedKernel(Kernel):
    """The inner kernel on the subset where ``admissible`` holds."""

    inner: Kernel
    admissible: Callable

    @property
    def domain(self):
        return self.inner.domain

    def validate(self, points):
        pts = self.inner.validate(points)
        ok = np.asarray(self.admissible(pts), dtype=bool)
        if not np.all(ok):
            raise DomainError("point outside the restricted set")
        return pts

    def _matrix(self, x, y):
        return self.inner._matrix(x, y)

    def _diag(self, x):
        return self.inner._diag(x)


@dataclass(frozen=True)
class PullbackKernel(Kernel):
    """K(phi(p), phi(q)) for a vectorized map phi into the inner kernel's domain."""

    map_fn: Callable
    inner: Kernel
    source: Domain | None = None

    @property
    def domain(self):
        return self.source if self.source is not None else self.inner.domain

    def _mapped(self, x):
        return self.inner.validate(self.map_fn(x))

    def _matrix(self, x, y):
        return self.inner._matrix(self._mapped(x), self._mapped(y))

    def _diag(self, x):
        return self.inner._diag(self._mapped(x))


def eval_kernel(K: Kernel, p, q) -> complex:
    """K(p, q) for two single points."""
    p = K.validate(p)
    q = K.validate(q)
    if len(p) != 1 or len(q) != 1:
        raise DomainError("eval_kernel takes single points")
    return complex(K._matrix(p, q)[0, 0])


def kernel_diag(K: Kernel, p) -> float:
    d = K.diag(p)
    if len(d) != 1:
        raise DomainError("kernel_diag takes a single point")
    return float(d[0])


def psd_check(K: Kernel, points, tol: float = PSD_TOL) -> bool:
    """True iff the smallest Gram eigenvalue is >= -tol * trace."""
    pts = K.validate(points)
    if len(pts) == 0:
        raise DomainError("psd_check needs at least one point")
    G = K._matrix(pts, pts)
    G = 0.5 * (G + G.conj().T)
    trace = float(np.trace(G).real)
    return bool(np.linalg.eigvalsh(G)[0] >= -tol * max(trace, 0.0))
