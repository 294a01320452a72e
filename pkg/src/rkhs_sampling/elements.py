"""
Members of the RKHS of a kernel.

Two representations are supported:

``BasisElement``
    finitely many coefficients in the kernel's orthogonal basis (Fourier
    modes exp(i j t) for :class:`FourierSeriesKernel`, monomials z**n for
    :class:`SzegoKernel`).  Norms are exact finite sums.
``KernelCombination``
    sum_i w_i K(., x_i) for any kernel.

Inner products between the two forms use the reproducing property, so no
quadrature is ever involved.
"""
from __future__ import annotations

import warnings
from typing import Mapping

import numpy as np

from .kernels import DomainError, FourierSeriesKernel, Kernel

__all__ = [
    "NumericalQualityWarning",
    "RkhsElement",
    "BasisElement",
    "KernelCombination",
    "evaluate",
    "inner",
    "norm_h",
    "residual_norm_sq",
    "expand_residual",
    "phi",
    "monomial",
    "section",
]

# above this many points, combination norms are accumulated in row blocks
_BLOCK = 512
CANCELLATION_TOL = 1e-8
IMAG_TOL = 1e-12


class NumericalQualityWarning(RuntimeWarning):
    """Floating-point cancellation large enough to distrust a result."""


def _check_same_kernel(a: Kernel, b: Kernel):
    if a is not b and a != b:
        raise DomainError("elements belong to different kernels")


class RkhsElement:
    kernel: Kernel

    def __call__(self, points):
        return evaluate(self, points)

    def inner(self, other) -> complex:
        return inner(self, other)

    def norm_sq(self) -> float:
        val = inner(self, self)
        if abs(val.imag) > IMAG_TOL * max(1.0, abs(val.real)):
            raise ArithmeticError("squared norm has a non-negligible imaginary part")
        return max(val.real, 0.0)

    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq()))


class BasisElement(RkhsElement):
    """sum_k c_k b_k in the basis attached to ``kernel``."""

    def __init__(self, kernel: Kernel, coeffs: Mapping[int, complex] | None = None):
        if not hasattr(kernel, "basis_functions"):
            raise DomainError(f"{type(kernel).__name__} has no coefficient basis")
        self.kernel = kernel
        coeffs = {} if coeffs is None else coeffs
        idx = np.array(sorted(int(k) for k in coeffs), dtype=int)
        if len(idx) and not kernel.basis_index_ok(idx):
            raise DomainError(f"basis index outside the truncation of {kernel!r}")
        self.indices = idx
        self.values = np.array([complex(coeffs[k]) for k in idx], dtype=complex)

    @property
    def coeffs(self) -> dict:
        return {int(k): complex(v) for k, v in zip(self.indices, self.values)}

    def _combine(self, other, sign):
        if not isinstance(other, BasisElement):
            return NotImplemented
        _check_same_kernel(self.kernel, other.kernel)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + sign * v
        return BasisElement(self.kernel, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, scalar):
        return BasisElement(self.kernel, {k: scalar * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"BasisElement({self.coeffs!r})"


class KernelCombination(RkhsElement):
    """sum_i w_i K(., x_i)."""

    def __init__(self, kernel: Kernel, points, weights):
        self.kernel = kernel
        self.points = kernel.validate(points)
        self.weights = np.atleast_1d(np.asarray(weights, dtype=complex))
        if len(self.points) != len(self.weights):
            raise ValueError("points and weights must have the same length")

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"KernelCombination(n={len(self)})"


def _basis_values(f: BasisElement, pts):
    if len(f.indices) == 0:
        return np.zeros(len(pts), dtype=complex)
    return f.kernel.basis_functions(f.indices, pts) @ f.values


def evaluate(f: RkhsElement, points):
    """f at each point, as a complex array."""
    pts = f.kernel.validate(points)
    if isinstance(f, BasisElement):
        return _basis_values(f, pts)
    if len(f) == 0:
        return np.zeros(len(pts), dtype=complex)
    return f.kernel._matrix(pts, f.points) @ f.weights


def _fourier_coefficients(c: KernelCombination):
    """Exact basis coefficients of a combination for a truncated Fourier kernel."""
    K = c.kernel
    basis = K.basis_functions(K.indices, c.points)
    return K.weights * (basis.conj().T @ c.weights)


def _combo_inner(f: KernelCombination, g: KernelCombination) -> complex:
    # <f, g> = sum_i sum_k w_i conj(v_k) K(y_k, x_i)
    if len(f) == 0 or len(g) == 0:
        return 0j
    K = f.kernel
    if isinstance(K, FourierSeriesKernel):
        # finite rank: exact up to the stored series tail
        a = _fourier_coefficients(f)
        b = a if g is f else _fourier_coefficients(g)
        return complex(np.sum(a * b.conj() / K.weights))
    total = 0j
    for start in range(0, len(g), _BLOCK):
        y = g.points[start : start + _BLOCK]
        v = g.weights[start : start + _BLOCK]
        total += v.conj() @ (K._matrix(y, f.points) @ f.weights)
    return complex(total)


def inner(f: RkhsElement, g: RkhsElement) -> complex:
    """<f, g>, linear in f and conjugate-linear in g."""
    _check_same_kernel(f.kernel, g.kernel)
    if isinstance(f, BasisElement) and isinstance(g, BasisElement):
        common, i, j = np.intersect1d(f.indices, g.indices, assume_unique=True, return_indices=True)
        w = f.kernel.basis_norm_weights(common)
        return complex(np.sum(f.values[i] * g.values[j].conj() * w))
    if isinstance(f, KernelCombination) and isinstance(g, KernelCombination):
        return _combo_inner(f, g)
    if isinstance(g, KernelCombination):
        # reproducing property: <f, K_y> = f(y)
        if len(g) == 0:
            return 0j
        return complex(g.weights.conj() @ evaluate(f, g.points))
    return inner(g, f).conjugate()


def norm_h(f: RkhsElement) -> float:
    return f.norm()


def residual_norm_sq(f: RkhsElement, approx: RkhsElement, f_norm_sq: float | None = None) -> float:
    """||f - approx||^2 expanded through inner products, clamped at zero.

    ``f_norm_sq`` may be passed to skip recomputing ||f||^2 in loops.
    Cancellation worse than 1e-8 ||f||^2 below zero emits a
    :class:`NumericalQualityWarning`.
    """
    _check_same_kernel(f.kernel, approx.kernel)
    ff = f.norm_sq() if f_norm_sq is None else f_norm_sq
    return expand_residual(ff, inner(f, approx).real, approx.norm_sq())


def expand_residual(ff: float, cross: float, aa: float) -> float:
    """ff - 2 cross + aa, clamped at zero, warning on heavy cancellation."""
    val = ff - 2.0 * cross + aa
    if val < -CANCELLATION_TOL * max(ff, aa):
        warnings.warn(
            f"residual norm cancelled to {val:.3e} (||f||^2={ff:.3e})",
            NumericalQualityWarning,
            stacklevel=3,
        )
    return max(val, 0.0)


def phi(kernel: Kernel, k: int) -> BasisElement:
    """The basis vector with index k (a Fourier mode or a monomial)."""
    return BasisElement(kernel, {k: 1.0})


monomial = phi


def section(kernel: Kernel, x) -> KernelCombination:
    """K(., x)."""
    return KernelCombination(kernel, np.atleast_1d(x), [1.0])
