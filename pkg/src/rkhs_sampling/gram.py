"""
Orthogonal projection of an RKHS element onto span{K(., x_i)}.

The projection weights solve ``sum_i w_i K(x_j, x_i) = f(x_j)``.  Sections
that are (numerically) linearly dependent are handled by a pivoted Cholesky
factorization that keeps only a basis subset of the points; the projection
onto the retained span equals the projection onto the full span up to the
drop tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack, solve_triangular

from .elements import KernelCombination, RkhsElement, evaluate
from .kernels import DomainError, Kernel

__all__ = [
    "NumericalError",
    "GramFactor",
    "gram",
    "factorize",
    "projection_weights",
    "projection_error_sq",
    "project",
    "monotone_error_curve",
    "IncrementalProjector",
]

DROP_TOL = 1e-12
HERMITIAN_TOL = 1e-10
# ||f||^2 - ||pi f||^2 cannot resolve differences below a few ulps of ||f||^2
RESOLUTION = 4 * np.finfo(float).eps


class NumericalError(ArithmeticError):
    """Input matrix is not Hermitian positive semidefinite within tolerance."""


def gram(K: Kernel, points):
    """Gram matrix with entry (i, j) equal to K(x_j, x_i)."""
    pts = K.validate(points)
    if len(pts) == 0:
        raise DomainError("gram needs at least one point")
    G = K._matrix(pts, pts).T
    # exact Hermitian symmetry; rounding in K(x, y) vs K(y, x) is not symmetric
    return 0.5 * (G + G.conj().T)


@dataclass(frozen=True)
class GramFactor:
    """G[p][:, p] = L L^H over the retained pivots p.

    ``factor`` is lower triangular with rows and columns ordered as
    ``retained_pivots``.
    """

    retained_pivots: np.ndarray
    factor: np.ndarray
    drop_tol: float
    original_size: int

    @property
    def rank(self) -> int:
        return len(self.retained_pivots)

    def reconstruct(self):
        """The Gram submatrix over retained pivots."""
        return self.factor @ self.factor.conj().T

    def _whiten(self, values):
        # y = conj(L)^{-1} v_p, so that ||pi f||^2 = ||y||^2
        v = np.asarray(values, dtype=complex)
        if len(v) != self.original_size:
            raise ValueError(f"expected {self.original_size} values, got {len(v)}")
        if self.rank == 0:
            return np.zeros(0, dtype=complex)
        return solve_triangular(self.factor.conj(), v[self.retained_pivots], lower=True)


def _error_from_captured(ff, captured):
    err = ff - captured
    return 0.0 if err <= RESOLUTION * ff else err


def factorize(G, drop_tol: float = DROP_TOL) -> GramFactor:
    """Diagonally pivoted Cholesky factorization of a Hermitian PSD matrix.

    Pivots are taken greedily by largest Schur-complement diagonal (LAPACK
    ``zpstrf``) and the factorization stops once every remaining diagonal is
    at most ``drop_tol * max(diag(G))``.
    """
    G = np.asarray(G, dtype=complex)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError("Gram matrix must be square")
    n = G.shape[0]
    if n == 0:
        return GramFactor(np.zeros(0, dtype=int), np.zeros((0, 0), dtype=complex), drop_tol, 0)
    diag = G.diagonal()
    scale = max(float(np.abs(diag.real).sum()), np.finfo(float).tiny)
    if np.max(np.abs(G - G.conj().T)) > HERMITIAN_TOL * scale:
        raise NumericalError("Gram matrix is not Hermitian")
    d = diag.real.copy()
    if np.any(d < -HERMITIAN_TOL * scale):
        raise NumericalError("Gram matrix has a negative diagonal entry")
    thresh = drop_tol * max(d.max(), 0.0)
    if not d.max() > 0:
        return GramFactor(np.zeros(0, dtype=int), np.zeros((0, 0), dtype=complex), drop_tol, n)
    # LAPACK stops as soon as the largest remaining Schur diagonal is <= tol
    c, piv, rank, info = lapack.zpstrf(G, tol=thresh, lower=1)
    if info < 0:
        raise NumericalError(f"zpstrf failed with info={info}")
    piv = piv[:rank].astype(int) - 1
    return GramFactor(piv, np.tril(c[:rank, :rank]), drop_tol, n)


def projection_weights(F: GramFactor, values):
    """Weights w (one per original point, zero off the retained pivots) of pi f."""
    y = F._whiten(values)
    w = np.zeros(F.original_size, dtype=complex)
    if F.rank:
        w[F.retained_pivots] = solve_triangular(F.factor.T, y, lower=False)
    return w


def projection_error_sq(f: RkhsElement, F: GramFactor, values, f_norm_sq: float | None = None) -> float:
    """||f - pi f||^2 = ||f||^2 - v^H Gamma v, clamped at zero."""
    ff = f.norm_sq() if f_norm_sq is None else f_norm_sq
    y = F._whiten(values)
    return _error_from_captured(ff, float(np.vdot(y, y).real))


def project(f: RkhsElement, points, drop_tol: float = DROP_TOL):
    """Project f onto the sections at ``points``.

    Returns the projection as a :class:`KernelCombination` and the squared
    error.
    """
    K = f.kernel
    pts = K.validate(points)
    if len(pts) == 0:
        return KernelCombination(K, pts, []), f.norm_sq()
    F = factorize(gram(K, pts), drop_tol)
    v = evaluate(f, pts)
    w = projection_weights(F, v)
    return KernelCombination(K, pts, w), projection_error_sq(f, F, v)


class IncrementalProjector:
    """Projection onto a growing prefix x_1, x_2, ... of points.

    Each new point extends the Cholesky factor of the Gram matrix by one row
    (Gram-Schmidt on the kernel sections).  Points whose section is already
    in the span, up to ``drop_tol`` relative to the largest diagonal seen so
    far, are skipped.
    """

    def __init__(self, f: RkhsElement, drop_tol: float = DROP_TOL):
        self.f = f
        self.kernel = f.kernel
        self.drop_tol = drop_tol
        self.f_norm_sq = f.norm_sq()
        self.points = self.kernel.validate([])
        self._L = np.zeros((0, 0), dtype=complex)
        self._y = np.zeros(0, dtype=complex)
        self._captured = 0.0
        self._dmax = 0.0

    @property
    def rank(self) -> int:
        return len(self._y)

    @property
    def error_sq(self) -> float:
        return _error_from_captured(self.f_norm_sq, self._captured)

    def add(self, x) -> float:
        """Append one point; return the new squared projection error."""
        K = self.kernel
        x = K.validate(x)
        if len(x) != 1:
            raise ValueError("add takes a single point")
        kxx = float(K.diag(x)[0])
        self._dmax = max(self._dmax, kxx)
        if self.rank:
            c = K._matrix(self.points, x)[:, 0]
            ell = solve_triangular(self._L, c, lower=True)
        else:
            ell = np.zeros(0, dtype=complex)
        dnew = kxx - float(np.vdot(ell, ell).real)
        if dnew > self.drop_tol * self._dmax:
            root = np.sqrt(dnew)
            v = complex(evaluate(self.f, x)[0])
            ynew = (v - np.vdot(ell, self._y)) / root
            r = self.rank
            L = np.zeros((r + 1, r + 1), dtype=complex)
            L[:r, :r] = self._L
            L[r, :r] = ell.conj()
            L[r, r] = root
            self._L = L
            self._y = np.append(self._y, ynew)
            self.points = np.append(self.points, x)
            self._captured += abs(ynew) ** 2
        return self.error_sq


def monotone_error_curve(f: RkhsElement, points, drop_tol: float = DROP_TOL):
    """Squared projection error onto the first N points, N = 1..len(points)."""
    proj = IncrementalProjector(f, drop_tol)
    pts = f.kernel.validate(points)
    return np.array([proj.add(pts[i : i + 1]) for i in range(len(pts))])
