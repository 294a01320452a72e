import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rkhs_sampling import (
    DISK,
    DomainError,
    FourierSeriesKernel,
    NormalizedKernel,
    PullbackKernel,
    RestrictedKernel,
    ScaledKernel,
    SumKernel,
    SzegoKernel,
    UniformDisk,
    UniformInterval,
    eval_kernel,
    kernel_diag,
    psd_check,
)
from rkhs_sampling.kernels import poisson_kernel


def geometric_partial_sum(r, terms=200):
    return math.fsum(r ** abs(j) for j in range(-terms, terms + 1))


def test_szego_examples(szego):
    assert eval_kernel(szego, 0, 0.3 + 0.1j) == 1
    assert eval_kernel(szego, 0.5, 0.5) == pytest.approx(4 / 3, abs=1e-15)
    assert kernel_diag(szego, 0) == 1.0


def test_fourier_geometric_diag_matches_series(fourier):
    oracle = geometric_partial_sum(0.5)
    assert oracle == pytest.approx(3.0, abs=1e-15)
    assert eval_kernel(fourier, 1.1, 1.1) == pytest.approx(oracle, abs=1e-12)
    for t in (-np.pi, -1.0, 0.0, 2.5, np.pi):
        assert kernel_diag(fourier, t) == pytest.approx(oracle, abs=1e-12)


def test_poisson_closed_form_matches_truncation(rng):
    truncated = FourierSeriesKernel.from_rule(lambda j: 0.5 ** abs(j), 64)
    closed = FourierSeriesKernel.geometric(0.5, 64)
    s = rng.uniform(-np.pi, np.pi, 50)
    t = rng.uniform(-np.pi, np.pi, 40)
    assert np.max(np.abs(truncated(s, t) - closed(s, t))) < 1e-13


def test_truncation_doubling_within_tail_bound(rng):
    s = rng.uniform(-np.pi, np.pi, 30)
    t = rng.uniform(-np.pi, np.pi, 30)
    for M in (4, 8, 16):
        K1 = FourierSeriesKernel.from_rule(lambda j: 0.5 ** abs(j), M)
        K2 = FourierSeriesKernel.from_rule(lambda j: 0.5 ** abs(j), 2 * M)
        tail = 2 * 0.5 ** (M + 1) / 0.5
        assert np.max(np.abs(K2(s, t) - K1(s, t))) < tail + 1e-14


def test_fourier_phase_convention():
    K = FourierSeriesKernel.from_rule({-1: 1.0, 0: 1.0, 1: 1.0}, 1)
    # K(s, t) = 1 + 2 cos(s - t)
    assert eval_kernel(K, 1.0, 0.25) == pytest.approx(1 + 2 * np.cos(0.75), abs=1e-14)


def test_normalized_szego_diag(szego):
    assert kernel_diag(NormalizedKernel(szego), 0.4) == pytest.approx(1.0, abs=1e-15)


def test_psd_examples(szego):
    pts = [0, 0.5, 1j / 3]
    G = np.array([[1 / (1 - a * np.conj(b)) for b in pts] for a in pts])
    assert np.linalg.eigvalsh(G)[0] > 0  # oracle
    assert psd_check(szego, pts, 1e-10)
    assert psd_check(szego, [0.9j], 1e-10)
    assert psd_check(SumKernel(szego, szego), UniformDisk().sample(20, 3), 1e-10)


def test_psd_check_detects_indefinite():
    class Bad(FourierSeriesKernel):
        def _matrix(self, x, y):
            return -np.ones((len(x), len(y)), dtype=complex) + 2 * np.eye(len(x), len(y))

    bad = Bad.geometric(0.5, 64)
    assert not psd_check(bad, [0.0, 0.1, 0.2], 1e-10)


def test_psd_check_empty_raises(szego):
    with pytest.raises(DomainError):
        psd_check(szego, [])


def test_domain_errors(szego, fourier):
    with pytest.raises(DomainError):
        eval_kernel(fourier, 0.5j, 0.1)
    with pytest.raises(DomainError):
        eval_kernel(fourier, 4.0, 0.1)
    with pytest.raises(DomainError):
        eval_kernel(szego, 1.0, 0.1)
    with pytest.raises(DomainError):
        SumKernel(szego, fourier)


def _kernels():
    S = SzegoKernel()
    F = FourierSeriesKernel.geometric(0.5)
    Fi = FourierSeriesKernel.from_rule(lambda j: 1 / (1 + j * j), 32)
    return [
        (S, UniformDisk()),
        (F, UniformInterval()),
        (Fi, UniformInterval()),
        (F + Fi, UniformInterval()),
        (NormalizedKernel(S), UniformDisk()),
        (ScaledKernel(lambda z: 1 + z**2, S), UniformDisk()),
        (PullbackKernel(lambda z: 0.5j * z, S), UniformDisk()),
        (PullbackKernel(lambda t: -t, Fi), UniformInterval()),
    ]


@pytest.mark.parametrize("K, m", _kernels())
def test_hermitian_and_schwarz(K, m):
    p = m.sample(1000, 1)
    q = m.sample(1000, 2)
    kpq = np.array([eval_kernel(K, a, b) for a, b in zip(p, q)])
    kqp = np.array([eval_kernel(K, b, a) for a, b in zip(p, q)])
    scale = np.maximum(1.0, np.abs(kpq))
    assert np.all(np.abs(kpq - kqp.conj()) < 1e-12 * scale)
    dp, dq = K.diag(p), K.diag(q)
    assert np.all(np.abs(kpq) ** 2 <= dp * dq * (1 + 1e-10))


@pytest.mark.parametrize("K, m", _kernels())
def test_psd_on_random_sets(K, m):
    for seed in range(5):
        assert psd_check(K, m.sample(25, seed), 1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 0.99), st.floats(0, 2 * np.pi)), min_size=1, max_size=12))
def test_szego_psd_property(polar):
    pts = [r * np.exp(1j * a) for r, a in polar]
    assert psd_check(SzegoKernel(), pts)


def test_sum_and_scale_algebra(szego, rng):
    A = szego
    B = NormalizedKernel(szego)
    x = UniformDisk().sample(15, 4)
    y = UniformDisk().sample(12, 5)
    assert np.array_equal(SumKernel(A, B)(x, y), A(x, y) + B(x, y))
    g = lambda z: np.exp(1j * z.real) * (2 + z)  # noqa: E731
    expected = np.conj(g(x))[:, None] * A(x, y) * g(y)[None, :]
    assert np.array_equal(ScaledKernel(g, A)(x, y), expected)


def test_normalize_zero_diagonal(szego):
    # the scale vanishes on the real axis, so the normalized diagonal is 0 there
    scaled = ScaledKernel(lambda z: z.imag, szego)
    N = NormalizedKernel(scaled)
    pts = np.array([0.3, 0.2 + 0.5j, -0.4, 0.1j])
    d = N.diag(pts)
    assert np.allclose(d, [0, 1, 0, 1], atol=1e-15)
    assert N(pts, pts)[0, 1] == 0


def test_restriction(szego):
    R = RestrictedKernel(szego, lambda z: np.abs(z) <= 0.5)
    assert eval_kernel(R, 0.2, 0.3j) == eval_kernel(szego, 0.2, 0.3j)
    with pytest.raises(DomainError):
        eval_kernel(R, 0.7, 0.1)


def test_pullback(szego, fourier):
    P = PullbackKernel(lambda z: z**2, szego)
    assert eval_kernel(P, 0.5, 0.3j) == pytest.approx(eval_kernel(szego, 0.25, -0.09), abs=1e-15)
    escape = PullbackKernel(lambda t: 2 * t, fourier)
    with pytest.raises(DomainError):
        eval_kernel(escape, 2.0, 0.0)
    mixed = PullbackKernel(lambda t: 0.9 * np.exp(1j * t), szego, source=UniformInterval.domain)
    assert eval_kernel(mixed, 0.0, 0.0) == pytest.approx(1 / (1 - 0.81))


def test_fourier_kernel_validation():
    with pytest.raises(ValueError):
        FourierSeriesKernel.from_rule(lambda j: 0.0 if j else 1.0, 3)
    with pytest.raises(ValueError):
        FourierSeriesKernel.geometric(0.99, 4)  # tail bound too large


def test_poisson_helper():
    assert poisson_kernel(0.5, 0.0) == pytest.approx(3.0)
    assert DISK.validate([0.5]).dtype == complex
