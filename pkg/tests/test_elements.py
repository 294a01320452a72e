import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rkhs_sampling import (
    BasisElement,
    DomainError,
    FourierSeriesKernel,
    KernelCombination,
    NumericalQualityWarning,
    SzegoKernel,
    evaluate,
    inner,
    monomial,
    norm_h,
    phi,
    residual_norm_sq,
    section,
)
from rkhs_sampling.elements import expand_residual


def szego_coeffs(points, weights, terms=128):
    # K(z, x) = sum_n conj(x)^n z^n, so sum_i w_i K(., x_i) has coefficients sum_i w_i conj(x_i)^n
    points = np.asarray(points, dtype=complex)
    n = np.arange(terms + 1)
    c = np.power.outer(points.conj(), n).T @ np.asarray(weights, dtype=complex)
    return dict(enumerate(c))


def small_disk_points(rng, n, radius=0.5):
    return radius * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def test_phi_evaluation(fourier):
    assert evaluate(phi(fourier, 1), [np.pi])[0] == pytest.approx(-1, abs=1e-15)
    assert evaluate(phi(fourier, 0), [0.7])[0] == 1


def test_monomial_evaluation(szego):
    assert evaluate(monomial(szego, 1), [0.5j])[0] == 0.5j
    assert evaluate(monomial(szego, 3), [0.5])[0] == pytest.approx(0.125)


def test_szego_norms(szego):
    assert monomial(szego, 1).norm_sq() == 1
    assert section(szego, 0.5).norm_sq() == pytest.approx(4 / 3, abs=1e-15)
    assert norm_h(section(szego, 0.0)) == 1.0


def test_fourier_norms(fourier):
    # ||phi_k||^2 = 1/mu_k
    assert phi(fourier, 0).norm_sq() == 1
    assert phi(fourier, 3).norm_sq() == pytest.approx(8.0)
    assert section(fourier, 1.3).norm_sq() == pytest.approx(3.0, abs=1e-12)


def test_reproducing_property(fourier, szego, rng):
    f = BasisElement(fourier, {-2: 1 - 1j, 0: 0.5, 5: 2j})
    for t in rng.uniform(-np.pi, np.pi, 5):
        assert inner(f, section(fourier, t)) == pytest.approx(evaluate(f, [t])[0], abs=1e-12)
    g = BasisElement(szego, {0: 1, 2: -0.5j, 7: 0.25})
    for z in small_disk_points(rng, 5, 0.9):
        assert inner(g, section(szego, z)) == pytest.approx(evaluate(g, [z])[0], abs=1e-12)
        assert inner(section(szego, z), g) == pytest.approx(np.conj(evaluate(g, [z])[0]), abs=1e-12)


def test_section_inner_is_kernel(szego):
    x, y = 0.3 + 0.2j, -0.1 + 0.6j
    assert inner(section(szego, x), section(szego, y)) == pytest.approx(1 / (1 - y * np.conj(x)), abs=1e-15)


def test_combination_against_coefficient_oracle(szego, rng):
    p, q = small_disk_points(rng, 9), small_disk_points(rng, 6)
    w = rng.normal(size=9) + 1j * rng.normal(size=9)
    v = rng.normal(size=6) + 1j * rng.normal(size=6)
    f, g = KernelCombination(szego, p, w), KernelCombination(szego, q, v)
    fb, gb = BasisElement(szego, szego_coeffs(p, w)), BasisElement(szego, szego_coeffs(q, v))
    assert inner(f, g) == pytest.approx(inner(fb, gb), rel=1e-12)
    assert residual_norm_sq(f, g) == pytest.approx((fb - gb).norm_sq(), rel=1e-10)
    z = small_disk_points(rng, 4, 0.95)
    assert np.allclose(evaluate(f, z), evaluate(fb, z), atol=1e-12)


def test_fourier_combination_inner(rng):
    K = FourierSeriesKernel.from_rule(lambda j: 1 / (1 + j * j), 16)
    p, q = rng.uniform(-np.pi, np.pi, 7), rng.uniform(-np.pi, np.pi, 5)
    w, v = rng.normal(size=7) + 0j, rng.normal(size=5) * 1j
    direct = sum(w[i] * np.conj(v[k]) * K(q[k : k + 1], p[i : i + 1])[0, 0] for i in range(7) for k in range(5))
    assert inner(KernelCombination(K, p, w), KernelCombination(K, q, v)) == pytest.approx(direct, rel=1e-12)


def test_residual_of_projection_example(szego):
    # best approximation of z from K(., 0), K(., 1/2)
    f = monomial(szego, 1)
    approx = KernelCombination(szego, [0, 0.5], [-1.5, 1.5])
    assert residual_norm_sq(f, approx) == pytest.approx(0.25, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=3, max_size=3),
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
)
def test_sesquilinear_and_schwarz(coef, a):
    K = SzegoKernel()
    f = BasisElement(K, {0: coef[0], 1: coef[1]})
    g = KernelCombination(K, [0.2, -0.4j], [coef[2], 1.0])
    h = BasisElement(K, {1: 1.0, 4: coef[2]})
    tol = 1e-9 * (1 + abs(a)) * (1 + sum(abs(c) for c in coef)) ** 2
    assert abs(inner(a * f, g) - a * inner(f, g)) < tol
    assert abs(inner(g, a * f) - np.conj(a) * inner(g, f)) < tol
    assert abs(inner(f + h, g) - inner(f, g) - inner(h, g)) < tol
    assert abs(inner(f, g) - np.conj(inner(g, f))) < tol
    assert abs(inner(f, g)) <= f.norm() * g.norm() * (1 + 1e-12) + 1e-12


def test_basis_algebra(szego):
    a = BasisElement(szego, {0: 1, 2: 3})
    b = BasisElement(szego, {2: 1, 5: 1j})
    assert (a + b).coeffs == {0: 1, 2: 4, 5: 1j}
    assert (a - a).norm_sq() == 0
    assert (2 * a).coeffs == {0: 2, 2: 6}


def test_mixed_kernels_rejected(szego, fourier):
    with pytest.raises(DomainError):
        inner(monomial(szego, 0), phi(fourier, 0))
    with pytest.raises(DomainError):
        phi(fourier, 65)


def test_empty_combination(szego):
    e = KernelCombination(szego, [], [])
    assert e.norm_sq() == 0
    assert residual_norm_sq(monomial(szego, 2), e) == 1
    assert evaluate(e, [0.1]).tolist() == [0]


def test_cancellation_warning():
    with pytest.warns(NumericalQualityWarning):
        assert expand_residual(1.0, 1.0, 0.99) == 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert expand_residual(1.0, 1.0, 1.0 - 1e-12) == 0.0


def test_combination_shape_mismatch(szego):
    with pytest.raises(ValueError):
        KernelCombination(szego, [0.1, 0.2], [1.0])
