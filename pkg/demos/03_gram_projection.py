"""
Projection onto kernel sections
===============================

The best approximation of f from span{K(., x_i)} interpolates f at the
nodes.  Its weights come from a pivoted Cholesky factorization of the
Gram matrix, which also discards sections that are numerically dependent.
"""
import numpy as np

from rkhs_sampling import (
    SzegoKernel,
    UniformDisk,
    evaluate,
    factorize,
    gram,
    monomial,
    monotone_error_curve,
    projection_error_sq,
    projection_weights,
)

K = SzegoKernel()
f = monomial(K, 1)

# %%
# Two points worked by hand: G = [[1, 1], [1, 4/3]] and f(x) = (0, 1/2).
pts = [0, 0.5]
G = gram(K, pts)
F = factorize(G)
v = evaluate(f, pts)
print(G.real)
print("weights", projection_weights(F, v).real)
print("error^2", projection_error_sq(f, F, v))

# %%
# Nearly coincident points: only one section survives the drop tolerance.
cluster = 0.3 + 0.2j + 1e-9 * np.arange(8)
print("retained pivots:", factorize(gram(K, cluster)).rank, "of", len(cluster))

# %%
# Adding points never increases the error.
x = UniformDisk().sample(60, seed=3)
curve = monotone_error_curve(f, x)
for N in (1, 5, 10, 20, 40, 60):
    print(f"N={N:3d}  error^2 {curve[N - 1]:.3e}")
