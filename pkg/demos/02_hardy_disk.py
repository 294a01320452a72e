"""
The Hardy space on the disk
===========================

The Szego kernel 1/(1 - z conj(w)) reproduces power series with square
summable coefficients.  Sampling z uniformly on the disk, the weight
lambda(z) = 6 (1 - |z|^2) z is mapped exactly onto f(z) = z, and the
Monte Carlo approximants converge at rate 5/n in squared norm.
"""
import numpy as np

from rkhs_sampling import (
    EmbeddingContext,
    SzegoKernel,
    UniformDisk,
    evaluate,
    l2pk_norm_sq,
    monomial,
    residual_norm_sq,
)

K = SzegoKernel()
ctx = EmbeddingContext(K, UniformDisk())
f = monomial(K, 1)
lam = ctx.preimage(f)

z = np.array([0.5, 0.5j, -0.25 + 0.25j])
print("lambda(z) =", np.round(lam(z), 4))
print("||lambda||^2 in L2(P_K) =", l2pk_norm_sq(lam, ctx.measure, K))
print("||L lambda||^2 =", ctx.image_norm_sq(lam))

# %%
# One Monte Carlo approximant, evaluated next to the target.
g = ctx.apply_L_mc(lam, 2000, seed=7)
print("f(z)   =", np.round(evaluate(f, z), 3))
print("g_n(z) =", np.round(evaluate(g, z), 3))

# %%
# Mean squared error over repeated draws.
for n in (10, 100, 1000):
    errs = [residual_norm_sq(f, ctx.apply_L_mc(lam, n, seed=7, stream=t)) for t in range(300)]
    print(f"n={n:5d}  mean error^2 {np.mean(errs):.5f}   5/n = {5 / n:.5f}")

# %%
# The kernel of the range of L has a closed form; at the origin it is 1/2.
print("K_P(0, 0) =", ctx.kp_eval(0, 0))
