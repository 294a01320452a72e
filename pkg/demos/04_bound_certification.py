"""
Checking the Chebyshev bound by simulation
==========================================

For each (n, delta) the bound caps the probability that the Monte Carlo
approximant misses f by at least delta.  We count how often that happens
over many independent draws and compare.  Run from the repository root.
"""
from pathlib import Path

from rkhs_sampling.config import load_config
from rkhs_sampling.harness import emit_report, run_trials

here = Path(__file__).parent
cfg = load_config(here / "configs" / "quick.toml")
result = run_trials(cfg)

print(f"{'n':>5} {'delta':>6} {'observed':>9} {'bound':>7} {'slack':>7}")
for row in result.summary:
    print(
        f"{row.n:5d} {row.delta:6.2f} {row.freq_mc_exceed:9.3f} "
        f"{row.bound_total:7.3f} {3 * row.binom_stderr:7.3f}"
    )

# %%
# The same rows as the CLI writes them.
print(emit_report(result.summary))
