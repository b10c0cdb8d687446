#!/usr/bin/env python3
"""Disorder ensembles at a protected resonance, and subradiant scaling.

Positional disorder breaks the copy symmetry that protects the regime-II
mode; the ensemble-averaged darkest decay grows with the disorder
strength.  For a plain periodic chain the darkest modes follow the
rank^2 / N^3 scaling of subwavelength arrays.
"""

import numpy as np

from nestqed import (
    DisorderSpec,
    SeedSpec,
    SweepConfig,
    run_disorder_ensemble,
    run_scaling_study,
)

phi_a = 0.2 * np.pi
bic = phi_a + np.pi
cfg = SweepConfig(
    seeds=(SeedSpec("dimer", phi_a), SeedSpec("dimer", 0.0)),
    swept=1,
    start=bic - 1e-3,
    stop=bic + 1e-3,
    points=3,
)
print("mean darkest decay at the nested-dimer BIC (d_B = d_A + pi), M = 100:")
for frac in (0.0, 0.1, 0.5, 1.0):
    spec = DisorderSpec(strength=frac * phi_a, seed=7, samples=100)
    stats = run_disorder_ensemble(cfg, spec)
    print(
        f"  r_d = {frac:>3}*d_A: mean = {stats.mean[1]:.3e} gamma "
        f"(stderr {stats.stderr[1]:.1e}, max {stats.maximum[1]:.1e})"
    )
print("small disorder leaves the resonance pronounced; r_d ~ d_A lifts it")

print("\nsubradiant scaling of a plain chain, phase spacing 0.4*pi:")
res = run_scaling_study(0.4 * np.pi, [10, 20, 40, 80], rank_size=40)
for n, d in zip(res.sizes, res.decays):
    print(f"  N = {n:>2}: darkest decay = {d:.3e} gamma")
print(f"  log-log slope vs N: {res.size_exponent:.3f}  (1/N^3 scaling)")
print(f"  slope vs mode rank at N=40: {res.rank_exponent:.3f}  (rank^2 scaling)")
