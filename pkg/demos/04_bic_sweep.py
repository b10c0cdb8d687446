#!/usr/bin/env python3
"""Sweep of the copy separation: overlap dark states and the regime-II BIC.

Regime I (copies overlapping): perfectly dark states appear whenever atom
positions coincide, at d_B = 0 and d_B = d_A for the nested dimer.
Regime II (copies separated): an interference-protected bound-state-like
mode recurs with period pi in the copy separation phase, at
d_B = d_A + k*pi.
"""

import numpy as np

from nestqed import SeedSpec, SweepConfig, find_resonances, resonance_spacings, run_sweep

phi_a = 0.2 * np.pi
cfg = SweepConfig(
    seeds=(SeedSpec("dimer", phi_a), SeedSpec("dimer", 0.0)),
    swept=1,
    start=0.0,
    stop=4.0 * np.pi,
    points=1200,
)
result = run_sweep(cfg)
print(f"sweep of d_B over [0, 4*pi] with {cfg.points} points")
print(f"copies overlap for d_B < {result.regime_boundary:.4f} (= d_A)")

resonances = find_resonances(result, refine_tol=1e-8)
print("\nrefined darkest-decay minima:")
for r in resonances:
    regime = "I " if r.location < result.regime_boundary else "II"
    print(
        f"  regime {regime}  d_B = {r.location / np.pi:8.5f}*pi   "
        f"decay = {r.decay:.2e} gamma"
    )

regime2 = [r for r in resonances if r.location > result.regime_boundary + 0.1]
print("\nspacings between regime-II minima (protected-mode period):")
print(" ", np.round(resonance_spacings(regime2) / np.pi, 6), "* pi")

mid = len(result.values) // 2
print(f"\ntypical regime-II darkest decay (no resonance): "
      f"{result.darkest_decay[mid]:.3f} gamma")
print("the resonant dips sit 10+ orders of magnitude below that floor")
