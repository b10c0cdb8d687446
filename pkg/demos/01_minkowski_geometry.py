#!/usr/bin/env python3
"""Building arrays by Minkowski sums: seeds, nesting, index map, disorder.

A nested array is the multiset of all sums of one coordinate per seed.
Two dimer seeds {0, dA} and {0, dB} give the four-atom array
{0, dA, dB, dA+dB}: two copies of the inner dimer displaced by dB.
"""

import numpy as np

from nestqed import (
    DisorderSpec,
    apply_disorder,
    dimer_seed,
    minkowski_sum,
    nest,
    periodic_seed,
)

dA, dB = 0.2 * np.pi, 2.0
inner = dimer_seed(dA)
outer = dimer_seed(dB)
print("inner dimer:", inner.positions)
print("outer dimer:", outer.positions)
print("Minkowski sum:", minkowski_sum(inner, outer).positions)

# nest() keeps the full bookkeeping: which seed elements made each atom
arr = nest([inner, outer])
print("\ncomposite atoms and their (inner, copy) origins:")
for j, multi in enumerate(arr.multi_indices):
    print(f"  atom {j} at {arr.composite.positions[j]:+.4f}  <- multi-index {tuple(multi)}")

# coincident atoms stay distinct degrees of freedom
overlap = nest([dimer_seed(0.7), dimer_seed(0.0)])
print("\nzero copy offset keeps N = 4 atoms:", overlap.composite.positions)

# deeper nesting multiplies sizes: N = 2 * 2 * 2
deep = nest([dimer_seed(dA), dimer_seed(dB), dimer_seed(0.02 * np.pi)])
print("doubly nested dimers, N =", len(deep.composite))

# reproducible positional disorder: same (seed, realization) -> same draw
spec = DisorderSpec(strength=0.1 * dA, seed=42, samples=3)
chain = periodic_seed(5, 0.4 * np.pi)
for r in range(spec.samples):
    shifted = apply_disorder(chain, spec, r)
    print(f"realization {r}: max |shift| = {np.max(np.abs(shifted.positions - chain.positions)):.4f}")
again = apply_disorder(chain, spec, 0)
print("bit-identical repeat:", np.array_equal(again.positions, apply_disorder(chain, spec, 0).positions))
