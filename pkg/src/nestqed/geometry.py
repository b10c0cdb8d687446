"""Atom-array geometry: seed sets, Minkowski-sum nesting, positional disorder.

All coordinates are dimensionless phases theta = k_z * x, so theta = 2*pi
corresponds to one transition wavelength.  Inputs given in wavelength units
must be multiplied by 2*pi before they reach this module (the CLI does this
for ``units: lambda0`` configs).

Coincident atoms are physical here: a composite built from overlapping
copies keeps every atom as a distinct degree of freedom, which is why all
set operations below use multiset semantics.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PositionSet",
    "NestedArray",
    "DisorderSpec",
    "SeedSpec",
    "dimer_seed",
    "periodic_seed",
    "minkowski_sum",
    "nest",
    "apply_disorder",
    "derive_seed",
]


@dataclass(frozen=True, eq=False)
class PositionSet:
    """Ordered multiset of atom phase coordinates, sorted non-decreasing.

    Duplicates are permitted and meaningful: two coincident atoms form a
    perfectly dark pair, the mechanism behind the overlap resonances.
    """

    positions: np.ndarray

    def __init__(self, positions: Iterable[float]):
        arr = np.sort(np.asarray(list(positions), dtype=float))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("PositionSet requires a non-empty 1D coordinate list")
        if not np.all(np.isfinite(arr)):
            raise ValueError("PositionSet coordinates must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "positions", arr)

    def __len__(self) -> int:
        return int(self.positions.size)

    @property
    def span(self) -> float:
        """Extent max - min of the set."""
        return float(self.positions[-1] - self.positions[0])

    def shifted(self, offset: float) -> "PositionSet":
        return PositionSet(self.positions + offset)

    def close_to(self, other: "PositionSet", tol: float = 0.0) -> bool:
        return len(self) == len(other) and bool(
            np.all(np.abs(self.positions - other.positions) <= tol)
        )

    def __repr__(self) -> str:  # pragma: no cover
        return f"PositionSet({np.array2string(self.positions, precision=6)})"


def dimer_seed(d: float) -> PositionSet:
    """Two atoms at {0, d}; d = 0 yields a coincident pair, which is kept."""
    if not np.isfinite(d) or d < 0:
        raise ValueError(f"dimer spacing must be finite and >= 0, got {d}")
    return PositionSet([0.0, float(d)])


def periodic_seed(count: int, d: float) -> PositionSet:
    """Uniform chain {0, d, 2d, ..., (count-1)d}."""
    if count < 1:
        raise ValueError(f"periodic seed needs count >= 1, got {count}")
    if not np.isfinite(d) or d < 0:
        raise ValueError(f"periodic spacing must be finite and >= 0, got {d}")
    return PositionSet(np.arange(count) * float(d))


def minkowski_sum(a: PositionSet, b: PositionSet) -> PositionSet:
    """All pairwise sums of two position sets, as a sorted multiset.

    The result has exactly len(a) * len(b) atoms; coincident sums are
    retained as separate atoms.
    """
    sums = np.add.outer(b.positions, a.positions).ravel()
    return PositionSet(sums)


@dataclass(frozen=True, eq=False)
class NestedArray:
    """Composite array built by iterated Minkowski sums of seed sets.

    ``multi_indices[j]`` records, for the j-th atom of the sorted composite,
    which element of each seed level produced it, so
    ``composite.positions[j] == sum(seeds[i].positions[multi_indices[j, i]])``
    exactly (one floating left-fold, no extra rounding).
    """

    seeds: tuple[PositionSet, ...]
    composite: PositionSet
    multi_indices: np.ndarray  # shape (N, depth), int

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.seeds)

    @property
    def depth(self) -> int:
        return len(self.seeds)

    def flat_index(self, multi: Sequence[int]) -> int:
        """Sorted-composite index of the atom produced by a multi-index."""
        multi = tuple(int(i) for i in multi)
        if len(multi) != self.depth:
            raise ValueError(f"multi-index depth {len(multi)} != {self.depth}")
        for i, (n, size) in enumerate(zip(multi, self.sizes)):
            if not 0 <= n < size:
                raise ValueError(f"multi-index component {i} out of range: {n}")
        return int(self._sorted_of_tensor[_tensor_flat(multi, self.sizes)])

    @property
    def _sorted_of_tensor(self) -> np.ndarray:
        # inverse permutation of the stable sort used at construction
        perm = np.ravel_multi_index(
            tuple(self.multi_indices[:, i] for i in range(self.depth)),
            self.sizes,
            order="F",
        )
        inv = np.empty_like(perm)
        inv[perm] = np.arange(perm.size)
        return inv

    def tensor_positions(self) -> np.ndarray:
        """Composite coordinates in tensor order (first seed index fastest)."""
        pos = self.seeds[0].positions
        for seed in self.seeds[1:]:
            pos = np.add.outer(seed.positions, pos).ravel()
        return pos


def _tensor_flat(multi: Sequence[int], sizes: Sequence[int]) -> int:
    flat, stride = 0, 1
    for n, size in zip(multi, sizes):
        flat += n * stride
        stride *= size
    return flat


def nest(seeds: Sequence[PositionSet]) -> NestedArray:
    """Left-fold Minkowski sum of the seeds with full index bookkeeping."""
    seeds = tuple(seeds)
    if not seeds:
        raise ValueError("nest requires at least one seed")
    sizes = tuple(len(s) for s in seeds)

    pos = seeds[0].positions
    for seed in seeds[1:]:
        pos = np.add.outer(seed.positions, pos).ravel()

    # stable sort keeps coincident atoms in tensor order, so the index map
    # is deterministic even for degenerate geometries
    perm = np.argsort(pos, kind="stable")
    composite = PositionSet(pos[perm])
    multi = np.column_stack(np.unravel_index(perm, sizes, order="F")).astype(np.intp)
    multi.flags.writeable = False
    return NestedArray(seeds=seeds, composite=composite, multi_indices=multi)


@dataclass(frozen=True)
class DisorderSpec:
    """Uniform positional disorder: each atom shifts by u ~ U[-strength, +strength].

    ``seed`` and the realization counter fully determine every draw, so
    ensembles are reproducible and realizations can run in any order.
    """

    strength: float
    seed: int = 0
    samples: int = 1

    def __post_init__(self):
        if not np.isfinite(self.strength) or self.strength < 0:
            raise ValueError(f"disorder strength must be >= 0, got {self.strength}")
        if self.samples < 1:
            raise ValueError(f"sample count must be >= 1, got {self.samples}")


def derive_seed(seed: int, *indices: int) -> int:
    """Stable 64-bit subseed for (seed, *indices), identical across runs."""
    payload = ":".join(str(int(v)) for v in (seed, *indices)).encode()
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "little")


def _uniform_draws(seed: int, realization: int, count: int) -> np.ndarray:
    # Counter-based scheme: Philox keyed by (seed, realization); the atom
    # index selects the position within the keyed stream.
    key = np.array([np.uint64(seed % 2**64), np.uint64(realization)], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.uniform(-1.0, 1.0, count)


def apply_disorder(
    arr: PositionSet, spec: DisorderSpec, realization: int
) -> PositionSet:
    """Shift each atom by an independent uniform draw from [-r_d, +r_d].

    A pure function of (spec.seed, realization, atom index): repeated calls
    give bit-identical output.  The perturbed set is re-sorted to restore
    the PositionSet invariant; ordering is irrelevant to the Hamiltonian,
    which only sees |theta_j - theta_k|.
    """
    if not 0 <= realization < spec.samples:
        raise ValueError(
            f"realization {realization} out of range [0, {spec.samples})"
        )
    if spec.strength == 0.0:
        return arr
    eps = _uniform_draws(spec.seed, realization, len(arr))
    return PositionSet(arr.positions + eps * spec.strength)


@dataclass(frozen=True)
class SeedSpec:
    """Declarative seed description used by sweeps and config files.

    kind 'dimer' and 'periodic' are generators with a tunable spacing;
    'explicit' wraps a literal coordinate list and cannot be swept.
    """

    kind: str
    spacing: float | None = None
    count: int | None = None
    positions: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("dimer", "periodic", "explicit"):
            raise ValueError(f"unknown seed kind {self.kind!r}")
        if self.kind == "explicit":
            if not self.positions:
                raise ValueError("explicit seed requires positions")
        elif self.spacing is None:
            raise ValueError(f"{self.kind} seed requires a spacing")
        if self.kind == "periodic" and (self.count is None or self.count < 1):
            raise ValueError("periodic seed requires count >= 1")

    def build(self) -> PositionSet:
        if self.kind == "dimer":
            return dimer_seed(self.spacing)
        if self.kind == "periodic":
            return periodic_seed(self.count, self.spacing)
        return PositionSet(self.positions)

    def with_spacing(self, value: float) -> "SeedSpec":
        if self.kind == "explicit":
            raise ValueError("explicit seeds have no spacing to sweep")
        return SeedSpec(self.kind, float(value), self.count, self.positions)
