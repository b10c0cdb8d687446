"""Effective non-Hermitian Hamiltonian of waveguide-coupled atoms.

Single-excitation sector: the Hamiltonian is the dense complex N x N matrix

    H[j, k] = omega0 * delta_jk - i * gamma1d * exp(i |theta_j - theta_k|)

over the atom basis, with theta the phase coordinates.  Every diagonal
entry is omega0 - i*gamma1d (the j = k phase factor is e^0 = 1) and the
matrix is complex symmetric by construction.

For arrays built as Minkowski sums the matrix acquires a block structure:
identical intra-copy blocks on the copy diagonal, a copy-coupling term
diagonal in the inner index, and a residual cross term.  This module also
carries the closed forms for the two-atom (dimer) seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import NestedArray, PositionSet

__all__ = [
    "PhysicalParams",
    "EffectiveHamiltonian",
    "BlockDecomposition",
    "DimerEigensystem",
    "build_dense",
    "interaction_matrix",
    "decompose_blocks",
    "eigenbasis_elements",
    "dimer_analytic_eigs",
    "dimer_cross_block",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Transition frequency offset and single-atom waveguide decay rate.

    Defaults omega0 = 0, gamma1d = 1 match the convention of reporting
    energies relative to omega0 in units of gamma1d.
    """

    omega0: float = 0.0
    gamma1d: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.gamma1d) or self.gamma1d <= 0:
            raise ValueError(f"gamma1d must be > 0, got {self.gamma1d}")
        if not np.isfinite(self.omega0):
            raise ValueError("omega0 must be finite")


def interaction_matrix(theta: np.ndarray, params: PhysicalParams) -> np.ndarray:
    """Dense matrix for raw (not necessarily sorted) phase coordinates.

    The (j, k) and (k, j) entries are filled from one computation, so the
    result is complex symmetric exactly, not merely up to rounding.
    """
    theta = np.asarray(theta, dtype=float)
    n = theta.size
    mat = np.full(
        (n, n), params.omega0 - 1j * params.gamma1d, dtype=np.complex128
    )
    ju, ku = np.triu_indices(n, k=1)
    off = -1j * params.gamma1d * np.exp(1j * np.abs(theta[ju] - theta[ku]))
    mat[ju, ku] = off
    mat[ku, ju] = off
    return mat


@dataclass(frozen=True, eq=False)
class EffectiveHamiltonian:
    """Dense N x N matrix plus the parameters and geometry that made it."""

    matrix: np.ndarray
    params: PhysicalParams
    geometry: PositionSet | NestedArray | None = None

    @property
    def n_atoms(self) -> int:
        return self.matrix.shape[0]

    @property
    def positions(self) -> np.ndarray | None:
        if isinstance(self.geometry, NestedArray):
            return self.geometry.composite.positions
        if isinstance(self.geometry, PositionSet):
            return self.geometry.positions
        return None


def build_dense(
    geometry: PositionSet | NestedArray,
    params: PhysicalParams = PhysicalParams(),
) -> EffectiveHamiltonian:
    """Assemble the effective Hamiltonian for a geometry.

    Accepts a bare PositionSet or a NestedArray (its sorted composite is
    used; the nesting structure is kept on the result for block analytics).
    """
    pos = (
        geometry.composite.positions
        if isinstance(geometry, NestedArray)
        else geometry.positions
    )
    mat = interaction_matrix(pos, params)
    mat.flags.writeable = False
    return EffectiveHamiltonian(matrix=mat, params=params, geometry=geometry)


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Minkowski block structure of a two-level nested array.

    ``intra_a`` is the interaction part of the inner-seed Hamiltonian
    (diagonal -i*gamma included); one copy sits on each copy-diagonal
    block.  ``intra_b`` couples copies at fixed inner index; only its
    off-diagonal part enters reassembly, since the atom self-term is
    already carried by ``intra_a`` (keeping both would double-count the
    diagonal).  ``cross[m, mp, n, np]`` holds the residual couplings with
    both indices different.
    """

    intra_a: np.ndarray
    intra_b: np.ndarray
    cross: np.ndarray
    params: PhysicalParams
    source: NestedArray

    def reassemble(self, order: str = "sorted") -> np.ndarray:
        """Rebuild the dense matrix from the blocks.

        order 'tensor' keeps the (n + N_A * m) layout of the blocks;
        'sorted' permutes to match build_dense on the sorted composite.
        """
        na, nb = len(self.source.seeds[0]), len(self.source.seeds[1])
        b_off = self.intra_b - np.diag(np.diag(self.intra_b))
        mat = np.kron(np.eye(nb), self.intra_a) + np.kron(b_off, np.eye(na))
        mat += self.cross.transpose(0, 2, 1, 3).reshape(na * nb, na * nb)
        mat += self.params.omega0 * np.eye(na * nb)
        if order == "tensor":
            return mat
        if order != "sorted":
            raise ValueError(f"unknown order {order!r}")
        inv = self.source._sorted_of_tensor
        perm = np.empty_like(inv)
        perm[inv] = np.arange(inv.size)
        return mat[np.ix_(perm, perm)]


def decompose_blocks(
    arr: NestedArray, params: PhysicalParams = PhysicalParams()
) -> BlockDecomposition:
    """Split a two-level nested array into its Minkowski blocks."""
    if arr.depth != 2:
        raise ValueError(f"block decomposition needs exactly 2 seeds, got {arr.depth}")
    seed_a, seed_b = arr.seeds
    na, nb = len(seed_a), len(seed_b)
    gamma = params.gamma1d

    intra_a = interaction_matrix(seed_a.positions, PhysicalParams(0.0, gamma))
    intra_b = interaction_matrix(seed_b.positions, PhysicalParams(0.0, gamma))

    pos = arr.tensor_positions()
    cross = np.zeros((nb, nb, na, na), dtype=np.complex128)
    for m in range(nb):
        for mp in range(nb):
            if m == mp:
                continue
            block = -1j * gamma * np.exp(
                1j
                * np.abs(
                    pos[m * na : (m + 1) * na, None]
                    - pos[None, mp * na : (mp + 1) * na]
                )
            )
            np.fill_diagonal(block, 0.0)
            cross[m, mp] = block
    return BlockDecomposition(
        intra_a=intra_a, intra_b=intra_b, cross=cross, params=params, source=arr
    )


def eigenbasis_elements(
    arr: NestedArray,
    params: PhysicalParams,
    seed_a_modes,
) -> np.ndarray:
    """Matrix elements of the composite Hamiltonian in copies of seed-A modes.

    ``seed_a_modes`` is the spectral decomposition of build_dense(seed A)
    with complex-symmetric normalization (sum psi^2 = 1, no conjugation).
    Rows and columns are indexed (mode, copy) as mode + N_A * copy, and the
    elements are evaluated from the mode amplitudes and copy separations
    directly, never by conjugating the dense matrix; agreement with the
    unconjugated congruence Psi^T H Psi is a test, not the implementation.
    """
    if arr.depth != 2:
        raise ValueError(f"eigenbasis elements need exactly 2 seeds, got {arr.depth}")
    if seed_a_modes.ortho_residual > 1e-8 or np.any(seed_a_modes.quasi_null):
        raise ValueError(
            "seed-A modes are not complex-orthonormalized "
            f"(ortho residual {seed_a_modes.ortho_residual:.2e}, "
            f"{int(np.sum(seed_a_modes.quasi_null))} quasi-null vectors)"
        )
    seed_a, seed_b = arr.seeds
    na, nb = len(seed_a), len(seed_b)
    if seed_a_modes.eigenvalues.size != na:
        raise ValueError("seed_a_modes does not match seed A")
    gamma = params.gamma1d
    psi = seed_a_modes.right_vectors
    omega = seed_a_modes.eigenvalues
    pos = arr.tensor_positions()
    theta_b = seed_b.positions

    out = np.zeros((na * nb, na * nb), dtype=np.complex128)
    for mp in range(nb):
        for m in range(nb):
            rows = slice(mp * na, (mp + 1) * na)
            cols = slice(m * na, (m + 1) * na)
            if m == mp:
                out[rows, cols] = np.diag(omega)
                continue
            # copy-coupling term, diagonal in the mode index
            block = (
                -1j
                * gamma
                * np.exp(1j * abs(theta_b[m] - theta_b[mp]))
                * np.eye(na, dtype=np.complex128)
            )
            # residual term: both atom indices differ across the two copies
            phases = np.exp(
                1j
                * np.abs(
                    pos[mp * na : (mp + 1) * na, None]
                    - pos[None, m * na : (m + 1) * na]
                )
            )
            np.fill_diagonal(phases, 0.0)
            block += -1j * gamma * (psi.T @ phases @ psi)
            out[rows, cols] = block
    return out


@dataclass(frozen=True)
class DimerEigensystem:
    """Closed-form eigenpairs of the two-atom seed at phase separation phi."""

    omega_plus: complex
    omega_minus: complex
    v_plus: np.ndarray = field(
        default_factory=lambda: np.array([1.0, 1.0]) / np.sqrt(2.0)
    )
    v_minus: np.ndarray = field(
        default_factory=lambda: np.array([1.0, -1.0]) / np.sqrt(2.0)
    )


def dimer_analytic_eigs(
    phi: float, params: PhysicalParams = PhysicalParams()
) -> DimerEigensystem:
    """omega_pm = omega0 - i*gamma*(1 +/- e^{i phi}) with (1, +/-1)/sqrt(2).

    For phi < pi/2 the symmetric (1, 1) mode is the fast-decaying one; the
    roles swap as the phase crosses the Bragg point phi = pi.
    """
    phase = np.exp(1j * phi)
    return DimerEigensystem(
        omega_plus=params.omega0 - 1j * params.gamma1d * (1.0 + phase),
        omega_minus=params.omega0 - 1j * params.gamma1d * (1.0 - phase),
    )


def dimer_cross_block(
    phi_a: float, phi_b: float, params: PhysicalParams = PhysicalParams()
) -> tuple[np.ndarray, np.ndarray]:
    """Copy-coupling block of the nested dimer in the dimer eigenbasis.

    Returns (exact, small_angle), both with the overall factor
    i*gamma*e^{i phi_b}:

        exact       = [[2 cos^2(phi_a/2),  i sin(phi_a)],
                       [-i sin(phi_a),     2 sin^2(phi_a/2)]]
        small_angle = [[2 - phi_a^2/2,     i phi_a],
                       [-i phi_a,          phi_a^2/2]]

    ordered (bright, dark).  Requires phi_b > phi_a > 0: the closed form
    rests on |x| simplifications that assume separated, ordered copies.

    Sign and orientation convention: the block is quoted with the +i*gamma
    prefactor; the raw copy-coupling block of the full matrix carries
    -i*gamma, i.e. it is the negative of this one.  Row/column order is the
    congruence v_nu^T M v_mu of the site block M = [[1, e^{-i phi_a}],
    [e^{i phi_a}, 1]] (the copy-2 -> copy-1 orientation); the opposite
    orientation transposes the off-diagonal entries.
    """
    if not (phi_b > phi_a > 0):
        raise ValueError(
            f"closed form requires phi_b > phi_a > 0, got phi_a={phi_a}, phi_b={phi_b}"
        )
    pref = 1j * params.gamma1d * np.exp(1j * phi_b)
    exact = pref * np.array(
        [
            [2 * np.cos(phi_a / 2) ** 2, 1j * np.sin(phi_a)],
            [-1j * np.sin(phi_a), 2 * np.sin(phi_a / 2) ** 2],
        ]
    )
    small = pref * np.array(
        [
            [2 - phi_a**2 / 2, 1j * phi_a],
            [-1j * phi_a, phi_a**2 / 2],
        ]
    )
    return exact, small
