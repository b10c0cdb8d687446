"""Diagonalization of the complex-symmetric effective Hamiltonian.

The matrix is complex symmetric, not Hermitian, so left eigenvectors are
the plain (unconjugated) transposes of the right ones and the natural
normalization is sum_n psi_n^2 = 1 without conjugation.  Any dense general
eigensolver meeting the residual bound is acceptable; LAPACK's Hessenberg
+ QR driver via scipy is used here.  The symmetric structure is exploited
only for normalization and for eliminating the left-vector solve.

Self-orthogonal vectors (|sum psi^2| ~ 0, the symptom of a near-defective
spectrum) cannot be normalized this way; they are flagged, kept with unit
Hermitian norm, and excluded from congruence checks downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .hamiltonian import EffectiveHamiltonian, PhysicalParams

__all__ = [
    "SpectralDecomposition",
    "ModeMetrics",
    "NumericsError",
    "eigendecompose",
    "darkest_mode",
    "mode_metrics",
    "intensity_profile",
]

QUASI_NULL_THRESHOLD = 1e-12
ORTHO_WARN_THRESHOLD = 1e-8
PASSIVITY_TOLERANCE = 1e-10
DEGENERACY_TOLERANCE = 1e-9


class NumericsError(RuntimeError):
    """Solver diagnostic failure; carries the offending residual."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues and right eigenvectors, darkest mode first.

    Modes are sorted by ascending |Im(omega)|, ties broken by ascending
    Re(omega), then original index.  ``right_vectors[:, k]`` belongs to
    ``eigenvalues[k]``.  ``ortho_residual`` is max |Psi^T Psi - I| over the
    unflagged modes (unconjugated products); ``eig_residual`` is
    max_k ||H psi_k - omega_k psi_k||_2 / ||H||_2.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    ortho_residual: float
    eig_residual: float
    params: PhysicalParams
    quasi_null: np.ndarray  # per-mode flag: complex-symmetric norm ~ 0
    degenerate: bool  # eigenvalue clusters detected
    ortho_warning: bool  # ortho_residual above threshold

    @property
    def n_modes(self) -> int:
        return int(self.eigenvalues.size)

    def decays(self) -> np.ndarray:
        """-Im(omega) for every mode, in units of gamma1d."""
        return -self.eigenvalues.imag / self.params.gamma1d


@dataclass(frozen=True, eq=False)
class ModeMetrics:
    """Observables of a single mode.

    decay is -Im(omega)/gamma1d, the quantity the spectra report (the
    population-decay convention would carry an extra factor 2, not used
    here).  intensity is |psi_n|^2 normalized to unit sum, independent of
    the complex-symmetric normalization used for algebra.
    """

    decay: float
    detuning: float
    intensity: np.ndarray
    participation_ratio: float


def eigendecompose(h: EffectiveHamiltonian) -> SpectralDecomposition:
    """Full spectrum of the effective Hamiltonian with diagnostics.

    Raises NumericsError if the solver fails to converge or if any
    eigenvalue sits above the real axis beyond tolerance (the dissipative
    model cannot amplify, so that signals a solver failure).  Degenerate
    or near-defective spectra are returned with warning flags set, never
    silently passed.
    """
    mat = h.matrix
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise ValueError("Hamiltonian has non-finite entries")
    gamma = h.params.gamma1d

    try:
        eigvals, vecs = sla.eig(mat)
    except sla.LinAlgError as err:  # pragma: no cover - rare LAPACK failure
        raise NumericsError(f"eigensolver did not converge: {err}") from err

    order = np.lexsort((np.arange(eigvals.size), eigvals.real, np.abs(eigvals.imag)))
    eigvals = eigvals[order]
    vecs = vecs[:, order]

    max_pos_imag = float(np.max(eigvals.imag, initial=-np.inf))
    if max_pos_imag > PASSIVITY_TOLERANCE * gamma:
        raise NumericsError(
            "passivity violated: Im(omega) = "
            f"{max_pos_imag:.3e} > {PASSIVITY_TOLERANCE:.0e} * gamma",
            residual=max_pos_imag / gamma,
        )

    # complex-symmetric normalization where the bilinear norm is not null
    quasi_null = np.zeros(eigvals.size, dtype=bool)
    for k in range(eigvals.size):
        v = vecs[:, k]
        v = v / np.linalg.norm(v)
        sq = np.sum(v * v)
        if abs(sq) < QUASI_NULL_THRESHOLD:
            quasi_null[k] = True
            vecs[:, k] = v
        else:
            vecs[:, k] = v / np.sqrt(sq)

    keep = ~quasi_null
    if np.any(keep):
        sub = vecs[:, keep]
        gram = sub.T @ sub
        ortho_residual = float(
            np.max(np.abs(gram - np.eye(int(np.sum(keep)))))
        )
    else:  # pragma: no cover - fully defective spectrum
        ortho_residual = np.inf

    h_norm = sla.norm(mat, 2)
    resid = mat @ vecs - vecs * eigvals[None, :]
    eig_residual = float(
        np.max(np.linalg.norm(resid, axis=0) / np.linalg.norm(vecs, axis=0))
        / max(h_norm, np.finfo(float).tiny)
    )

    gaps = np.abs(eigvals[:, None] - eigvals[None, :])
    np.fill_diagonal(gaps, np.inf)
    degenerate = bool(np.min(gaps, initial=np.inf) < DEGENERACY_TOLERANCE * gamma)

    vecs.flags.writeable = False
    eigvals.flags.writeable = False
    return SpectralDecomposition(
        eigenvalues=eigvals,
        right_vectors=vecs,
        ortho_residual=ortho_residual,
        eig_residual=eig_residual,
        params=h.params,
        quasi_null=quasi_null,
        degenerate=degenerate,
        ortho_warning=bool(ortho_residual > ORTHO_WARN_THRESHOLD),
    )


def mode_metrics(dec: SpectralDecomposition, index: int) -> ModeMetrics:
    """Decay, detuning, intensity profile and participation of one mode."""
    if not 0 <= index < dec.n_modes:
        raise ValueError(f"mode index {index} out of range [0, {dec.n_modes})")
    omega = dec.eigenvalues[index]
    v = dec.right_vectors[:, index]
    intensity = np.abs(v) ** 2
    intensity = intensity / intensity.sum()
    return ModeMetrics(
        decay=float(-omega.imag / dec.params.gamma1d),
        detuning=float(omega.real - dec.params.omega0),
        intensity=intensity,
        participation_ratio=float(1.0 / np.sum(intensity**2)),
    )


def darkest_mode(dec: SpectralDecomposition) -> tuple[int, ModeMetrics]:
    """Mode minimizing -Im(omega); ties broken by ascending Re(omega)."""
    key = np.lexsort((dec.eigenvalues.real, -dec.eigenvalues.imag))
    index = int(key[0])
    return index, mode_metrics(dec, index)


def intensity_profile(dec: SpectralDecomposition, index: int) -> np.ndarray:
    """Per-atom |psi_n|^2 of a mode, normalized to unit sum."""
    return mode_metrics(dec, index).intensity
