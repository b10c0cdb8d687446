"""nestqed: spectra of nested (Minkowski-sum) atom arrays on a 1D waveguide.

Build quasi-disordered arrays by iterated Minkowski sums of seed position
sets, assemble the single-excitation non-Hermitian effective Hamiltonian,
diagonalize it, and run the spacing sweeps, disorder ensembles and
scaling studies that characterize its subradiant modes.
"""

__version__ = "0.1.0"

from .geometry import (
    DisorderSpec,
    NestedArray,
    PositionSet,
    SeedSpec,
    apply_disorder,
    derive_seed,
    dimer_seed,
    minkowski_sum,
    nest,
    periodic_seed,
)
from .hamiltonian import (
    BlockDecomposition,
    DimerEigensystem,
    EffectiveHamiltonian,
    PhysicalParams,
    build_dense,
    decompose_blocks,
    dimer_analytic_eigs,
    dimer_cross_block,
    eigenbasis_elements,
    interaction_matrix,
)
from .spectral import (
    ModeMetrics,
    NumericsError,
    SpectralDecomposition,
    darkest_mode,
    eigendecompose,
    intensity_profile,
    mode_metrics,
)
from .experiments import (
    BlockEquivalenceReport,
    DisorderStats,
    Resonance,
    ScalingResult,
    SweepConfig,
    SweepResult,
    find_resonances,
    golden_section,
    resonance_spacings,
    run_disorder_ensemble,
    run_scaling_study,
    run_sweep,
    verify_block_equivalence,
)
from .config import ConfigError, RunConfig, parse_config, parse_config_file, serialize_config
from .io import OutputError, write_results

__all__ = [
    "__version__",
    "PositionSet", "NestedArray", "DisorderSpec", "SeedSpec",
    "dimer_seed", "periodic_seed", "minkowski_sum", "nest",
    "apply_disorder", "derive_seed",
    "PhysicalParams", "EffectiveHamiltonian", "BlockDecomposition",
    "DimerEigensystem", "build_dense", "interaction_matrix",
    "decompose_blocks", "eigenbasis_elements", "dimer_analytic_eigs",
    "dimer_cross_block",
    "SpectralDecomposition", "ModeMetrics", "NumericsError",
    "eigendecompose", "darkest_mode", "mode_metrics", "intensity_profile",
    "SweepConfig", "SweepResult", "DisorderStats", "Resonance",
    "ScalingResult", "BlockEquivalenceReport",
    "run_sweep", "run_disorder_ensemble", "find_resonances",
    "resonance_spacings", "run_scaling_study", "verify_block_equivalence",
    "golden_section",
    "RunConfig", "ConfigError", "parse_config", "parse_config_file",
    "serialize_config",
    "write_results", "OutputError",
]
