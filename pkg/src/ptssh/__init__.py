"""Numerical toolkit for PT-symmetric Su-Schrieffer-Heeger chains.

Finite and Bloch Hamiltonians of the SSH chain with balanced gain/loss
potentials (whole-chain alternating, or a conjugate defect pair at depth
n) and of its spin-orbit-coupled extension; dense diagonalization,
closed-form transfer-matrix edge and bound energies, mode
classification, zero-mode recovery maps, and PT phase diagrams.
"""

from .lattice import (
    ModelParams,
    SiteIndex,
    bloch_offdiagonal,
    build_bloch,
    build_real_space,
    build_soc,
    soc_blocks,
)
from .eigen import (
    ConvergenceError,
    Spectrum,
    SpectrumStats,
    eigendecompose,
    spectrum_statistics,
)
from .transfer import (
    AnalyticModes,
    ModeCandidate,
    TransferCoefficients,
    ZeroModeProfile,
    bound_cubics_c2,
    bound_energies_c1,
    edge_energies_c1,
    edge_energies_case_b,
    transfer_coefficients,
    zero_mode_profile,
)
from .topology import (
    SymmetryReport,
    chiral_operator,
    parity_operator,
    verify_symmetries,
    winding_soc,
    winding_ssh,
)
from .analysis import (
    DecayFit,
    GaplessError,
    ModeCountError,
    ModeRecord,
    PhasePoint,
    RecoveryCell,
    bisect_gamma,
    bulk_gap,
    classify_modes,
    decay_fit,
    edge_pair,
    fit_exponential,
    gamma_all_imaginary,
    gamma_complex_onset,
    gamma_full_breaking,
    gamma_gap_entry,
    merge_boundary,
    mode_metrics,
    pt_phase_classify,
    recovery_map,
    soc_edge_quartet,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticModes",
    "ConvergenceError",
    "DecayFit",
    "GaplessError",
    "ModeCandidate",
    "ModeCountError",
    "ModeRecord",
    "ModelParams",
    "PhasePoint",
    "RecoveryCell",
    "SiteIndex",
    "Spectrum",
    "SpectrumStats",
    "SymmetryReport",
    "TransferCoefficients",
    "ZeroModeProfile",
    "bisect_gamma",
    "bloch_offdiagonal",
    "bound_cubics_c2",
    "bound_energies_c1",
    "build_bloch",
    "build_real_space",
    "build_soc",
    "bulk_gap",
    "chiral_operator",
    "classify_modes",
    "decay_fit",
    "edge_energies_c1",
    "edge_energies_case_b",
    "edge_pair",
    "eigendecompose",
    "fit_exponential",
    "gamma_all_imaginary",
    "gamma_complex_onset",
    "gamma_full_breaking",
    "gamma_gap_entry",
    "merge_boundary",
    "mode_metrics",
    "parity_operator",
    "pt_phase_classify",
    "recovery_map",
    "soc_blocks",
    "soc_edge_quartet",
    "spectrum_statistics",
    "transfer_coefficients",
    "verify_symmetries",
    "winding_soc",
    "winding_ssh",
    "zero_mode_profile",
]
