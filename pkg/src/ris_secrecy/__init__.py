"""Secrecy-rate optimization for a surface-assisted MISO wiretap link."""

__version__ = "0.1.0"

from .channel import (
    ChannelSet,
    LinkDistances,
    NormalizedChannels,
    SystemGeometry,
    channel_stream,
    derive_distances,
    normalize,
    path_loss_linear,
    sample_channels,
)
from .core import (
    Beamformer,
    EffectivePair,
    PhaseVector,
    effective_channels,
    objective_f,
    secrecy_rate,
)
from .esr import EsrEstimate, QosParams, esr_from_rates, estimate_esr, realization_rates
from .oracle import (
    grid_phase_oracle,
    joint_grid_oracle,
    phase_objective_grad,
    rayleigh_quotient_oracle,
)
from .solver import (
    PhaseCoefficients,
    PowerIterationError,
    SolveResult,
    SolverConfig,
    SweepDiagnostics,
    SweepPrecomp,
    bcam_solve,
    build_ratio_matrix,
    optimal_beamformer,
    optimal_phase,
    phase_coefficients,
    phase_objective,
    sweep_phases,
)

__all__ = [
    "Beamformer",
    "ChannelSet",
    "EffectivePair",
    "EsrEstimate",
    "LinkDistances",
    "NormalizedChannels",
    "PhaseCoefficients",
    "PhaseVector",
    "PowerIterationError",
    "QosParams",
    "SolveResult",
    "SolverConfig",
    "SweepDiagnostics",
    "SweepPrecomp",
    "SystemGeometry",
    "bcam_solve",
    "build_ratio_matrix",
    "channel_stream",
    "derive_distances",
    "effective_channels",
    "esr_from_rates",
    "estimate_esr",
    "grid_phase_oracle",
    "joint_grid_oracle",
    "normalize",
    "objective_f",
    "optimal_beamformer",
    "optimal_phase",
    "path_loss_linear",
    "phase_coefficients",
    "phase_objective",
    "phase_objective_grad",
    "rayleigh_quotient_oracle",
    "realization_rates",
    "sample_channels",
    "secrecy_rate",
    "sweep_phases",
]
