"""Gaussian continuous-variable dynamics of open quadratic bosonic systems.

Two physical settings are covered: the entanglement evolution of two
coupled harmonic oscillators in a thermal reservoir (covariance-matrix
ODEs in the transformed basis) and the two-step ring-cavity protocol that
prepares collective atomic modes in single- and two-mode squeezed states.
"""

from .bath import (
    BathCoefficients,
    BathCoefficientTable,
    SpectralDensity,
    ThermalSpec,
    coefficient_table,
    coefficients_at,
    dissipation_kernel,
    markov_coefficients,
    mean_occupation,
    noise_kernel,
    spectral_density,
    static_frequency_counterterm,
)
from .errors import (
    ConfigError,
    CVDynError,
    InvalidStateError,
    NumericalError,
    UnstableSystemError,
)
from .gaussian import (
    PPTResult,
    SqueezeSpec,
    plus_minus_transform,
    ppt_negativity,
    squeeze_symplectic,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_covariance,
    two_mode_squeezed_covariance,
    vacuum_covariance,
)
from .oscillators import (
    EntanglementSeries,
    OscillatorPair,
    Trajectory,
    TransformedFrequencies,
    assemble_drift,
    closed_form_free,
    entanglement_series,
    initial_squeezed_vector,
    integrate,
    make_bath_table,
    sudden_death_report,
    threshold_bisection,
    threshold_r,
    transformed_frequencies,
)
from .ringcavity import (
    AtomPositions,
    EffectiveCouplings,
    EnsembleParams,
    ModeSystem,
    ProtocolTrajectory,
    build_system,
    collective_overlap,
    effective_couplings,
    eigenvalue_report,
    run_protocol,
    run_protocol_from_couplings,
    squeeze_parameters,
    squeezed_target,
    to_squeezed_frame,
    validity_check,
)

__version__ = "0.1.0"
