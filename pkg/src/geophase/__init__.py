"""
Dephasing dynamics and kinematic geometric phase of a qubit coupled to an
oscillator or spin environment, with and without initial system-environment
correlations.
"""

from geophase.bosonic import (
    BosonicBath,
    OhmicSpectralDensity,
    QuadratureError,
    bosonic_branch_factors,
    gamma_uc_bosonic,
    phi_dot_bosonic,
    phi_shift_bosonic,
    thermal_coherence_factor,
)
from geophase.core import (
    ZERO_TEMPERATURE,
    BlochState,
    GridTooCoarseError,
    MixedInitialState,
    NoCoherenceError,
    PreparationWeights,
    SingularTrajectoryError,
    cycle_time,
    mixed_state_from_unitary,
    projective_weights,
    rotation_unitary,
    unitary_weights,
    unwrap_phase,
    wrap_phase,
)
from geophase.geometric import (
    GeometricPhaseResult,
    phase_correction,
    phase_mixed,
    phase_pure,
    uncoupled_mixed_phase,
    uncoupled_pure_phase,
)
from geophase.kernel import (
    BranchFactors,
    CorrelationScenario,
    DephasingTrajectory,
    build_trajectory,
    coherence_ratio,
)
from geophase.spin import (
    PerSpinFactor,
    SpinBath,
    gamma_corr1_check,
    gamma_uc_spin,
    per_spin_factor,
    spin_branch_factors,
)

__version__ = "0.1.0"
