"""Statevector simulation of spectral quantum circuits for advection-diffusion flows."""

from .advection import (
    VelocityProfile,
    build_shear_advection,
    build_uniform_advection,
    count_controlled_gates,
    count_two_qubit_gates,
    expand_profile_phases,
)
from .config import ConfigError, RunSettings, load_config, parse_config
from .demo import (
    DEMO_ALPHA,
    DEMO_BETA,
    DemoResult,
    build_demo_circuit,
    demo_ancilla_count,
    format_circuit_listing,
    ideal_demo_state,
    run_demo,
)
from .diffusion import (
    DiffusionParams,
    build_halfspectrum_diffusion,
    build_periodic_diffusion,
    damping_unitary,
    prepare_gaussian_by_diffusion,
    worst_case_success,
)
from .oracles import (
    ScalarField,
    analytic_pulse_solution,
    central_difference_weights,
    diagonal_propagator_oracle,
    error_norm,
    fd10_reference,
    split_propagation_oracle,
)
from .splitting import (
    RunResult,
    ScenarioConfig,
    commutator_error_estimate,
    decompose_steady_state,
    initial_scalar_field,
    run_scenario,
    strang_step,
    trotter_step,
    x_coordinates,
    y_coordinates,
)
from .state import (
    Circuit,
    GateKind,
    GateOp,
    QuantumState,
    apply_circuit,
    apply_gate,
    build_fourier_initial_state,
    cnot,
    damping,
    damping_matrix,
    encode_amplitudes,
    hadamard,
    inverse_circuit,
    new_state,
    phase,
    project_ancilla_zero,
    read_amplitudes,
    remap_circuit,
    sample_counts,
    swap,
    write_amplitudes,
)
from .transforms import (
    BoundaryKind,
    WavenumberTable,
    apply_qct,
    apply_qst,
    build_qft_circuit,
    wavenumbers,
)

__all__ = [
    "BoundaryKind",
    "Circuit",
    "ConfigError",
    "DEMO_ALPHA",
    "DEMO_BETA",
    "DemoResult",
    "DiffusionParams",
    "GateKind",
    "GateOp",
    "QuantumState",
    "RunResult",
    "RunSettings",
    "ScalarField",
    "ScenarioConfig",
    "VelocityProfile",
    "WavenumberTable",
    "analytic_pulse_solution",
    "apply_circuit",
    "apply_gate",
    "apply_qct",
    "apply_qst",
    "build_demo_circuit",
    "build_fourier_initial_state",
    "build_halfspectrum_diffusion",
    "build_periodic_diffusion",
    "build_qft_circuit",
    "build_shear_advection",
    "build_uniform_advection",
    "central_difference_weights",
    "cnot",
    "commutator_error_estimate",
    "count_controlled_gates",
    "count_two_qubit_gates",
    "damping",
    "damping_matrix",
    "damping_unitary",
    "decompose_steady_state",
    "demo_ancilla_count",
    "diagonal_propagator_oracle",
    "encode_amplitudes",
    "error_norm",
    "expand_profile_phases",
    "fd10_reference",
    "format_circuit_listing",
    "hadamard",
    "ideal_demo_state",
    "initial_scalar_field",
    "inverse_circuit",
    "load_config",
    "new_state",
    "parse_config",
    "phase",
    "prepare_gaussian_by_diffusion",
    "project_ancilla_zero",
    "read_amplitudes",
    "remap_circuit",
    "run_demo",
    "run_scenario",
    "sample_counts",
    "split_propagation_oracle",
    "strang_step",
    "swap",
    "trotter_step",
    "wavenumbers",
    "worst_case_success",
    "write_amplitudes",
    "x_coordinates",
    "y_coordinates",
]

__version__ = "0.1.0"
