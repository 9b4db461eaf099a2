"""geomphase: geometric phases, holonomies, and holonomic gate synthesis.

A numpy/scipy library for computing discrete (cyclic-overlap) phases,
adiabatic Berry phases, interferometric mixed-state phases and
non-abelian (matrix) holonomies on small quantum systems, together with
an optimizer that compiles target holonomy angles into control loops.
"""

__version__ = "0.1.0"

from . import errors
from .qcore import (
    BlochVector,
    DensityMatrix,
    PureState,
    UnitaryOp,
    apply,
    basis_state,
    bloch_from_density,
    bloch_from_state,
    density_from_bloch,
    ket,
    overlap,
    state_from_bloch,
    wrap_angle,
)
from .abelian import (
    LoopPhase,
    PhaseValue,
    StatePath,
    TwoParamFamily,
    geodesic_path,
    geodesic_polygon_path,
    geometric_phase_integral,
    pancharatnam_phase,
    parallel_transport_defect,
    plaquette_curvature,
    solid_angle,
)
from .adiabatic import (
    EigenFrame,
    HamiltonianPath,
    PhaseDecomposition,
    Trajectory,
    berry_connection,
    berry_phase,
    eigenframe,
    evolve_schrodinger,
    phase_decomposition,
    spin_half_cone_experiment,
)
from .foucault import (
    PendulumParams,
    PendulumTrajectory,
    foucault_closed_form,
    foucault_integrate,
    precession_angle,
)
from .interferometer import (
    FringeScan,
    MZConfig,
    composite_unitary,
    extract_phase_visibility,
    fringe_scan,
    intensity,
    mz_output,
    projective_sequence_phase,
)
from .holonomy import (
    DegenerateFrame,
    FrameFamily,
    HolonomyMatrix,
    PulseSchedule,
    WZConnection,
    circle_schedule,
    field_strength_plaquette,
    path_ordered_exp,
    usb_dark_basis,
    usb_dark_frame,
    usb_full_evolution_check,
    usb_gamma_closed_form,
    usb_hamiltonian,
    usb_holonomy,
    wz_connection,
)
from .gates import (
    GateOp,
    OracleSpec,
    ab_phase,
    controlled_phase,
    deutsch,
    deutsch_geometric,
    gate_fidelity,
    geometric_phase_gate,
    hadamard,
    holonomic_hadamard,
    phase_gate,
    universal_single_qubit,
)
from .compiler import (
    CompileResult,
    CompileSettings,
    NoiseReport,
    PulseFamily,
    compile_bloch_loop,
    compile_rotation,
    default_circle_family,
    evaluate_loop,
    noise_robustness,
)

__all__ = [
    "errors",
    "BlochVector",
    "DensityMatrix",
    "PureState",
    "UnitaryOp",
    "apply",
    "basis_state",
    "bloch_from_density",
    "bloch_from_state",
    "density_from_bloch",
    "ket",
    "overlap",
    "state_from_bloch",
    "wrap_angle",
    "LoopPhase",
    "PhaseValue",
    "StatePath",
    "TwoParamFamily",
    "geodesic_path",
    "geodesic_polygon_path",
    "geometric_phase_integral",
    "pancharatnam_phase",
    "parallel_transport_defect",
    "plaquette_curvature",
    "solid_angle",
    "EigenFrame",
    "HamiltonianPath",
    "PhaseDecomposition",
    "Trajectory",
    "berry_connection",
    "berry_phase",
    "eigenframe",
    "evolve_schrodinger",
    "phase_decomposition",
    "spin_half_cone_experiment",
    "PendulumParams",
    "PendulumTrajectory",
    "foucault_closed_form",
    "foucault_integrate",
    "precession_angle",
    "FringeScan",
    "MZConfig",
    "composite_unitary",
    "extract_phase_visibility",
    "fringe_scan",
    "intensity",
    "mz_output",
    "projective_sequence_phase",
    "DegenerateFrame",
    "FrameFamily",
    "HolonomyMatrix",
    "PulseSchedule",
    "WZConnection",
    "circle_schedule",
    "field_strength_plaquette",
    "path_ordered_exp",
    "usb_dark_basis",
    "usb_dark_frame",
    "usb_full_evolution_check",
    "usb_gamma_closed_form",
    "usb_hamiltonian",
    "usb_holonomy",
    "wz_connection",
    "GateOp",
    "OracleSpec",
    "ab_phase",
    "controlled_phase",
    "deutsch",
    "deutsch_geometric",
    "gate_fidelity",
    "geometric_phase_gate",
    "hadamard",
    "holonomic_hadamard",
    "phase_gate",
    "universal_single_qubit",
    "CompileResult",
    "CompileSettings",
    "NoiseReport",
    "PulseFamily",
    "compile_bloch_loop",
    "compile_rotation",
    "default_circle_family",
    "evaluate_loop",
    "noise_robustness",
]
