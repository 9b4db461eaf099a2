"""Quantum gates: standard matrices, the universal single-qubit network,
the one-call oracle classifier, and geometric realizations of each piece
built on the phase and holonomy machinery.

Gate equality is always taken up to a global phase: two unitaries are the
same gate when |tr(A+ B)| / dim = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .adiabatic import HamiltonianPath, evolve_schrodinger, phase_decomposition
from .compiler import CompileSettings, compile_bloch_loop, compile_rotation, default_circle_family
from .errors import DomainError, SynthesisError, ValidationError
from .holonomy import usb_holonomy
from .qcore import PureState, UnitaryOp, wrap_angle

__all__ = [
    "GateOp",
    "OracleSpec",
    "hadamard",
    "phase_gate",
    "controlled_phase",
    "universal_single_qubit",
    "gate_fidelity",
    "deutsch",
    "DeutschResult",
    "ab_phase",
    "geometric_phase_gate",
    "GeometricGateResult",
    "deutsch_geometric",
    "GeometricDeutschResult",
    "holonomic_hadamard",
]

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


@dataclass(frozen=True)
class GateOp:
    """A labeled unitary acting on a fixed number of qubits."""

    unitary: UnitaryOp
    arity: int
    label: str

    def __post_init__(self):
        if self.unitary.dimension != 2**self.arity:
            raise ValidationError(
                "gate %r dimension %d does not match arity %d"
                % (self.label, self.unitary.dimension, self.arity)
            )

    @property
    def matrix(self):
        return self.unitary.matrix


@dataclass(frozen=True)
class OracleSpec:
    """A binary function of one bit, given by its two values."""

    f0: int
    f1: int

    def __post_init__(self):
        if self.f0 not in (0, 1) or self.f1 not in (0, 1):
            raise DomainError("oracle values must be bits")

    @property
    def constant(self):
        return self.f0 == self.f1

    def value(self, x):
        return self.f1 if x else self.f0


def hadamard():
    return GateOp(UnitaryOp(_H), 1, "H")


def phase_gate(phi):
    return GateOp(UnitaryOp(np.diag([1.0, np.exp(1j * phi)])), 1, "phase(%g)" % phi)


def controlled_phase(phi):
    return GateOp(
        UnitaryOp(np.diag([1.0, 1.0, 1.0, np.exp(1j * phi)])),
        2,
        "cphase(%g)" % phi,
    )


def universal_single_qubit(theta, phi):
    """Output of the four-gate network H, phase(2 theta), H, phase(pi/2 + phi)
    applied to |0>: cos(theta)|0> + e^{i phi} sin(theta)|1> up to a global
    phase."""
    state = np.array([1.0, 0.0], dtype=complex)
    for gate in (
        hadamard(),
        phase_gate(2.0 * theta),
        hadamard(),
        phase_gate(np.pi / 2.0 + phi),
    ):
        state = gate.matrix @ state
    return PureState(state)


def gate_fidelity(a, b):
    """|tr(A+ B)| / dim: 1 exactly when A and B agree up to a global phase."""
    ma = a.matrix if hasattr(a, "matrix") else np.asarray(a, dtype=complex)
    mb = b.matrix if hasattr(b, "matrix") else np.asarray(b, dtype=complex)
    return float(abs(np.trace(ma.conj().T @ mb)) / ma.shape[0])


@dataclass(frozen=True)
class DeutschResult:
    classification: str
    final_state: PureState
    probability: float


def _deutsch_outcome(state):
    """Measure in the computational basis and classify."""
    p0 = float(abs(state[0]) ** 2 / np.vdot(state, state).real)
    classification = "constant" if p0 >= 0.5 else "varying"
    probability = p0 if classification == "constant" else 1.0 - p0
    return classification, probability


def deutsch(oracle):
    """Classify a one-bit function as constant or varying with one oracle
    call: prepare (|0> + |1>)/sqrt(2), apply the phase oracle
    |x> -> e^{i pi f(x)} |x>, apply H, measure.

    Deterministic: the outcome probability is exactly 1 for all four
    oracles.
    """
    state = _H @ np.array([1.0, 0.0], dtype=complex)
    state = np.array(
        [np.exp(1j * np.pi * oracle.f0), np.exp(1j * np.pi * oracle.f1)]
    ) * state
    state = _H @ state
    classification, probability = _deutsch_outcome(state)
    return DeutschResult(classification, PureState.normalized(state), probability)


def ab_phase(flux, winding):
    """Topological phase factor exp(-i n flux) of a loop with winding
    number n around a confined flux (natural units).  Depends on the path
    only through the winding count."""
    if winding != int(winding):
        raise DomainError("winding number must be an integer")
    return complex(np.exp(-1j * int(winding) * flux))


def _polygon_drive(vertices, b_field, duration):
    """Hamiltonian path B n(t).sigma tracing a geodesic Bloch polygon.

    The field direction follows the great-circle arcs between consecutive
    vertices at uniform angular speed (spherical linear interpolation in
    Bloch coordinates, so corner crossings stay exact).
    """
    pts = []
    for v in vertices:
        arr = v.as_array() if hasattr(v, "as_array") else np.asarray(v, dtype=float)
        pts.append(arr / np.linalg.norm(arr))
    pts.append(pts[0])
    arcs = []
    for a, b in zip(pts[:-1], pts[1:]):
        ang = float(np.arccos(np.clip(np.dot(a, b), -1.0, 1.0)))
        if ang > 1e-12:
            arcs.append((a, b, ang))
    cum = np.concatenate([[0.0], np.cumsum([ang for _, _, ang in arcs])])
    total = cum[-1]

    def direction(t):
        if total == 0.0:
            return pts[0]
        s = np.clip(t / duration, 0.0, 1.0) * total
        k = min(int(np.searchsorted(cum, s, side="right")) - 1, len(arcs) - 1)
        k = max(k, 0)
        a, b, ang = arcs[k]
        u = (s - cum[k]) / ang
        n = (np.sin((1.0 - u) * ang) * a + np.sin(u * ang) * b) / np.sin(ang)
        return n / np.linalg.norm(n)

    def h(t):
        n = direction(t)
        return b_field * np.array(
            [[n[2], n[0] - 1j * n[1]], [n[0] + 1j * n[1], -n[2]]], dtype=complex
        )

    return HamiltonianPath(h, duration, closed=True)


def _transported_branch_phases(vertices, b_field, duration, steps, bands=(1, 0)):
    """Geometric phases of the requested spin branches around a Bloch
    polygon: band 1 starts in |0> (up at the pole), band 0 in |1>."""
    hpath = _polygon_drive(vertices, b_field, duration)
    starts = {1: np.array([1.0, 0.0], dtype=complex), 0: np.array([0.0, 1.0], dtype=complex)}
    phases = []
    for band in bands:
        traj = evolve_schrodinger(hpath, PureState(starts[band]), steps)
        dec = phase_decomposition(traj, hpath, band)
        phases.append(dec.geometric)
    return phases


@dataclass(frozen=True)
class GeometricGateResult:
    """A verified geometric phase gate together with the loop realizing it."""

    gate: GateOp
    loop: list
    enclosed_angle: float
    upper_phase: float
    lower_phase: float
    phase_error: float


def geometric_phase_gate(phi, b_field=1.0, duration=None, steps=None, tolerance=0.05):
    """Realize a relative phase gate by transport around a Bloch loop.

    Builds a geodesic polygon of oriented solid angle phi, adiabatically
    drags both spin branches around it and returns the induced operator
    diag(e^{i gamma_up}, e^{i gamma_down}).  With this package's phase
    convention gamma_up = -phi/2, so the gate equals ``phase_gate(phi)``
    up to a global phase.  Verification failure beyond ``tolerance``
    raises :class:`SynthesisError` carrying the measured phase.
    """
    if not -2.0 * np.pi < phi < 2.0 * np.pi:
        raise DomainError("loop solid angle must satisfy |phi| < 2*pi")
    loop = compile_bloch_loop(phi)
    if duration is None:
        duration = 400.0 / b_field
    if steps is None:
        steps = 40000
    if phi == 0.0:
        gate = GateOp(UnitaryOp(np.eye(2)), 1, "geometric-phase(0)")
        return GeometricGateResult(gate, loop, 0.0, 0.0, 0.0, 0.0)
    upper, lower = _transported_branch_phases(loop, b_field, duration, steps)
    err = max(
        abs(wrap_angle(upper + phi / 2.0)),
        abs(wrap_angle(lower - phi / 2.0)),
    )
    if err > tolerance:
        raise SynthesisError(
            "transported phases (%.4f, %.4f) miss the +-%.4f target by %.4f"
            % (upper, lower, phi / 2.0, err),
            measured=upper,
        )
    gate = GateOp(
        UnitaryOp(np.diag([np.exp(1j * upper), np.exp(1j * lower)])),
        1,
        "geometric-phase(%g)" % phi,
    )
    return GeometricGateResult(gate, loop, phi, upper, lower, err)


@lru_cache(maxsize=4)
def _holonomic_hadamard_matrix(seed=0):
    """Hadamard from a compiled pi/4 dark-state rotation.

    The path-ordered holonomy of the compiled loop is the planar rotation
    R(pi/4); composed with the fixed frame relabeling diag(1, -1) (a
    bookkeeping reflection, not a dynamical step) it equals H.
    """
    settings = CompileSettings(seed=seed, restarts=4, max_evaluations=1200, verify_steps=20000)
    result = compile_rotation(np.pi / 4.0, default_circle_family(), settings)
    rotation = usb_holonomy(
        default_circle_family().generator(result.params), 20000
    ).matrix.real
    return rotation @ np.diag([1.0, -1.0])


def holonomic_hadamard(seed=0):
    """The compiled holonomic Hadamard as a GateOp."""
    return GateOp(UnitaryOp(_holonomic_hadamard_matrix(seed)), 1, "holonomic-H")


@dataclass(frozen=True)
class GeometricDeutschResult:
    classification: str
    success_probability: float
    branch_phases: tuple
    final_state: PureState


# Loop enclosing solid angle exactly 2*pi: down a meridian, once around
# the full equator, and back up the same meridian (the spur cancels, the
# boundary is the upper hemisphere's).
_HEMISPHERE_LOOP = [
    (0.0, 0.0, 1.0),
    (1.0, 0.0, 0.0),
    (np.cos(2.0 * np.pi / 3.0), np.sin(2.0 * np.pi / 3.0), 0.0),
    (np.cos(4.0 * np.pi / 3.0), np.sin(4.0 * np.pi / 3.0), 0.0),
    (1.0, 0.0, 0.0),
]


def deutsch_geometric(oracle, b_field=1.0, duration=200.0, steps=None, seed=0):
    """Run the one-call classifier with every operation realized
    geometrically.

    The oracle's conditional pi phase is attached per computational
    branch as the measured transport phase of a spin around a loop of
    solid angle 2*pi*f(x) (e^{+-i pi} = -1, so the branch convention
    drops out); the Hadamards are compiled pi/4 dark-state holonomy
    rotations composed with the fixed frame relabeling.  The success
    probability improves as the oracle-loop duration grows.
    """
    if steps is None:
        steps = max(int(100 * duration * b_field), 2000)
    had = _holonomic_hadamard_matrix(seed)
    loop_phase = None
    branch_factors = []
    branch_phases = []
    for x in (0, 1):
        if oracle.value(x) == 0:
            branch_factors.append(1.0 + 0.0j)
            branch_phases.append(0.0)
        else:
            if loop_phase is None:
                (loop_phase,) = _transported_branch_phases(
                    _HEMISPHERE_LOOP, b_field, duration, steps, bands=(1,)
                )
            branch_factors.append(np.exp(1j * loop_phase))
            branch_phases.append(loop_phase)
    state = had @ np.array([1.0, 0.0], dtype=complex)
    state = np.array(branch_factors) * state
    state = had @ state
    classification, probability = _deutsch_outcome(state)
    reference = deutsch(oracle).classification
    success = probability if classification == reference else 1.0 - probability
    return GeometricDeutschResult(
        classification=classification,
        success_probability=success,
        branch_phases=tuple(branch_phases),
        final_state=PureState.normalized(state),
    )
