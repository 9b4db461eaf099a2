import numpy as np
import pytest

from geomphase import (
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
    solid_angle,
    universal_single_qubit,
)
from geomphase.errors import DomainError, SynthesisError
from geomphase.qcore import SIGMA_Z

from helpers import phase_dist

ALL_ORACLES = [OracleSpec(a, b) for a in (0, 1) for b in (0, 1)]


def test_standard_gate_matrices():
    h = hadamard().matrix
    assert np.allclose(h, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    assert np.allclose(h @ h, np.eye(2), atol=1e-15)
    assert np.allclose(phase_gate(0.0).matrix, np.eye(2))
    phi = 0.73
    assert np.allclose(phase_gate(phi).matrix, np.diag([1, np.exp(1j * phi)]))
    cp = controlled_phase(phi).matrix
    assert np.allclose(cp, np.diag([1, 1, 1, np.exp(1j * phi)]))


def test_controlled_phase_pi_flips_last_basis_state():
    cp = controlled_phase(np.pi).matrix
    for k in range(3):
        basis = np.zeros(4)
        basis[k] = 1.0
        assert np.allclose(cp @ basis, basis)
    last = np.zeros(4)
    last[3] = 1.0
    assert np.allclose(cp @ last, -last)


def test_gates_unitary():
    for gate in (hadamard(), phase_gate(1.1), controlled_phase(-2.3)):
        m = gate.matrix
        assert np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])) < 1e-12


def test_universal_network_examples():
    assert abs(np.vdot(universal_single_qubit(0.0, 0.0).vector, [1, 0])) > 1 - 1e-12
    assert abs(np.vdot(universal_single_qubit(np.pi / 2, 0.0).vector, [0, 1])) > 1 - 1e-12
    target = np.array([1, 1j]) / np.sqrt(2)
    assert abs(np.vdot(universal_single_qubit(np.pi / 4, np.pi / 2).vector, target)) > 1 - 1e-12


def test_universal_network_grid():
    thetas = np.linspace(0.0, np.pi / 2, 4)
    phis = np.linspace(-np.pi, np.pi, 5)
    for theta in thetas:
        for phi in phis:
            out = universal_single_qubit(theta, phi).vector
            target = np.array([np.cos(theta), np.exp(1j * phi) * np.sin(theta)])
            assert abs(np.linalg.norm(out) - 1.0) < 1e-12
            assert abs(np.vdot(target, out)) > 1 - 1e-12


def test_deutsch_exhaustive():
    expectations = {
        (0, 0): "constant",
        (1, 1): "constant",
        (0, 1): "varying",
        (1, 0): "varying",
    }
    for oracle in ALL_ORACLES:
        result = deutsch(oracle)
        assert result.classification == expectations[(oracle.f0, oracle.f1)]
        assert result.probability == 1.0


def test_deutsch_final_states():
    assert abs(np.vdot(deutsch(OracleSpec(0, 0)).final_state.vector, [1, 0])) > 1 - 1e-12
    assert abs(np.vdot(deutsch(OracleSpec(0, 1)).final_state.vector, [0, 1])) > 1 - 1e-12


def test_ab_phase_values():
    assert ab_phase(0.77, 0) == 1.0
    assert ab_phase(2 * np.pi, 1) == pytest.approx(1.0, abs=1e-12)
    assert ab_phase(np.pi, 2) == pytest.approx(1.0, abs=1e-12)
    assert ab_phase(np.pi, 1) == pytest.approx(-1.0, abs=1e-12)


def test_ab_phase_power_identity():
    rng = np.random.default_rng(30)
    for _ in range(20):
        flux = rng.uniform(-5, 5)
        n = int(rng.integers(-4, 5))
        assert abs(ab_phase(flux, n) - ab_phase(flux, 1) ** n) < 1e-12


def test_ab_phase_winding_must_be_integer():
    with pytest.raises(DomainError):
        ab_phase(1.0, 0.5)


def test_geometric_phase_gate_identity():
    result = geometric_phase_gate(0.0)
    assert gate_fidelity(result.gate.matrix, np.eye(2)) > 1 - 1e-12


def test_geometric_phase_gate_octant():
    result = geometric_phase_gate(np.pi / 2, duration=200.0, steps=20000)
    assert solid_angle(result.loop) == pytest.approx(np.pi / 2, abs=1e-10)
    # branches acquire opposite phases of magnitude phi/2
    assert phase_dist(result.upper_phase, -np.pi / 4) < 0.05
    assert phase_dist(result.lower_phase, np.pi / 4) < 0.05
    assert gate_fidelity(result.gate.matrix, phase_gate(np.pi / 2).matrix) > 1 - 0.05


def test_geometric_phase_gate_hemisphere_is_sigma_z():
    result = geometric_phase_gate(np.pi, duration=200.0, steps=20000)
    assert gate_fidelity(result.gate.matrix, SIGMA_Z) > 1 - 0.05


def test_geometric_phase_gate_inverse_pair():
    fwd = geometric_phase_gate(np.pi / 2, duration=150.0, steps=15000)
    bwd = geometric_phase_gate(-np.pi / 2, duration=150.0, steps=15000)
    product = fwd.gate.matrix @ bwd.gate.matrix
    assert gate_fidelity(product, np.eye(2)) > 1 - 0.1


def test_geometric_phase_gate_rejects_out_of_range():
    with pytest.raises(DomainError):
        geometric_phase_gate(2 * np.pi)


def test_geometric_phase_gate_synthesis_error():
    with pytest.raises(SynthesisError) as info:
        geometric_phase_gate(np.pi / 2, duration=150.0, steps=15000, tolerance=1e-9)
    assert info.value.measured is not None


def test_holonomic_hadamard_matches_hadamard():
    gate = holonomic_hadamard()
    assert gate_fidelity(gate.matrix, hadamard().matrix) > 1 - 1e-6


def test_deutsch_geometric_all_oracles():
    for oracle in ALL_ORACLES:
        result = deutsch_geometric(oracle, duration=200.0)
        assert result.classification == deutsch(oracle).classification
        assert result.success_probability > 0.99


def test_deutsch_geometric_improves_with_duration():
    successes = [
        deutsch_geometric(OracleSpec(0, 1), duration=T).success_probability
        for T in (200.0, 400.0)
    ]
    assert successes[1] > successes[0]
