import numpy as np
import pytest

from geomphase import (
    BlochVector,
    DensityMatrix,
    PureState,
    UnitaryOp,
    apply,
    bloch_from_density,
    density_from_bloch,
    ket,
    overlap,
    state_from_bloch,
)
from geomphase.errors import DimensionError, DomainError, ValidationError
from geomphase.qcore import SIGMA_X, SIGMA_Y, SIGMA_Z, wrap_angle

from helpers import haar_unitary, random_state


def test_pure_state_requires_normalization():
    with pytest.raises(ValidationError):
        PureState([1.0, 1.0])
    assert np.allclose(PureState.normalized([1.0, 1.0]).vector, [2**-0.5, 2**-0.5])


def test_pure_state_requires_dimension_two():
    with pytest.raises(DimensionError):
        PureState([1.0])


def test_pure_state_is_immutable():
    psi = ket(1, 0)
    with pytest.raises(ValueError):
        psi.vector[0] = 0.5


def test_density_matrix_invariants():
    with pytest.raises(ValidationError):
        DensityMatrix([[0.5, 0.5j], [0.5j, 0.5]])  # not hermitian
    with pytest.raises(ValidationError):
        DensityMatrix(np.eye(2))  # trace 2
    with pytest.raises(ValidationError):
        DensityMatrix([[1.5, 0.0], [0.0, -0.5]])  # negative eigenvalue


def test_unitary_invariant():
    with pytest.raises(ValidationError):
        UnitaryOp([[1.0, 0.1], [0.0, 1.0]])
    UnitaryOp(np.eye(3))


def test_bloch_vector_ball():
    BlochVector(0.6, 0.0, 0.8)
    with pytest.raises(DomainError):
        BlochVector(1.0, 0.2, 0.0)


def test_density_from_bloch_examples():
    assert np.allclose(density_from_bloch((0, 0, 0)).matrix, np.eye(2) / 2)
    assert np.allclose(density_from_bloch((0, 0, 1)).matrix, np.diag([1.0, 0.0]))
    rho = density_from_bloch((1, 0, 0))
    # tr(sigma_x rho) recovers the +x coordinate, and the matrix is the
    # projector onto (|0> + |1>)/sqrt(2)
    assert abs(np.trace(SIGMA_X @ rho.matrix).real - 1.0) < 1e-12
    assert np.allclose(rho.matrix, np.full((2, 2), 0.5))


def test_density_from_bloch_rejects_outside_ball():
    with pytest.raises(DomainError):
        density_from_bloch((0.8, 0.8, 0.0))


def test_bloch_from_density_examples():
    assert np.allclose(tuple(bloch_from_density(DensityMatrix(np.eye(2) / 2))), (0, 0, 0))
    south = DensityMatrix(np.diag([0.0, 1.0]))
    assert np.allclose(tuple(bloch_from_density(south)), (0, 0, -1))
    psi = ket(1, 1j)
    rho = DensityMatrix(np.outer(psi.vector, psi.vector.conj()))
    assert np.allclose(tuple(bloch_from_density(rho)), (0, 1, 0), atol=1e-12)


def test_bloch_from_density_needs_qubit():
    with pytest.raises(DimensionError):
        bloch_from_density(DensityMatrix(np.eye(3) / 3))


def test_bloch_round_trip_on_ball():
    rng = np.random.default_rng(5)
    for _ in range(200):
        s = rng.normal(size=3)
        s *= rng.uniform(0, 1) ** (1 / 3) / np.linalg.norm(s)
        rho = density_from_bloch(s)
        back = bloch_from_density(rho)
        assert np.allclose(tuple(back), s, atol=1e-10)
        assert np.allclose(density_from_bloch(back).matrix, rho.matrix, atol=1e-10)


def test_overlap_examples_and_symmetry():
    assert overlap(ket(1, 0), ket(1, 0)) == pytest.approx(1.0)
    assert overlap(ket(1, 0), ket(0, 1)) == pytest.approx(0.0)
    assert overlap(ket(1, 0), ket(1, 1j)) == pytest.approx(2**-0.5)
    rng = np.random.default_rng(6)
    for _ in range(50):
        a, b = random_state(4, rng), random_state(4, rng)
        assert overlap(a, b) == pytest.approx(np.conj(overlap(b, a)), abs=1e-15)
        assert abs(overlap(a, b)) <= 1.0 + 1e-12


def test_overlap_dimension_mismatch():
    with pytest.raises(DimensionError):
        overlap(ket(1, 0), ket(1, 0, 0))


def test_apply_examples():
    psi = ket(1, 1j)
    assert np.allclose(apply(np.eye(2), psi).vector, psi.vector)
    assert np.allclose(apply(SIGMA_X, ket(1, 0)).vector, [0, 1])
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.allclose(apply(h, ket(1, 0)).vector, [2**-0.5, 2**-0.5])


def test_apply_preserves_norm():
    rng = np.random.default_rng(7)
    for _ in range(50):
        u = haar_unitary(5, rng)
        psi = PureState(random_state(5, rng))
        assert abs(np.linalg.norm(apply(u, psi).vector) - 1.0) < 1e-12


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply(np.eye(3), ket(1, 0))


def test_state_from_bloch_round_trip():
    rng = np.random.default_rng(8)
    for _ in range(50):
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        psi = state_from_bloch(n)
        rho = DensityMatrix(np.outer(psi.vector, psi.vector.conj()))
        assert np.allclose(bloch_from_density(rho).as_array(), n, atol=1e-12)


def test_wrap_angle_range():
    for x in (-7.0, -np.pi, 0.0, np.pi, 9.0, 4 * np.pi):
        w = wrap_angle(x)
        assert -np.pi < w <= np.pi
        assert abs((x - w) % (2 * np.pi)) < 1e-12 or abs((x - w) % (2 * np.pi) - 2 * np.pi) < 1e-12
