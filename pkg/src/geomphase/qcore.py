"""Complex linear-algebra substrate: pure states, density matrices,
unitaries and the Bloch-sphere correspondence for two-level systems.

All value types are immutable after construction and every operation is a
pure function, so everything here is safe to share between threads.

Conventions fixed once for the whole package:

* computational basis ``|0> = (1, 0)``, ``|1> = (0, 1)``;
* Pauli matrices in the standard convention;
* phases are reported in radians in ``(-pi, pi]``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, DomainError, ValidationError

__all__ = [
    "NORM_ATOL",
    "HERM_ATOL",
    "UNITARY_ATOL",
    "PureState",
    "DensityMatrix",
    "UnitaryOp",
    "BlochVector",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "PAULI",
    "ket",
    "basis_state",
    "wrap_angle",
    "density_from_bloch",
    "bloch_from_density",
    "overlap",
    "apply",
    "state_from_bloch",
    "bloch_from_state",
]

NORM_ATOL = 1e-12
HERM_ATOL = 1e-12
UNITARY_ATOL = 1e-10
_EIG_FLOOR = -1e-10
_BALL_ATOL = 1e-10

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def wrap_angle(angle):
    """Reduce an angle (or array of angles) to the interval ``(-pi, pi]``."""
    wrapped = np.mod(angle, 2.0 * np.pi)
    if np.isscalar(angle) or np.ndim(angle) == 0:
        return float(wrapped - 2.0 * np.pi) if wrapped > np.pi else float(wrapped)
    wrapped = np.asarray(wrapped)
    wrapped[wrapped > np.pi] -= 2.0 * np.pi
    return wrapped


def _freeze(array):
    array.setflags(write=False)
    return array


class PureState:
    """A normalized complex state vector of dimension >= 2.

    Parameters
    ----------
    amplitudes : array_like
        Complex probability amplitudes.  The Euclidean norm must equal 1
        within ``NORM_ATOL``; use :meth:`normalized` to rescale arbitrary
        vectors.
    """

    __slots__ = ("vector",)

    def __init__(self, amplitudes):
        v = np.array(amplitudes, dtype=complex)
        if v.ndim != 1 or v.size < 2:
            raise DimensionError(
                "pure state must be a vector of dimension >= 2, got shape %s"
                % (v.shape,)
            )
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValidationError(
                "state vector norm is %.3e, expected 1 within %.0e"
                % (norm, NORM_ATOL)
            )
        self.vector = _freeze(v)

    @classmethod
    def normalized(cls, amplitudes):
        """Build a state from an arbitrary nonzero vector, rescaling it."""
        v = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return cls(v / norm)

    @property
    def dimension(self):
        return self.vector.size

    def __repr__(self):
        return "PureState(%r)" % (self.vector.tolist(),)


class DensityMatrix:
    """A density matrix: Hermitian, trace one, positive semidefinite."""

    __slots__ = ("matrix",)

    def __init__(self, entries):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DimensionError("density matrix must be square, got %s" % (m.shape,))
        if np.max(np.abs(m - m.conj().T)) > HERM_ATOL:
            raise ValidationError("density matrix is not Hermitian within %.0e" % HERM_ATOL)
        tr = np.trace(m).real
        if abs(tr - 1.0) > HERM_ATOL:
            raise ValidationError("density matrix trace is %.3e, expected 1" % tr)
        if np.linalg.eigvalsh(m).min() < _EIG_FLOOR:
            raise ValidationError("density matrix has a negative eigenvalue")
        self.matrix = _freeze(m)

    @classmethod
    def from_pure(cls, state):
        v = state.vector if isinstance(state, PureState) else np.asarray(state, dtype=complex)
        return cls(np.outer(v, v.conj()))

    @property
    def dimension(self):
        return self.matrix.shape[0]

    def __repr__(self):
        return "DensityMatrix(%r)" % (self.matrix.tolist(),)


class UnitaryOp:
    """A unitary operator, validated via the Frobenius norm of U+U - I."""

    __slots__ = ("matrix",)

    def __init__(self, entries):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError("unitary must be square, got %s" % (m.shape,))
        defect = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))
        if defect > UNITARY_ATOL:
            raise ValidationError(
                "operator is not unitary: |U+U - I|_F = %.3e" % defect
            )
        self.matrix = _freeze(m)

    @property
    def dimension(self):
        return self.matrix.shape[0]

    def __repr__(self):
        return "UnitaryOp(%r)" % (self.matrix.tolist(),)


class BlochVector:
    """A point of the closed Bloch ball, |s| <= 1.

    Unit vectors correspond to pure states, interior points to mixed
    states.
    """

    __slots__ = ("s_x", "s_y", "s_z")

    def __init__(self, s_x, s_y, s_z):
        r2 = s_x * s_x + s_y * s_y + s_z * s_z
        if r2 > 1.0 + _BALL_ATOL:
            raise DomainError("point outside Bloch ball: |s|^2 = %.12f" % r2)
        self.s_x = float(s_x)
        self.s_y = float(s_y)
        self.s_z = float(s_z)

    @classmethod
    def from_array(cls, xyz):
        x, y, z = np.asarray(xyz, dtype=float)
        return cls(x, y, z)

    def as_array(self):
        return np.array([self.s_x, self.s_y, self.s_z])

    @property
    def norm(self):
        return float(np.linalg.norm(self.as_array()))

    def __iter__(self):
        return iter((self.s_x, self.s_y, self.s_z))

    def __repr__(self):
        return "BlochVector(%g, %g, %g)" % (self.s_x, self.s_y, self.s_z)


def ket(*amplitudes):
    """Shorthand constructor, e.g. ``ket(1, 0)`` for |0>."""
    return PureState.normalized(np.asarray(amplitudes, dtype=complex))


def basis_state(index, dimension):
    """The computational basis state |index> in the given dimension."""
    if not 0 <= index < dimension:
        raise DomainError("basis index %d out of range for dimension %d" % (index, dimension))
    v = np.zeros(dimension, dtype=complex)
    v[index] = 1.0
    return PureState(v)


def _as_vector(state):
    if isinstance(state, PureState):
        return state.vector
    return np.asarray(state, dtype=complex)


def density_from_bloch(s):
    """Density matrix of a Bloch-ball point: rho = (I + s . sigma) / 2.

    The 1/2 coefficient is forced by trace normalization.  Raises
    :class:`DomainError` for points outside the closed unit ball.
    """
    if not isinstance(s, BlochVector):
        s = BlochVector.from_array(s)
    rho = 0.5 * (
        np.eye(2, dtype=complex)
        + s.s_x * SIGMA_X
        + s.s_y * SIGMA_Y
        + s.s_z * SIGMA_Z
    )
    return DensityMatrix(rho)


def bloch_from_density(rho):
    """Bloch coordinates s_i = tr(sigma_i rho) of a 2x2 density matrix."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (2, 2):
        raise DimensionError("Bloch coordinates are defined for 2x2 density matrices only")
    coords = [float(np.trace(p @ m).real) for p in PAULI]
    return BlochVector(*coords)


def overlap(a, b):
    """Inner product <a|b> of two states of equal dimension."""
    va, vb = _as_vector(a), _as_vector(b)
    if va.shape != vb.shape:
        raise DimensionError(
            "states have different dimensions: %d vs %d" % (va.size, vb.size)
        )
    return complex(np.vdot(va, vb))


def apply(u, psi):
    """Apply a unitary to a pure state, returning a new pure state."""
    m = u.matrix if isinstance(u, UnitaryOp) else np.asarray(u, dtype=complex)
    v = _as_vector(psi)
    if m.shape[1] != v.size:
        raise DimensionError(
            "operator dimension %d does not match state dimension %d"
            % (m.shape[1], v.size)
        )
    return PureState(m @ v)


def state_from_bloch(s):
    """Pure state at a unit Bloch vector, gauge: real nonnegative |0> part.

    Uses the half-angle parameterization (cos(t/2), e^{i phi} sin(t/2)).
    """
    arr = s.as_array() if isinstance(s, BlochVector) else np.asarray(s, dtype=float)
    r = np.linalg.norm(arr)
    if abs(r - 1.0) > 1e-9:
        raise DomainError("state_from_bloch needs a unit vector, got |s| = %.12f" % r)
    x, y, z = arr / r
    theta = np.arccos(np.clip(z, -1.0, 1.0))
    phi = np.arctan2(y, x)
    return PureState(
        np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])
    )


def bloch_from_state(psi):
    """Unit Bloch vector of a single-qubit pure state."""
    v = _as_vector(psi)
    if v.size != 2:
        raise DimensionError("Bloch vector is defined for qubit states only")
    return bloch_from_density(np.outer(v, v.conj()))
