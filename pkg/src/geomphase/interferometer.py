"""Two-port interferometer with internal degrees of freedom.

The beam pair spans a two-dimensional port space {|0>, |1>}; particles
carry an N-dimensional internal state.  A variable U(1) phase chi sits on
the |0> arm and an internal operator U_i on the |1> arm.  The output
intensity along the |0> port follows

    I(chi) = (1 + |tr(U_i rho0)| cos(chi - arg tr(U_i rho0))) / 2

so a fringe scan measures the phase and visibility of tr(U_i rho0) for
any internal input, mixed or pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abelian import ORTHOGONAL_TOL, PhaseValue, _state_matrix
from .errors import (
    DimensionError,
    DomainError,
    OrthogonalLinkError,
    ValidationError,
    VisibilityError,
)
from .qcore import DensityMatrix, UnitaryOp

__all__ = [
    "MZConfig",
    "FringeScan",
    "mirror_operator",
    "beamsplitter_operator",
    "arm_phase_operator",
    "composite_unitary",
    "mz_output",
    "intensity",
    "fringe_scan",
    "extract_phase_visibility",
    "projective_sequence_phase",
]

_MIRROR = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SPLITTER = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def _internal_matrix(u):
    if isinstance(u, UnitaryOp):
        return u.matrix
    m = np.asarray(u, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError("internal operator must be square")
    return m


def _internal_density(rho):
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return DensityMatrix(rho).matrix


@dataclass(frozen=True)
class MZConfig:
    """One interferometer setting: arm phase chi, internal operator on the
    |1> arm, and the internal input state."""

    chi: float
    u_internal: object
    rho0: object

    def matrices(self):
        u = _internal_matrix(self.u_internal)
        rho = _internal_density(self.rho0)
        if u.shape != rho.shape:
            raise DimensionError(
                "internal operator and state dimensions differ: %s vs %s"
                % (u.shape, rho.shape)
            )
        return u, rho


class FringeScan:
    """An intensity scan over strictly increasing chi values.

    Intensities are stored in arbitrary units normalized to unit mean, so
    scans from different normalization conventions compare directly.
    """

    __slots__ = ("chis", "intensities")

    def __init__(self, chis, intensities):
        c = np.asarray(chis, dtype=float)
        i = np.asarray(intensities, dtype=float)
        if c.ndim != 1 or c.shape != i.shape:
            raise DimensionError("chi and intensity arrays must match")
        if c.size >= 2 and np.min(np.diff(c)) <= 0:
            raise ValidationError("chi values must be strictly increasing")
        if np.any(i < -1e-12):
            raise ValidationError("intensities must be nonnegative")
        mean = i.mean()
        if mean <= 0:
            raise ValidationError("cannot normalize an all-zero scan")
        self.chis = c
        self.intensities = i / mean

    @property
    def n_samples(self):
        return self.chis.size

    @property
    def span(self):
        return float(self.chis[-1] - self.chis[0])


def mirror_operator(n_internal):
    """Port swap, identity on the internal space."""
    return np.kron(_MIRROR, np.eye(n_internal, dtype=complex))


def beamsplitter_operator(n_internal):
    """Symmetric 50/50 splitter, identity on the internal space."""
    return np.kron(_SPLITTER, np.eye(n_internal, dtype=complex))


def arm_phase_operator(chi, n_internal):
    """U(1) phase on the |0> arm, identity on the internal space."""
    return np.kron(np.diag([np.exp(1j * chi), 1.0]), np.eye(n_internal, dtype=complex))


def composite_unitary(cfg):
    """Block operator: e^{i chi} on the |0> arm, U_i on the |1> arm.

    Returns a 2N x 2N array; it is unitary exactly when the internal
    operator is (projective internal operators are allowed by the same
    block assembly and simply give a non-unitary composite).
    """
    u, rho = cfg.matrices()
    n = u.shape[0]
    block = np.zeros((2 * n, 2 * n), dtype=complex)
    block[:n, :n] = np.exp(1j * cfg.chi) * np.eye(n)
    block[n:, n:] = u
    return block


def mz_output(cfg):
    """Output density operator of the full interferometer.

    The input |0><0| x rho0 passes splitter, composite arm operator,
    mirror, splitter; the return value is the conjugated matrix (a valid
    density matrix whenever the internal operator is unitary).
    """
    u, rho = cfg.matrices()
    n = u.shape[0]
    rho_in = np.zeros((2 * n, 2 * n), dtype=complex)
    rho_in[:n, :n] = rho
    pipeline = (
        beamsplitter_operator(n)
        @ mirror_operator(n)
        @ composite_unitary(cfg)
        @ beamsplitter_operator(n)
    )
    return pipeline @ rho_in @ pipeline.conj().T


def intensity(cfg):
    """Output intensity along the |0> port.

    Computed as the trace of the |0> block of :func:`mz_output`;
    normalized so the balanced configuration (identity internal operator,
    chi = 0) scores exactly 1.
    """
    u, _ = cfg.matrices()
    n = u.shape[0]
    out = mz_output(cfg)
    return float(np.trace(out[:n, :n]).real)


def fringe_scan(u_internal, rho0, chis):
    """Scan the arm phase over the given strictly increasing values."""
    values = [intensity(MZConfig(c, u_internal, rho0)) for c in np.asarray(chis, dtype=float)]
    return FringeScan(chis, values)


def extract_phase_visibility(scan, visibility_floor=1e-9):
    """Fit a + b cos(chi - phase) to a fringe scan by linear least squares.

    Returns ``(phase, visibility)`` with visibility = b / a.  Exact for
    noiseless scans.  Raises :class:`VisibilityError` when the fitted
    fringe amplitude is numerically zero, where the phase is meaningless.
    """
    if scan.n_samples < 8:
        raise DomainError("need at least 8 samples to fit a fringe")
    if scan.span < 2.0 * np.pi * (1.0 - 1e-9):
        raise DomainError("scan must span at least one full 2*pi period")
    design = np.column_stack(
        [np.ones_like(scan.chis), np.cos(scan.chis), np.sin(scan.chis)]
    )
    coeffs, *_ = np.linalg.lstsq(design, scan.intensities, rcond=None)
    a, p, q = coeffs
    amplitude = float(np.hypot(p, q))
    if a <= 0 or amplitude / a < visibility_floor:
        raise VisibilityError(
            "fringe amplitude is zero within %.0e of the offset; phase undefined"
            % visibility_floor
        )
    return PhaseValue.wrapped(np.arctan2(q, p)), min(amplitude / a, 1.0)


def projective_sequence_phase(states, n_chi=64):
    """Phase accumulated by filtering through a sequence of states.

    Builds the product of projectors onto the given states (applied in
    sequence order), inserts it as the internal arm operator with the
    first state as input, and returns the fringe phase extracted from a
    chi scan.  Equals :func:`geomphase.abelian.pancharatnam_phase` of the
    same sequence.
    """
    m = _state_matrix(states)
    if m.shape[0] < 2:
        raise DimensionError("need at least two states")
    nxt = np.roll(m, -1, axis=0)
    links = np.einsum("ij,ij->i", m.conj(), nxt)
    if np.min(np.abs(links)) <= ORTHOGONAL_TOL:
        raise OrthogonalLinkError("sequence contains an orthogonal link")
    op = np.eye(m.shape[1], dtype=complex)
    for row in m:
        op = op @ np.outer(row, row.conj())
    rho0 = np.outer(m[0], m[0].conj())
    chis = np.linspace(0.0, 2.0 * np.pi, max(int(n_chi), 9))
    scan = fringe_scan(op, DensityMatrix(rho0), chis)
    phase, _ = extract_phase_visibility(scan)
    return phase
