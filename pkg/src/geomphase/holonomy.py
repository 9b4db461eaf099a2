"""Non-abelian geometric phases: matrix-valued connections over degenerate
frames, path-ordered transport, plaquette field strength, and the
four-level single-qubit model with two dark states.

Transport convention: a frame section Phi_a(s) along a path defines the
anti-Hermitian connection Omega_ab = <Phi_a | d/ds Phi_b>, and the
transported coefficient vector obeys dv/ds = -Omega v, so the holonomy of
a loop is the ordered product of exp(-Omega ds) factors with later steps
applied on the left.  For a one-dimensional frame this reduces to
exp(i * Berry phase) with the adiabatic module's sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import logm

from .errors import (
    DegeneracyError,
    DimensionError,
    DomainError,
    GaugeError,
    SingularityError,
    StepTooLargeError,
    ValidationError,
)
from .adiabatic import HamiltonianPath, evolve_schrodinger
from .qcore import PureState

__all__ = [
    "GAP_FLOOR",
    "DegenerateFrame",
    "WZConnection",
    "HolonomyMatrix",
    "PulseSchedule",
    "FrameFamily",
    "circle_schedule",
    "wz_connection",
    "path_ordered_exp",
    "field_strength_plaquette",
    "usb_hamiltonian",
    "usb_dark_basis",
    "usb_dark_frame",
    "usb_holonomy",
    "usb_gamma_closed_form",
    "usb_full_evolution_check",
    "UsbEvolutionReport",
]

GAP_FLOOR = 1e-6


class DegenerateFrame:
    """Sampled orthonormal bases of a k-dimensional subspace along a path.

    Fields: ``params`` (n,), ``frames`` (n, d, k) with orthonormal columns
    per sample.  Continuity between consecutive samples is checked where a
    connection is derived, not at construction.
    """

    __slots__ = ("params", "frames")

    def __init__(self, params, frames):
        p = np.asarray(params, dtype=float)
        f = np.asarray(frames, dtype=complex)
        if f.ndim != 3 or p.ndim != 1 or p.size != f.shape[0]:
            raise DimensionError("frame samples and params must align")
        if p.size >= 2 and np.min(np.diff(p)) <= 0:
            raise ValidationError("frame parameters must be strictly increasing")
        gram = np.einsum("nia,nib->nab", f.conj(), f)
        eye = np.eye(f.shape[2])
        if np.max(np.abs(gram - eye)) > 1e-10:
            raise ValidationError("frame columns are not orthonormal within 1e-10")
        self.params = p
        self.frames = f

    @property
    def n_samples(self):
        return self.params.size

    @property
    def subspace_dim(self):
        return self.frames.shape[2]


@dataclass(frozen=True)
class WZConnection:
    """Anti-Hermitian connection samples on path segments.

    ``values[k]`` approximates <Phi_a | d/ds Phi_b> at the midpoint of
    segment k (exact skew part of the finite-difference overlap), and
    ``herm_defect[k]`` records the discarded Hermitian remainder per unit
    parameter, a discretization diagnostic.
    """

    midpoints: np.ndarray
    steps: np.ndarray
    values: np.ndarray
    herm_defect: np.ndarray

    def __post_init__(self):
        v = self.values
        if np.max(np.abs(v + np.swapaxes(v.conj(), -1, -2))) > 1e-10:
            raise ValidationError("connection samples are not anti-Hermitian")

    @property
    def n_segments(self):
        return self.values.shape[0]


class HolonomyMatrix:
    """A unitary transport result on the degenerate subspace."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError("holonomy must be a square matrix")
        defect = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))
        if defect > 1e-9:
            raise ValidationError("holonomy is not unitary: defect %.3e" % defect)
        m.setflags(write=False)
        self.matrix = m

    @property
    def dimension(self):
        return self.matrix.shape[0]

    def rotation_angle(self, imag_tol=1e-6):
        """Rotation angle of a real-orthogonal 2x2 holonomy.

        Raises :class:`ValidationError` if the matrix is not close to a
        planar rotation.
        """
        m = self.matrix
        if m.shape != (2, 2):
            raise DimensionError("rotation angle is defined for 2x2 holonomies")
        if np.max(np.abs(m.imag)) > imag_tol:
            raise ValidationError("holonomy is not real within %.0e" % imag_tol)
        r = m.real
        if abs(np.linalg.det(r) - 1.0) > 1e-6:
            raise ValidationError("holonomy is not special orthogonal")
        return float(np.arctan2(r[1, 0], r[0, 0]))

    def __repr__(self):
        return "HolonomyMatrix(%r)" % (self.matrix.tolist(),)


@dataclass(frozen=True)
class PulseSchedule:
    """A control curve t -> (P, Q, S) on [0, duration] (energy units).

    The bright-state gap sqrt(P^2 + Q^2 + S^2) must stay above
    ``gap_floor`` everywhere; closed schedules must return to their
    starting controls within 1e-12.
    """

    evaluator: Callable[[float], np.ndarray]
    duration: float
    closed: bool = False
    gap_floor: float = GAP_FLOOR

    def __post_init__(self):
        if self.closed:
            c0 = np.asarray(self.evaluator(0.0), dtype=float)
            c1 = np.asarray(self.evaluator(self.duration), dtype=float)
            if np.max(np.abs(c0 - c1)) > 1e-12:
                raise ValidationError("closed schedule endpoints do not match")

    def controls(self, times):
        """Controls stacked as an (n, 3) array, gap floor enforced."""
        pts = np.array([self.evaluator(t) for t in np.asarray(times, dtype=float)], dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise DimensionError("schedule evaluator must return (P, Q, S) triples")
        gap2 = np.sum(pts * pts, axis=1)
        if gap2.min() <= self.gap_floor**2:
            raise DegeneracyError(
                "bright-state gap fell to %.3e, below the %.0e floor"
                % (np.sqrt(gap2.min()), self.gap_floor)
            )
        return pts

    def reversed(self):
        """The same loop traversed backwards."""
        ev, T = self.evaluator, self.duration
        return PulseSchedule(lambda t: ev(T - t), T, self.closed, self.gap_floor)


def circle_schedule(center_p, center_s, radius, q, duration=1.0):
    """Closed circular loop in the (P, S) plane at fixed Q.

    A negative radius traverses the circle with the opposite orientation.
    """
    w = 2.0 * np.pi / duration

    def ev(t):
        return np.array(
            [
                center_p + radius * np.cos(w * t),
                q,
                center_s + radius * np.sin(w * t),
            ]
        )

    return PulseSchedule(ev, duration, closed=True)


@dataclass(frozen=True)
class FrameFamily:
    """A deterministic map (u, v) -> orthonormal frame (d, k) columns."""

    evaluator: Callable[[float, float], np.ndarray]

    def frame(self, u, v):
        f = np.asarray(self.evaluator(u, v), dtype=complex)
        if f.ndim != 2:
            raise DimensionError("frame family must return (d, k) arrays")
        return f


def wz_connection(frame):
    """Matrix-valued connection of a sampled degenerate frame.

    Each segment contributes the exact skew part of the finite-difference
    overlap matrix, placed at the segment midpoint (second-order accurate).
    Raises :class:`GaugeError` if the Hermitian part of a consecutive
    overlap matrix is not positive definite (frame discontinuity).
    """
    if frame.n_samples < 2:
        raise DimensionError("need at least two frame samples")
    f = frame.frames
    overlaps = np.einsum("nia,nib->nab", f[:-1].conj(), f[1:])
    herm = 0.5 * (overlaps + np.swapaxes(overlaps.conj(), -1, -2))
    if np.min(np.linalg.eigvalsh(herm)) <= 0:
        raise GaugeError(
            "frame discontinuity: Hermitian part of a consecutive overlap "
            "matrix is not positive definite"
        )
    ds = np.diff(frame.params)
    skew = 0.5 * (overlaps - np.swapaxes(overlaps.conj(), -1, -2))
    values = skew / ds[:, None, None]
    eye = np.eye(f.shape[2])
    defect = np.linalg.norm(herm - eye, axis=(1, 2)) / ds
    mid = 0.5 * (frame.params[:-1] + frame.params[1:])
    return WZConnection(midpoints=mid, steps=ds, values=values, herm_defect=defect)


def path_ordered_exp(connection):
    """Ordered product of per-segment transport exponentials.

    Computes exp(-Omega_k ds_k) for each segment and multiplies with later
    segments on the left, so transport composes like evolution operators.
    """
    if connection.n_segments < 1:
        raise DimensionError("need at least one segment")
    herm = 1j * connection.values
    energies, vectors = np.linalg.eigh(herm)
    phases = np.exp(1j * energies * connection.steps[:, None])
    k = herm.shape[1]
    hol = np.eye(k, dtype=complex)
    for idx in range(connection.n_segments):
        v = vectors[idx]
        step = (v * phases[idx]) @ v.conj().T
        hol = step @ hol
    return HolonomyMatrix(hol)


def _polar_unitary(m):
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def field_strength_plaquette(family, point, delta):
    """Curvature generator from transport around a small square plaquette.

    The loop runs counterclockwise around the square of side ``delta``
    centered at ``point``; each edge transports by the unitarized overlap
    of the corner frames.  Returns -log(W)/delta^2, an anti-Hermitian
    k x k matrix converging to the continuum field strength as
    delta -> 0.  For one-dimensional frames its imaginary part equals half
    of ``plaquette_curvature`` (the latter reports solid angle per area).

    Raises :class:`StepTooLargeError` when the plaquette holonomy has an
    eigenvalue at the log branch cut.
    """
    if delta <= 0:
        raise DomainError("plaquette step must be positive")
    u0, v0 = point
    h = delta / 2.0
    f00 = family.frame(u0 - h, v0 - h)
    f10 = family.frame(u0 + h, v0 - h)
    f11 = family.frame(u0 + h, v0 + h)
    f01 = family.frame(u0 - h, v0 + h)
    w = _polar_unitary(f00.conj().T @ f01)
    w = w @ _polar_unitary(f01.conj().T @ f11)
    w = w @ _polar_unitary(f11.conj().T @ f10)
    w = w @ _polar_unitary(f10.conj().T @ f00)
    eig_angles = np.angle(np.linalg.eigvals(w))
    if np.max(np.abs(eig_angles)) > np.pi - 0.1:
        raise StepTooLargeError(
            "plaquette holonomy has an eigenvalue near the log branch cut; "
            "reduce the plaquette step"
        )
    gen = logm(w)
    gen = 0.5 * (gen - gen.conj().T)
    return -gen / (delta * delta)


def usb_hamiltonian(p, q, s):
    """Four-level Hamiltonian with level 2 coupled to levels 1, 3, 4.

    Couplings P, S, Q respectively;  eigenvalues are
    {0, 0, +-sqrt(P^2 + Q^2 + S^2)}.
    """
    return np.array(
        [
            [0.0, p, 0.0, 0.0],
            [p, 0.0, s, q],
            [0.0, s, 0.0, 0.0],
            [0.0, q, 0.0, 0.0],
        ],
        dtype=complex,
    )


def _dark_section(p, q, s, floor=GAP_FLOOR):
    """Deterministic orthonormal dark-plane basis at one control point.

    In the (level-1, level-3, level-4) coordinates the dark plane is the
    orthogonal complement of n = (P, S, Q).  The section anchors the first
    vector to the projection of the level-4 axis, which is smooth and
    single-valued wherever P^2 + S^2 > 0.
    """
    n = np.array([p, s, q], dtype=float)
    nn = np.linalg.norm(n)
    if p * p + s * s <= floor * floor:
        raise SingularityError(
            "dark-frame section is singular on the P = S = 0 axis"
        )
    n /= nn
    ez = np.array([0.0, 0.0, 1.0])
    b1 = ez - n[2] * n
    b1 /= np.linalg.norm(b1)
    b2 = np.cross(n, b1)
    frame = np.zeros((4, 2), dtype=complex)
    frame[[0, 2, 3], 0] = b1
    frame[[0, 2, 3], 1] = b2
    return frame


def usb_dark_basis(p, q, s, floor=GAP_FLOOR):
    """Numeric null-space basis of the four-level Hamiltonian at one point,
    rotated onto the deterministic smooth section."""
    gap2 = p * p + q * q + s * s
    if gap2 <= floor * floor:
        raise DegeneracyError("bright-state gap collapsed at this control point")
    _, vectors = np.linalg.eigh(usb_hamiltonian(p, q, s))
    raw = vectors[:, 1:3]
    section = _dark_section(p, q, s, floor)
    return raw @ _polar_unitary(raw.conj().T @ section)


def _dark_sections(pts, floor):
    """Vectorized deterministic sections for an (n, 3) control array."""
    n = pts[:, [0, 2, 1]].astype(float)  # (P, S, Q) coordinates
    r2 = n[:, 0] ** 2 + n[:, 1] ** 2
    if r2.min() <= floor * floor:
        raise SingularityError("dark-frame section is singular on the P = S = 0 axis")
    n = n / np.linalg.norm(n, axis=1)[:, None]
    b1 = -n[:, 2:3] * n
    b1[:, 2] += 1.0
    b1 /= np.linalg.norm(b1, axis=1)[:, None]
    b2 = np.cross(n, b1)
    frames = np.zeros((pts.shape[0], 4, 2), dtype=complex)
    frames[:, (0, 2, 3), 0] = b1
    frames[:, (0, 2, 3), 1] = b2
    return frames


def usb_dark_frame(schedule, steps):
    """Dark two-plane frame along a pulse schedule (k = 2).

    Null spaces are computed numerically at ``steps + 1`` sample times and
    gauged onto the deterministic section, so closed schedules produce
    exactly single-valued frames.
    """
    if steps < 2:
        raise DomainError("need at least two steps")
    ts = np.linspace(0.0, schedule.duration, steps + 1)
    pts = schedule.controls(ts)
    mats = np.zeros((pts.shape[0], 4, 4))
    mats[:, 0, 1] = mats[:, 1, 0] = pts[:, 0]
    mats[:, 2, 1] = mats[:, 1, 2] = pts[:, 2]
    mats[:, 3, 1] = mats[:, 1, 3] = pts[:, 1]
    _, vectors = np.linalg.eigh(mats)
    raw = vectors[:, :, 1:3].astype(complex)
    sections = _dark_sections(pts, schedule.gap_floor)
    align = np.swapaxes(raw.conj(), 1, 2) @ sections
    u, _, vh = np.linalg.svd(align)
    frames = raw @ (u @ vh)
    return DegenerateFrame(ts, frames)


def usb_holonomy(schedule, steps):
    """Path-ordered dark-state holonomy of a closed schedule.

    Composition of :func:`usb_dark_frame`, :func:`wz_connection` and
    :func:`path_ordered_exp`; the result is real orthogonal in the section
    basis, and its rotation angle converges to
    :func:`usb_gamma_closed_form` at second order in the step size.
    """
    if not schedule.closed:
        raise DomainError("holonomy is defined for closed schedules")
    frame = usb_dark_frame(schedule, steps)
    return path_ordered_exp(wz_connection(frame))


def usb_gamma_closed_form(schedule, steps):
    """Loop integral of the dark-state rotation one-form.

    Trapezoidal quadrature of

        Q (S dP - P dS) / ((P^2 + S^2) sqrt(P^2 + Q^2 + S^2))

    around the closed schedule; second-order convergent.  Raises
    :class:`SingularityError` if the loop touches P = S = 0.
    """
    if not schedule.closed:
        raise DomainError("the loop integral needs a closed schedule")
    if steps < 2:
        raise DomainError("need at least two quadrature steps")
    ts = np.linspace(0.0, schedule.duration, steps + 1)
    pts = schedule.controls(ts)
    p, q, s = pts[:, 0], pts[:, 1], pts[:, 2]
    r2 = p * p + s * s
    if r2.min() <= schedule.gap_floor**2:
        raise SingularityError("loop touches the singular axis P = S = 0")
    norm = np.sqrt(r2 + q * q)
    wp = q * s / (r2 * norm)
    ws = -q * p / (r2 * norm)
    dp = np.diff(p)
    ds = np.diff(s)
    integrand = 0.5 * (wp[:-1] + wp[1:]) * dp + 0.5 * (ws[:-1] + ws[1:]) * ds
    return float(integrand.sum())


@dataclass(frozen=True)
class UsbEvolutionReport:
    """Comparison of full adiabatic evolution against the dark holonomy."""

    leakage: float
    projected: np.ndarray
    holonomy: np.ndarray
    frobenius_distance: float
    trajectories: tuple = field(repr=False, default=())


def usb_full_evolution_check(schedule, duration, steps, holonomy_steps=20000):
    """Evolve the full four-level system around a closed schedule and
    project the result back onto the initial dark frame.

    The schedule is rescaled to the given duration.  Returns the worst
    leakage out of the dark subspace, the projected 2x2 evolution matrix,
    and its Frobenius distance from the path-ordered holonomy.  The dark
    subspace carries zero energy, so no dynamical phase needs removing;
    agreement improves as the duration grows.
    """
    if not schedule.closed:
        raise DomainError("the evolution check needs a closed schedule")
    scale = schedule.duration / duration
    hpath = HamiltonianPath(
        lambda t: usb_hamiltonian(*schedule.evaluator(t * scale)),
        duration,
        closed=True,
    )
    frame0 = usb_dark_basis(*np.asarray(schedule.evaluator(0.0), dtype=float))
    hol = usb_holonomy(schedule, holonomy_steps)
    projected = np.empty((2, 2), dtype=complex)
    leakage = 0.0
    trajectories = []
    for b in range(2):
        psi0 = PureState(frame0[:, b])
        traj = evolve_schrodinger(hpath, psi0, steps)
        trajectories.append(traj)
        final = traj.states[-1]
        coeff = frame0.conj().T @ final
        projected[:, b] = coeff
        leakage = max(leakage, 1.0 - float(np.vdot(coeff, coeff).real))
    dist = float(np.linalg.norm(projected - hol.matrix))
    return UsbEvolutionReport(
        leakage=leakage,
        projected=projected,
        holonomy=hol.matrix,
        frobenius_distance=dist,
        trajectories=tuple(trajectories),
    )
