"""Adiabatic Schrodinger evolution and Berry phases on parameter loops.

Sign conventions (fixed once, used consistently):

* dynamical phase = -integral E(t) dt, so a stationary eigenstate evolves
  as exp(-i E t) (hbar = 1 throughout);
* Berry connection beta = i <Phi| d/ds |Phi>, so the upper band of a
  spin-1/2 dragged around a cone of solid angle Omega acquires -Omega/2.

The discrete loop phase of the abelian module carries the opposite
(conjugate) sign: for a closed loop of eigenstates,
``berry_phase == -pancharatnam_phase`` mod 2*pi.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .abelian import PhaseValue, pancharatnam_phase
from .errors import (
    AdiabaticityError,
    DegeneracyError,
    DimensionError,
    DomainError,
    GaugeError,
    OpenPathError,
    ValidationError,
)
from .qcore import PureState, wrap_angle

__all__ = [
    "POPULATION_THRESHOLD",
    "HamiltonianPath",
    "Trajectory",
    "PhaseDecomposition",
    "EigenFrame",
    "evolve_schrodinger",
    "eigenframe",
    "phase_decomposition",
    "berry_connection",
    "berry_phase",
    "spin_half_cone_experiment",
    "ConeReport",
]

POPULATION_THRESHOLD = 0.99
_GAP_TOL = 1e-9


@dataclass(frozen=True)
class HamiltonianPath:
    """A time-dependent Hermitian generator H(t) on [0, duration].

    ``evaluator`` maps a time (seconds, hbar = 1) to a Hermitian complex
    matrix.  ``closed`` declares H(0) = H(duration).
    """

    evaluator: Callable[[float], np.ndarray]
    duration: float
    closed: bool = False

    def matrix(self, t):
        h = np.asarray(self.evaluator(t), dtype=complex)
        scale = max(1.0, float(np.max(np.abs(h))))
        if np.max(np.abs(h - h.conj().T)) > 1e-12 * scale:
            raise ValidationError("Hamiltonian evaluator returned a non-Hermitian matrix at t=%g" % t)
        return h

    def sample(self, times):
        """Stack H(t) over an array of times as an (n, d, d) array."""
        mats = [self.matrix(t) for t in np.asarray(times, dtype=float)]
        return np.array(mats)


@dataclass(frozen=True)
class Trajectory:
    """A state history: times (n,) and state rows (n, d)."""

    times: np.ndarray
    states: np.ndarray

    @property
    def final_state(self):
        return PureState(self.states[-1] / np.linalg.norm(self.states[-1]))


@dataclass(frozen=True)
class PhaseDecomposition:
    """Total, dynamical and geometric phase of an evolution (radians).

    ``total = dynamical + geometric`` holds exactly by construction; the
    component values are the physical content.
    """

    total: float
    dynamical: float
    geometric: float
    band_population_min: float = 1.0
    worst_time: float = 0.0


class EigenFrame:
    """Instantaneous eigenvalues and gauge-fixed eigenvectors along a path.

    Fields
    ------
    params : (n,) float array
    energies : (n, d) float array, ascending per sample
    vectors : (n, d, d) complex array, eigenvector columns
    closed : bool
    """

    __slots__ = ("params", "energies", "vectors", "closed")

    def __init__(self, params, energies, vectors, closed=False):
        p = np.asarray(params, dtype=float)
        e = np.asarray(energies, dtype=float)
        v = np.asarray(vectors, dtype=complex)
        if v.ndim != 3 or v.shape[1] != v.shape[2] or e.shape != v.shape[:2] or p.size != v.shape[0]:
            raise DimensionError("inconsistent eigenframe shapes")
        gram = np.einsum("nij,nik->njk", v.conj(), v)
        eye = np.eye(v.shape[1])
        if np.max(np.abs(gram - eye)) > 1e-10:
            raise ValidationError("eigenvector columns are not orthonormal within 1e-10")
        self.params = p
        self.energies = e
        self.vectors = v
        self.closed = bool(closed)

    @property
    def n_samples(self):
        return self.params.size

    @property
    def dimension(self):
        return self.vectors.shape[1]

    def band(self, index):
        """Eigenvector samples of one band as an (n, d) array."""
        return self.vectors[:, :, index]

    def band_gap(self, index):
        """Smallest gap between band ``index`` and its neighbors."""
        gaps = []
        if index > 0:
            gaps.append(np.min(self.energies[:, index] - self.energies[:, index - 1]))
        if index < self.dimension - 1:
            gaps.append(np.min(self.energies[:, index + 1] - self.energies[:, index]))
        return float(min(gaps)) if gaps else np.inf


def _anchor_gauge(vectors, energies):
    """Fix eigenvector phases against a fixed anchor component.

    For each band the anchor row is the component with the largest mean
    modulus across samples; every sample is rephased so that component is
    real positive.  This produces a single-valued smooth section wherever
    the anchor component stays away from zero.
    """
    n, d, _ = vectors.shape
    out = vectors.copy()
    for band in range(d):
        col = out[:, :, band]
        anchor = int(np.argmax(np.mean(np.abs(col), axis=0)))
        amps = col[:, anchor]
        if np.min(np.abs(amps)) < 1e-8:
            gaps = [
                np.min(np.abs(energies[:, other] - energies[:, band]))
                for other in range(d)
                if other != band
            ]
            if gaps and min(gaps) < 1e-6:
                raise DegeneracyError(
                    "band %d crosses a neighbor along the path; use the "
                    "holonomy module for degenerate subspaces" % band
                )
            raise GaugeError(
                "anchor component of band %d vanishes along the path; "
                "no smooth single-valued gauge from this anchor" % band
            )
        out[:, :, band] = col * np.exp(-1j * np.angle(amps))[:, None]
    return out


def eigenframe(hpath, samples, gauge="anchor"):
    """Diagonalize H along the path and gauge-fix the eigenvectors.

    Parameters
    ----------
    hpath : HamiltonianPath
    samples : int
        Number of segments; the frame holds ``samples + 1`` entries
        including both endpoints.
    gauge : {"anchor", "raw"}
        "anchor" (default) rephases each band against a fixed component,
        giving a deterministic single-valued section.
    """
    if samples < 2:
        raise DomainError("need at least two segments")
    ts = np.linspace(0.0, hpath.duration, samples + 1)
    mats = hpath.sample(ts)
    energies, vectors = np.linalg.eigh(mats)
    if gauge == "anchor":
        vectors = _anchor_gauge(vectors, energies)
    elif gauge != "raw":
        raise DomainError("unknown gauge %r" % (gauge,))
    frame = EigenFrame(ts, energies, vectors, closed=hpath.closed)
    if gauge == "anchor":
        links = np.einsum("nij,nij->nj", vectors[:-1].conj(), vectors[1:])
        if np.min(links.real) <= 0:
            raise GaugeError("eigenframe continuity broken: overlap real part <= 0")
    return frame


def evolve_schrodinger(hpath, psi0, steps):
    """Integrate i d/dt |psi> = H(t) |psi> with a norm-preserving scheme.

    Each step applies the exact exponential of the midpoint Hamiltonian,
    so the update is exactly unitary and the global error is second order
    in the step size.

    Returns a :class:`Trajectory` with ``steps + 1`` samples.
    """
    if steps < 2:
        raise DomainError("need at least two steps")
    v0 = psi0.vector if isinstance(psi0, PureState) else np.asarray(psi0, dtype=complex)
    dt = hpath.duration / steps
    mid_times = (np.arange(steps) + 0.5) * dt
    mats = hpath.sample(mid_times)
    if mats.shape[1] != v0.size:
        raise DimensionError("Hamiltonian dimension does not match the state")
    energies, vectors = np.linalg.eigh(mats)
    phases = np.exp(-1j * energies * dt)
    states = np.empty((steps + 1, v0.size), dtype=complex)
    states[0] = v0
    psi = v0
    for k in range(steps):
        v = vectors[k]
        psi = v @ (phases[k] * (v.conj().T @ psi))
        states[k + 1] = psi
    return Trajectory(times=np.linspace(0.0, hpath.duration, steps + 1), states=states)


def phase_decomposition(trajectory, hpath, band, population_threshold=POPULATION_THRESHOLD):
    """Split the phase of an adiabatic trajectory into its components.

    The accumulated local phase is the sum of per-step overlap args; the
    geometric part is the gauge-invariant closure of that accumulation
    against the actual endpoint overlap, and the dynamical part is the
    quadrature -integral E_band dt.  ``total = dynamical + geometric``
    exactly.

    Raises :class:`AdiabaticityError` if the instantaneous band population
    drops below ``population_threshold`` anywhere.
    """
    ts = trajectory.times
    psis = trajectory.states
    mats = hpath.sample(ts)
    energies, vectors = np.linalg.eigh(mats)
    band_vecs = vectors[:, :, band]
    amps = np.einsum("ij,ij->i", band_vecs.conj(), psis)
    populations = np.abs(amps) ** 2 / (np.linalg.norm(psis, axis=1) ** 2)
    worst = int(np.argmin(populations))
    if populations[worst] <= population_threshold:
        raise AdiabaticityError(
            "adiabaticity violated: band %d population %.6f at t=%g"
            % (band, populations[worst], ts[worst]),
            worst_time=float(ts[worst]),
            population=float(populations[worst]),
        )
    step_links = np.einsum("ij,ij->i", psis[:-1].conj(), psis[1:])
    accumulated = float(np.angle(step_links).sum())
    endpoint = float(np.angle(np.vdot(psis[0], psis[-1])))
    geometric = wrap_angle(endpoint - accumulated)
    total = accumulated + geometric
    dynamical = -float(np.trapezoid(energies[:, band], ts))
    return PhaseDecomposition(
        total=total,
        dynamical=dynamical,
        geometric=total - dynamical,
        band_population_min=float(populations[worst]),
        worst_time=float(ts[worst]),
    )


def berry_connection(frame, band):
    """Discrete Berry connection samples beta = i <Phi| d/ds |Phi>.

    Computed as -arg<Phi_k|Phi_k+1> / ds on each segment (one sample per
    segment, manifestly real).  Requires a continuity-gauged frame; raises
    :class:`GaugeError` on sign flips and :class:`DegeneracyError` if the
    band touches a neighbor.
    """
    if frame.band_gap(band) < _GAP_TOL:
        raise DegeneracyError(
            "band %d crosses a neighbor (gap < %g); use the holonomy module "
            "for degenerate subspaces" % (band, _GAP_TOL)
        )
    col = frame.band(band)
    links = np.einsum("ij,ij->i", col[:-1].conj(), col[1:])
    if np.min(links.real) <= 0:
        raise GaugeError("frame is not continuity gauged: consecutive overlap has non-positive real part")
    ds = np.diff(frame.params)
    return -np.angle(links) / ds


def berry_phase(frame, band):
    """Loop integral of the Berry connection over a closed frame.

    Implemented as the cyclic sum of overlap args (the left-endpoint
    quadrature of the discrete connection), which is exactly gauge
    invariant mod 2*pi: rephasing every frame sample independently moves
    the result by a multiple of 2*pi only.
    """
    if not frame.closed:
        raise OpenPathError("Berry phase is defined on closed parameter loops")
    col = frame.band(band)
    ring = np.vstack([col, col[:1]])
    links = np.einsum("ij,ij->i", ring[:-1].conj(), ring[1:])
    if np.min(np.abs(links)) <= 1e-12:
        raise DegeneracyError("orthogonal consecutive eigenvectors in the loop")
    return PhaseValue.wrapped(-float(np.angle(links).sum()))


@dataclass(frozen=True)
class ConeReport:
    """Result bundle of the driven spin-1/2 cone experiment.

    ``pancharatnam`` is the discrete loop phase of the eigenstate samples;
    with the package conventions it equals ``-berry_phase`` mod 2*pi.
    """

    berry_phase: float
    dynamical_phase: float
    geometric_phase: float
    pancharatnam: float
    adiabaticity_residual: float
    solid_angle: float


def _cone_hamiltonian(theta, b_field, duration):
    def h(t):
        phi = 2.0 * np.pi * t / duration
        n = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
        return b_field * np.array(
            [[n[2], n[0] - 1j * n[1]], [n[0] + 1j * n[1], -n[2]]], dtype=complex
        )
    return HamiltonianPath(h, duration, closed=True)


def spin_half_cone_experiment(theta, duration, steps, b_field=1.0, frame_samples=4096):
    """Drive a spin-1/2 around a cone of polar angle theta and compare
    three phase estimates.

    The field direction sweeps azimuth 0 to 2*pi at fixed polar angle; the
    state starts in the upper band.  Reports the connection-integral Berry
    phase, the trajectory-derived phases, the discrete loop phase of the
    eigenstate samples, and the worst-case band leakage.
    """
    if not 0.0 < theta < np.pi:
        raise DomainError("polar angle must lie strictly inside (0, pi)")
    if duration <= 0:
        raise DomainError("duration must be positive")
    hpath = _cone_hamiltonian(theta, b_field, duration)
    frame = eigenframe(hpath, frame_samples)
    upper = 1
    gamma = berry_phase(frame, upper)
    psi0 = PureState(frame.vectors[0][:, upper])
    traj = evolve_schrodinger(hpath, psi0, steps)
    decomp = phase_decomposition(traj, hpath, upper)
    ring = frame.band(upper)
    panch = pancharatnam_phase(ring)
    return ConeReport(
        berry_phase=gamma.radians,
        dynamical_phase=decomp.dynamical,
        geometric_phase=decomp.geometric,
        pancharatnam=panch.radians,
        adiabaticity_residual=1.0 - decomp.band_population_min,
        solid_angle=2.0 * np.pi * (1.0 - np.cos(theta)),
    )
