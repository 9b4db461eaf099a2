"""Foucault pendulum: the classical face of the geometric phase.

Small-swing dynamics in the rotating frame at colatitude theta:

    x'' - 2 W cos(theta) y' + w^2 x = 0
    y'' + 2 W cos(theta) x' + w^2 y = 0

with w the swing frequency and W the frame rotation rate (the quadratic
centrifugal term is dropped).  In z = x + iy the adiabatic solution is
x0 exp(-i W cos(theta) t) exp(-i w t): a fast swing multiplied by a slow
swing-plane rotation at rate W cos(theta).  Over one full frame rotation
the plane turns by 2 pi cos(theta), equivalently 2 pi (1 - cos(theta))
mod 2 pi.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, ResolutionError, ValidationError

__all__ = [
    "PendulumParams",
    "PendulumTrajectory",
    "foucault_integrate",
    "foucault_closed_form",
    "precession_angle",
]


@dataclass(frozen=True)
class PendulumParams:
    """Pendulum and frame parameters.

    mass (kg) drops out of the equations of motion and is kept only for
    completeness; omega is the swing frequency (rad/s), rotation_rate the
    frame rotation rate (rad/s), colatitude in [0, pi].
    """

    omega: float
    rotation_rate: float
    colatitude: float
    mass: float = 1.0

    def __post_init__(self):
        if self.omega <= 0:
            raise DomainError("swing frequency must be positive")
        if self.rotation_rate < 0:
            raise DomainError("rotation rate must be nonnegative")
        if not 0.0 <= self.colatitude <= np.pi:
            raise DomainError("colatitude must lie in [0, pi]")

    @property
    def coriolis(self):
        return self.rotation_rate * np.cos(self.colatitude)


@dataclass(frozen=True)
class PendulumTrajectory:
    """Sampled planar trajectory: times (s), positions (m), velocities (m/s)."""

    times: np.ndarray
    x: np.ndarray
    y: np.ndarray
    vx: np.ndarray
    vy: np.ndarray

    def __post_init__(self):
        if not (self.times.shape == self.x.shape == self.y.shape == self.vx.shape == self.vy.shape):
            raise DimensionError("trajectory arrays must share a shape")
        if self.times.size >= 2 and np.min(np.diff(self.times)) <= 0:
            raise ValidationError("trajectory times must be strictly increasing")

    def positions_complex(self):
        return self.x + 1j * self.y

    def energy(self, omega):
        """Quadratic invariant (v^2 + omega^2 r^2) / 2 per unit mass."""
        return 0.5 * (self.vx**2 + self.vy**2) + 0.5 * omega**2 * (self.x**2 + self.y**2)


def _drift_matrix(params):
    w2 = params.omega**2
    c = 2.0 * params.coriolis
    return np.array(
        [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [-w2, 0.0, 0.0, c],
            [0.0, -w2, -c, 0.0],
        ]
    )


def foucault_integrate(params, x0, duration, steps, v0=None):
    """Integrate the swing with a time-reversible second-order scheme.

    Uses the implicit midpoint (Cayley) step, which conserves the
    quadratic energy invariant of this linear system to round-off.  The
    pendulum starts at (x0, 0); ``v0`` is an optional (vx, vy) initial
    velocity, default at rest (a planar swing).

    Raises :class:`ResolutionError` when omega * duration / steps >= 0.1.
    """
    if duration <= 0 or steps < 2:
        raise DomainError("need a positive duration and at least two steps")
    dt = duration / steps
    if params.omega * dt >= 0.1:
        raise ResolutionError(
            "step too coarse: omega * dt = %.3f, need < 0.1" % (params.omega * dt)
        )
    a = _drift_matrix(params)
    eye = np.eye(4)
    step = np.linalg.solve(eye - 0.5 * dt * a, eye + 0.5 * dt * a)
    u = np.zeros(4)
    u[0] = x0
    if v0 is not None:
        u[2], u[3] = v0
    out = np.empty((steps + 1, 4))
    out[0] = u
    for k in range(steps):
        u = step @ u
        out[k + 1] = u
    times = np.linspace(0.0, duration, steps + 1)
    return PendulumTrajectory(times, out[:, 0], out[:, 1], out[:, 2], out[:, 3])


def foucault_closed_form(params, x0, t):
    """Adiabatic product solution x0 exp(-i W cos(theta) t) exp(-i omega t).

    Valid for omega >> rotation_rate; warns when the ratio drops below 10.
    The matching initial condition is the circular swing
    (x, y, vx, vy) = (x0, 0, 0, -(omega + W cos(theta)) x0).
    """
    if params.rotation_rate > 0 and params.omega / params.rotation_rate < 10:
        warnings.warn(
            "closed form assumes omega >> rotation rate; ratio is %.2f"
            % (params.omega / params.rotation_rate),
            stacklevel=2,
        )
    t = np.asarray(t, dtype=float)
    z = x0 * np.exp(-1j * params.coriolis * t) * np.exp(-1j * params.omega * t)
    return complex(z) if z.ndim == 0 else z


def _dominant_frequency(times, x, y):
    """Peak frequency of the swing signal via the discrete spectrum."""
    z = x + 1j * y
    z = z - z.mean()
    n = z.size
    spectrum = np.abs(np.fft.fft(z * np.hanning(n)))
    freqs = np.fft.fftfreq(n, d=times[1] - times[0])
    peak = int(np.argmax(spectrum))
    return abs(2.0 * np.pi * freqs[peak])


def precession_angle(trajectory, window_periods=2.0):
    """Total swing-plane rotation extracted from the trajectory envelope.

    The swing-plane orientation is the principal axis of a sliding-window
    second-moment matrix (window = two swing periods); successive axis
    angles are unwrapped modulo pi and the accumulated magnitude is
    returned.  Requires a trajectory of at least ten swing periods.
    """
    times = trajectory.times
    omega = _dominant_frequency(times, trajectory.x, trajectory.y)
    if omega == 0:
        raise DomainError("could not detect a swing frequency")
    period = 2.0 * np.pi / omega
    span = times[-1] - times[0]
    if span < 10.0 * period:
        raise DomainError(
            "trajectory spans %.1f swing periods, need at least 10" % (span / period)
        )
    window = window_periods * period
    dt = times[1] - times[0]
    w_len = max(int(round(window / dt)), 4)
    stride = max(w_len // 2, 1)
    angles = []
    centers = []
    for start in range(0, times.size - w_len, stride):
        xs = trajectory.x[start : start + w_len]
        ys = trajectory.y[start : start + w_len]
        mxx = float(np.dot(xs, xs))
        myy = float(np.dot(ys, ys))
        mxy = float(np.dot(xs, ys))
        angles.append(0.5 * np.arctan2(2.0 * mxy, mxx - myy))
        centers.append(times[start] + 0.5 * w_len * dt)
    angles = np.array(angles)
    centers = np.array(centers)
    if angles.size < 2:
        raise DomainError("trajectory too short for the sliding window")
    # the axis is defined mod pi; unwrap accordingly, then rescale the
    # window-center coverage to the full span
    steps = np.diff(angles)
    steps = (steps + np.pi / 2.0) % np.pi - np.pi / 2.0
    rate = steps.sum() / (centers[-1] - centers[0])
    return float(abs(rate) * span)
