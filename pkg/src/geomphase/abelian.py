"""Discrete and continuous abelian geometric phases.

The central object is the cyclic overlap product

    arg{ <psi_1|psi_2> <psi_2|psi_3> ... <psi_n|psi_1> }

which is exactly invariant under independent rephasing of every state.
With the orientation convention used throughout this package
(counterclockwise loops seen from outside the Bloch sphere have positive
solid angle), the cyclic-product phase of a geodesic polygon equals
+Omega/2.  The adiabatic module's Berry phase carries the opposite,
dynamical sign (-Omega/2 for the upper band); the two conventions are
conjugate and both are documented where they meet.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    DegenerateArcError,
    DimensionError,
    DomainError,
    OpenPathError,
    OrthogonalLinkError,
    ValidationError,
)
from .qcore import BlochVector, PureState, wrap_angle

__all__ = [
    "ORTHOGONAL_TOL",
    "PhaseValue",
    "LoopPhase",
    "StatePath",
    "TwoParamFamily",
    "pancharatnam_phase",
    "parallel_transport_defect",
    "geometric_phase_integral",
    "geodesic_path",
    "geodesic_polygon_path",
    "solid_angle",
    "plaquette_curvature",
]

ORTHOGONAL_TOL = 1e-9
_CLOSURE_TOL = 1e-8


@dataclass(frozen=True)
class PhaseValue:
    """A phase in radians, reduced to the interval (-pi, pi]."""

    radians: float

    def __post_init__(self):
        r = float(self.radians)
        if not (-np.pi < r <= np.pi + 1e-15):
            raise ValidationError("phase %.6f rad outside (-pi, pi]" % r)
        object.__setattr__(self, "radians", min(r, np.pi))

    @classmethod
    def wrapped(cls, radians):
        return cls(wrap_angle(float(radians)))

    def __float__(self):
        return self.radians


class LoopPhase(NamedTuple):
    """A loop phase reduced mod 2*pi together with its winding count.

    The unreduced accumulated phase is ``phase.radians + 2*pi*winding``.
    """

    phase: PhaseValue
    winding: int

    @property
    def total(self):
        return self.phase.radians + 2.0 * np.pi * self.winding


def _state_matrix(states):
    """Coerce a sequence of PureState / vectors into an (n, d) array."""
    rows = []
    for s in states:
        rows.append(s.vector if isinstance(s, PureState) else np.asarray(s, dtype=complex))
    if not rows:
        raise DimensionError("empty state sequence")
    dim = rows[0].size
    for r in rows:
        if r.ndim != 1 or r.size != dim:
            raise DimensionError("all states must share one dimension")
    return np.array(rows)


class StatePath:
    """A sampled one-parameter family of pure states.

    Parameters
    ----------
    params : array_like
        Strictly increasing parameter values, one per sample.
    states : sequence of PureState or (n, d) complex array
        Normalized states, one row per sample.
    closed : bool
        Whether the path is a loop.  Closed paths must end where they
        started up to a global phase.
    """

    __slots__ = ("params", "states", "closed")

    def __init__(self, params, states, closed=False):
        p = np.asarray(params, dtype=float)
        m = states if isinstance(states, np.ndarray) else _state_matrix(states)
        m = np.asarray(m, dtype=complex)
        if p.ndim != 1 or m.ndim != 2 or p.size != m.shape[0]:
            raise DimensionError("params and states must have matching sample counts")
        if p.size >= 2 and np.min(np.diff(p)) <= 0:
            raise ValidationError("path parameters must be strictly increasing")
        norms = np.linalg.norm(m, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise ValidationError("path contains non-normalized states")
        if closed and p.size >= 2:
            closure = abs(np.vdot(m[0], m[-1]))
            if closure < 1.0 - _CLOSURE_TOL:
                raise ValidationError(
                    "closed path does not return to its start: |<first|last>| = %.12f"
                    % closure
                )
        self.params = p
        self.states = m
        self.closed = bool(closed)
        self.params.setflags(write=False)
        self.states.setflags(write=False)

    @property
    def n_samples(self):
        return self.params.size

    @property
    def dimension(self):
        return self.states.shape[1]


@dataclass(frozen=True)
class TwoParamFamily:
    """A deterministic map (s, s') -> PureState over a rectangular domain."""

    evaluator: Callable[[float, float], PureState]

    def state(self, s, s_prime):
        psi = self.evaluator(s, s_prime)
        v = psi.vector if isinstance(psi, PureState) else np.asarray(psi, dtype=complex)
        return v


def _cyclic_link_args(matrix):
    """Per-link args of the cyclic overlap product of the given samples.

    Raises OrthogonalLinkError if any link modulus falls at or below
    ORTHOGONAL_TOL.
    """
    nxt = np.roll(matrix, -1, axis=0)
    links = np.einsum("ij,ij->i", matrix.conj(), nxt)
    moduli = np.abs(links)
    if moduli.min() <= ORTHOGONAL_TOL:
        k = int(np.argmin(moduli))
        raise OrthogonalLinkError(
            "overlap between samples %d and %d has modulus %.2e; the phase "
            "through an orthogonal link is undefined" % (k, (k + 1) % len(matrix), moduli[k])
        )
    return np.angle(links)


def pancharatnam_phase(states):
    """Phase of the cyclic product of overlaps of a state sequence.

    Parameters
    ----------
    states : sequence of PureState or (n, d) array
        At least two states of a common dimension.

    Returns
    -------
    PhaseValue
        arg of <psi_1|psi_2><psi_2|psi_3>...<psi_n|psi_1>, exactly
        invariant under independent rephasing of each input.
    """
    m = states if isinstance(states, np.ndarray) else _state_matrix(states)
    if m.shape[0] < 2:
        raise DimensionError("need at least two states for a cyclic product")
    args = _cyclic_link_args(np.asarray(m, dtype=complex))
    return PhaseValue.wrapped(args.sum())


def parallel_transport_defect(path):
    """Largest per-step violation of the transport condition Im<psi|dpsi> = 0.

    Returns max_k |Im <psi(s_k)|psi(s_k+1)>| / (s_k+1 - s_k); zero for a
    parallel-transported path.
    """
    if path.n_samples < 2:
        raise DimensionError("need at least two samples to measure transport")
    links = np.einsum("ij,ij->i", path.states[:-1].conj(), path.states[1:])
    ds = np.diff(path.params)
    return float(np.max(np.abs(links.imag) / ds))


def geometric_phase_integral(path):
    """Accumulated loop phase of a closed path, with winding count.

    The per-link args are summed before reduction, so loops whose
    accumulated phase exceeds pi are representable: the result carries the
    reduced phase and an integer winding.  Converges to
    ``pancharatnam_phase`` of the dense sample sequence (first order or
    better in the sample spacing).
    """
    if not path.closed:
        raise OpenPathError("loop phase is gauge invariant only on closed paths")
    if path.n_samples < 2:
        return LoopPhase(PhaseValue(0.0), 0)
    args = _cyclic_link_args(path.states)
    total = float(args.sum())
    reduced = wrap_angle(total)
    winding = int(np.round((total - reduced) / (2.0 * np.pi)))
    return LoopPhase(PhaseValue(reduced), winding)


def _geodesic_frame(a, b):
    """Orthonormal frame (a, c) and angle for the geodesic from a to b."""
    z = np.vdot(a, b)
    if abs(z) <= ORTHOGONAL_TOL:
        raise OrthogonalLinkError(
            "geodesic between orthogonal endpoints is not unique"
        )
    b_aligned = b * np.exp(-1j * np.angle(z))
    cos_t = np.clip(abs(z), 0.0, 1.0)
    theta = float(np.arccos(cos_t))
    residual = b_aligned - cos_t * a
    rnorm = np.linalg.norm(residual)
    if rnorm < 1e-14:
        return theta, a, np.zeros_like(a)
    return theta, a, residual / rnorm


def geodesic_path(a, b, n):
    """Sample the Fubini-Study geodesic from a to b at n points.

    In the gauge used here the interpolant is
    ``cos(t theta) a + sin(t theta) c`` with real coefficients, which makes
    <psi|dpsi> vanish identically: the samples are parallel transported.
    Endpoints equal the inputs up to a global phase.
    """
    va = a.vector if isinstance(a, PureState) else np.asarray(a, dtype=complex)
    vb = b.vector if isinstance(b, PureState) else np.asarray(b, dtype=complex)
    if va.shape != vb.shape:
        raise DimensionError("geodesic endpoints must share a dimension")
    if n < 2:
        raise DomainError("need at least two samples")
    theta, e0, e1 = _geodesic_frame(va, vb)
    t = np.linspace(0.0, 1.0, n)
    states = np.cos(t * theta)[:, None] * e0 + np.sin(t * theta)[:, None] * e1
    return StatePath(t, states, closed=False)


def geodesic_polygon_path(vertices, n, closed=True):
    """Closed path tracing geodesic arcs through the given vertex states.

    Samples are uniform in accumulated Fubini-Study arc length, so polygon
    corners fall between samples unless the counts align.  The returned
    path has n + 1 samples (the last one returns to the first vertex up to
    a global phase).
    """
    verts = _state_matrix(vertices)
    if verts.shape[0] < 2:
        raise DimensionError("polygon needs at least two vertices")
    if n < verts.shape[0]:
        raise DomainError("need at least one sample per vertex")
    loop = np.vstack([verts, verts[:1]]) if closed else verts
    segments = []
    lengths = []
    for k in range(loop.shape[0] - 1):
        theta, e0, e1 = _geodesic_frame(loop[k], loop[k + 1])
        segments.append((theta, e0, e1))
        lengths.append(theta)
    lengths = np.array(lengths)
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    total = cum[-1]
    if total == 0.0:
        states = np.repeat(verts[:1], n + 1, axis=0)
        return StatePath(np.linspace(0.0, 1.0, n + 1), states, closed=closed)
    s = np.linspace(0.0, total, n + 1)
    seg_index = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(segments) - 1)
    states = np.empty((n + 1, verts.shape[1]), dtype=complex)
    for i, (si, k) in enumerate(zip(s, seg_index)):
        theta, e0, e1 = segments[k]
        local = 0.0 if theta == 0.0 else (si - cum[k]) / theta
        ang = local * theta
        states[i] = np.cos(ang) * e0 + np.sin(ang) * e1
    norms = np.linalg.norm(states, axis=1)
    states /= norms[:, None]
    return StatePath(s / total, states, closed=closed)


def _triangle_solid_angle(a, b, c):
    """Signed solid angle of a geodesic triangle on the unit sphere."""
    numer = float(np.dot(a, np.cross(b, c)))
    denom = 1.0 + float(np.dot(a, b)) + float(np.dot(b, c)) + float(np.dot(c, a))
    if numer == 0.0 and denom == 0.0:
        raise DegenerateArcError("degenerate spherical triangle")
    return 2.0 * float(np.arctan2(numer, denom))


def solid_angle(vertices):
    """Oriented solid angle of a geodesic polygon on the unit sphere.

    Vertices are unit Bloch vectors; the polygon is fan-triangulated from
    the first vertex and each triangle contributes its signed spherical
    excess.  Counterclockwise orientation seen from outside the sphere is
    positive; simple polygons land in (-2*pi, 2*pi].
    """
    pts = []
    for v in vertices:
        arr = v.as_array() if isinstance(v, BlochVector) else np.asarray(v, dtype=float)
        r = np.linalg.norm(arr)
        if abs(r - 1.0) > 1e-9:
            raise DomainError("solid angle vertices must be unit vectors")
        pts.append(arr / r)
    if len(pts) < 3:
        raise DimensionError("need at least three vertices")
    pts = np.array(pts)
    ring = np.vstack([pts, pts[:1]])
    dots = np.einsum("ij,ij->i", ring[:-1], ring[1:])
    if dots.min() < -1.0 + 1e-12:
        raise DegenerateArcError(
            "consecutive vertices are antipodal; the arc between them is not unique"
        )
    total = 0.0
    for k in range(1, len(pts) - 1):
        total += _triangle_solid_angle(pts[0], pts[k], pts[k + 1])
    return total


def plaquette_curvature(family, point, delta):
    """Local curvature from the phase around a small square plaquette.

    The loop phase around the plaquette centered at ``point`` with side
    ``delta`` is converted to a solid angle (twice the phase, matching the
    Stokes factor of the discrete loop phase) and divided by the parameter
    area ``delta**2``.  Central construction: error O(delta**2).

    For the Bloch sphere sampled in area-uniform coordinates this returns
    the unit curvature of the sphere.
    """
    if delta <= 0:
        raise DomainError("plaquette step must be positive")
    s, sp = point
    h = delta / 2.0
    corners = [
        family.state(s - h, sp - h),
        family.state(s + h, sp - h),
        family.state(s + h, sp + h),
        family.state(s - h, sp + h),
    ]
    phase = pancharatnam_phase(np.array(corners))
    return 2.0 * phase.radians / (delta * delta)
