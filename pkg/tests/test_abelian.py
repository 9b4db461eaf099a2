import numpy as np
import pytest
from scipy.special import gammaln

from geomphase import (
    StatePath,
    TwoParamFamily,
    geodesic_path,
    geodesic_polygon_path,
    geometric_phase_integral,
    ket,
    pancharatnam_phase,
    parallel_transport_defect,
    plaquette_curvature,
    solid_angle,
    state_from_bloch,
    bloch_from_state,
)
from geomphase.errors import (
    DegenerateArcError,
    DimensionError,
    DomainError,
    OpenPathError,
    OrthogonalLinkError,
    ValidationError,
)

from helpers import random_state, random_unit_vector

OCTANT = [ket(1, 0), ket(1, 1), ket(1, 1j)]


def octant_loop(n):
    return geodesic_polygon_path(OCTANT, n)


def test_pancharatnam_octant():
    # overlaps (1/sqrt2) * (1+i)/2 * (1/sqrt2) = (1+i)/4, arg = pi/4
    assert pancharatnam_phase(OCTANT).radians == pytest.approx(np.pi / 4, abs=1e-12)


def test_pancharatnam_repeated_state_is_zero():
    psi = ket(0.3, 0.5j, 0.81)
    assert pancharatnam_phase([psi, psi, psi]).radians == 0.0


def test_pancharatnam_gauge_invariance():
    rng = np.random.default_rng(0)
    base = pancharatnam_phase(OCTANT).radians
    for _ in range(200):
        rephased = [s.vector * np.exp(1j * rng.uniform(-np.pi, np.pi)) for s in OCTANT]
        assert pancharatnam_phase(rephased).radians == pytest.approx(base, abs=1e-12)


def test_pancharatnam_cyclic_invariance():
    rng = np.random.default_rng(1)
    states = [random_state(3, rng) for _ in range(5)]
    base = pancharatnam_phase(states).radians
    for shift in range(1, 5):
        rotated = states[shift:] + states[:shift]
        assert pancharatnam_phase(rotated).radians == pytest.approx(base, abs=1e-12)


def test_pancharatnam_reversal_negates():
    base = pancharatnam_phase(OCTANT).radians
    assert pancharatnam_phase(OCTANT[::-1]).radians == pytest.approx(-base, abs=1e-12)


def test_pancharatnam_orthogonal_link():
    with pytest.raises(OrthogonalLinkError):
        pancharatnam_phase([ket(1, 0), ket(0, 1), ket(1, 1)])


def test_pancharatnam_needs_two_states():
    with pytest.raises(DimensionError):
        pancharatnam_phase([ket(1, 0)])


def test_transport_defect_constant_path():
    psi = ket(1, 2j, 0.5)
    states = np.repeat(psi.vector[None, :], 8, axis=0)
    path = StatePath(np.linspace(0, 1, 8), states)
    assert parallel_transport_defect(path) == 0.0


def test_transport_defect_pure_phase_drift():
    s = np.linspace(0, 1, 100)
    states = np.exp(1j * s)[:, None] * ket(1, 0).vector[None, :]
    path = StatePath(s, states)
    assert parallel_transport_defect(path) == pytest.approx(1.0, rel=0.02)


def test_transport_defect_geodesic_is_parallel():
    path = geodesic_path(ket(1, 0), ket(1, 1j), 10000)
    assert parallel_transport_defect(path) < 1e-3


def test_transport_defect_needs_two_samples():
    path = StatePath([0.0], ket(1, 0).vector[None, :])
    with pytest.raises(DimensionError):
        parallel_transport_defect(path)


def test_loop_integral_single_sample_loop():
    path = StatePath([0.0], ket(1, 0).vector[None, :], closed=True)
    assert geometric_phase_integral(path).phase.radians == 0.0


def test_loop_integral_octant_dense():
    result = geometric_phase_integral(octant_loop(10000))
    assert result.phase.radians == pytest.approx(np.pi / 4, abs=1e-4)
    assert result.winding == 0


def test_loop_integral_equator():
    phis = np.linspace(0.0, 2 * np.pi, 400)
    states = np.stack([np.full(400, 2**-0.5), np.exp(1j * phis) * 2**-0.5], axis=1)
    path = StatePath(phis, states, closed=True)
    phase = geometric_phase_integral(path).phase.radians
    assert min(abs(phase - np.pi), abs(phase + np.pi)) < 1e-3


def test_loop_integral_rejects_open_path():
    path = geodesic_path(ket(1, 0), ket(1, 1), 10)
    with pytest.raises(OpenPathError):
        geometric_phase_integral(path)


def test_loop_integral_winding_count():
    # two full turns around the equator accumulate 2*pi
    phis = np.linspace(0.0, 4 * np.pi, 800)
    states = np.stack([np.full(800, 2**-0.5), np.exp(1j * phis) * 2**-0.5], axis=1)
    path = StatePath(phis, states, closed=True)
    result = geometric_phase_integral(path)
    assert result.winding == 1
    assert result.total == pytest.approx(2 * np.pi, abs=1e-3)


def test_loop_integral_convergence_monotone():
    errors = []
    n = 100
    while n <= 100000:
        phase = geometric_phase_integral(octant_loop(n)).phase.radians
        errors.append(abs(phase - np.pi / 4))
        n *= 2
    for coarse, fine in zip(errors, errors[1:]):
        assert fine <= coarse * 1.1


def test_geodesic_constant_for_equal_endpoints():
    psi = ket(1, 1j)
    path = geodesic_path(psi, psi, 5)
    assert np.allclose(path.states, psi.vector[None, :])


def test_geodesic_midpoint_on_bloch_sphere():
    path = geodesic_path(ket(1, 0), ket(1, 1), 3)
    mid = bloch_from_state(path.states[1]).as_array()
    assert np.allclose(mid, (np.sin(np.pi / 4), 0.0, np.cos(np.pi / 4)), atol=1e-12)


def test_geodesic_orthogonal_endpoints_rejected():
    with pytest.raises(OrthogonalLinkError):
        geodesic_path(ket(1, 0), ket(0, 1), 10)


def test_geodesic_triangle_phase_is_half_solid_angle():
    # fixed orientation convention: discrete loop phase = + solid angle / 2
    rng = np.random.default_rng(2)
    checked = 0
    while checked < 25:
        verts = [random_unit_vector(rng) for _ in range(3)]
        pairs = [(verts[0], verts[1]), (verts[1], verts[2]), (verts[2], verts[0])]
        if min(np.dot(a, b) for a, b in pairs) < -0.99:
            continue  # nearly antipodal pair: arc ill-conditioned
        states = [state_from_bloch(v) for v in verts]
        phase = pancharatnam_phase(states).radians
        omega = solid_angle(verts)
        assert phase == pytest.approx(omega / 2.0, abs=1e-6)
        checked += 1


def test_solid_angle_octant():
    assert solid_angle([(0, 0, 1), (1, 0, 0), (0, 1, 0)]) == pytest.approx(np.pi / 2, abs=1e-12)


def test_solid_angle_repeated_vertex():
    assert solid_angle([(0, 0, 1), (0, 0, 1), (1, 0, 0)]) == pytest.approx(0.0, abs=1e-12)


def test_solid_angle_orientation_antisymmetry():
    fwd = solid_angle([(0, 0, 1), (1, 0, 0), (0, 1, 0)])
    rev = solid_angle([(0, 1, 0), (1, 0, 0), (0, 0, 1)])
    assert fwd == pytest.approx(-rev, abs=1e-12)


def test_solid_angle_antipodal_rejected():
    with pytest.raises(DegenerateArcError):
        solid_angle([(0, 0, 1), (0, 0, -1), (1, 0, 0)])


def test_solid_angle_requires_unit_vectors():
    with pytest.raises(DomainError):
        solid_angle([(0, 0, 0.5), (1, 0, 0), (0, 1, 0)])


def _sphere_family_polar():
    return TwoParamFamily(
        lambda th, ph: state_from_bloch(
            (np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th))
        )
    )


def _sphere_family_area_uniform():
    def make(phi, z):
        r = np.sqrt(max(1.0 - z * z, 0.0))
        return state_from_bloch((r * np.cos(phi), r * np.sin(phi), z))

    return TwoParamFamily(make)


def test_plaquette_curvature_equator_is_one():
    value = plaquette_curvature(_sphere_family_polar(), (np.pi / 2, 1.0), 1e-2)
    assert value == pytest.approx(1.0, abs=1e-3)


def test_plaquette_curvature_area_uniform_sphere():
    rng = np.random.default_rng(3)
    family = _sphere_family_area_uniform()
    for _ in range(20):
        point = (rng.uniform(0, 2 * np.pi), rng.uniform(-0.9, 0.9))
        assert plaquette_curvature(family, point, 1e-2) == pytest.approx(1.0, abs=1e-3)


def test_plaquette_curvature_flat_family():
    family = TwoParamFamily(lambda s, sp: state_from_bloch((np.sin(s), 0.0, np.cos(s))))
    assert plaquette_curvature(family, (0.5, 0.7), 1e-2) == 0.0


def test_plaquette_curvature_octant_stokes():
    # integrated curvature over the octant equals its area pi/2, which is
    # twice the boundary loop phase pi/4
    family = _sphere_family_polar()
    n = 24
    step = (np.pi / 2) / n
    total = 0.0
    for i in range(n):
        for j in range(n):
            th = (i + 0.5) * step
            ph = (j + 0.5) * step
            total += plaquette_curvature(family, (th, ph), 1e-3) * step * step
    boundary = pancharatnam_phase(OCTANT).radians
    assert total == pytest.approx(np.pi / 2, abs=5e-3)
    assert total == pytest.approx(2.0 * boundary, abs=5e-3)


def _truncated_coherent(x, y, dim=40):
    alpha = complex(x, y)
    n = np.arange(dim)
    mag = abs(alpha)
    log_coeff = -0.5 * mag**2 + n * np.log(mag + 1e-300) - 0.5 * gammaln(n + 1)
    v = np.exp(log_coeff) * np.exp(1j * n * np.angle(alpha))
    return v / np.linalg.norm(v)


def test_plaquette_curvature_coherent_states_nonzero():
    # measured oracle value: the flat-phase-space expectation does not
    # hold for the loop-phase curvature, which sits at a nonzero constant
    family = TwoParamFamily(_truncated_coherent)
    values = [
        plaquette_curvature(family, point, 1e-2)
        for point in [(1.0, 0.0), (0.5, 0.5), (0.8, -0.3)]
    ]
    for v in values:
        assert v == pytest.approx(4.0, abs=1e-6)


def test_state_path_validation():
    with pytest.raises(ValidationError):
        StatePath([0.0, 0.0], np.repeat(ket(1, 0).vector[None, :], 2, axis=0))
    with pytest.raises(ValidationError):
        StatePath([0.0, 1.0], np.array([[1.0, 0.0], [0.7, 0.0]], dtype=complex))
    with pytest.raises(ValidationError):
        StatePath(
            [0.0, 1.0],
            np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex),
            closed=True,
        )
