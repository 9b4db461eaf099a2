# Discrete geometric phases on the Bloch sphere.
#
# A loop of pure states picks up a phase that depends only on the loop's
# geometry: the argument of the cyclic product of overlaps.  For geodesic
# polygons it equals half the enclosed solid angle.

import numpy as np

from geomphase import (
    geodesic_polygon_path,
    geometric_phase_integral,
    ket,
    pancharatnam_phase,
    plaquette_curvature,
    solid_angle,
    state_from_bloch,
    TwoParamFamily,
)

# the classic octant: north pole -> +x -> +y -> back
octant = [ket(1, 0), ket(1, 1), ket(1, 1j)]
phase = pancharatnam_phase(octant)
print("octant loop phase:          %+.12f rad" % phase.radians)
print("octant solid angle / 2:     %+.12f rad" % (solid_angle([(0, 0, 1), (1, 0, 0), (0, 1, 0)]) / 2))

# the phase is gauge invariant: rephasing any state changes nothing
rng = np.random.default_rng(0)
rephased = [s.vector * np.exp(1j * rng.uniform(-np.pi, np.pi)) for s in octant]
print("after random rephasings:    %+.12f rad" % pancharatnam_phase(rephased).radians)

# densely sampling the geodesic boundary converges to the same value
for n in (100, 1000, 10000):
    loop = geodesic_polygon_path(octant, n)
    dense = geometric_phase_integral(loop)
    print("dense loop, n=%6d:        %+.12f rad (dev %.2e)"
          % (n, dense.phase.radians, abs(dense.phase.radians - np.pi / 4)))

# local version: the phase around a small plaquette per unit area is the
# curvature; for the Bloch sphere in area-uniform coordinates it is 1
family = TwoParamFamily(
    lambda phi, z: state_from_bloch(
        (np.sqrt(1 - z * z) * np.cos(phi), np.sqrt(1 - z * z) * np.sin(phi), z)
    )
)
for z in (-0.5, 0.0, 0.7):
    k = plaquette_curvature(family, (1.0, z), 1e-2)
    print("sphere curvature at z=%+.1f:  %.6f" % (z, k))
