# Measuring phases by interference: a two-port interferometer whose |1>
# arm applies an operator to an internal degree of freedom.
#
# The fringe pattern in the variable arm phase chi shifts by
# arg tr(U rho0) and has visibility |tr(U rho0)|, for any internal input,
# pure or mixed.

import numpy as np

from geomphase import (
    DensityMatrix,
    extract_phase_visibility,
    fringe_scan,
    ket,
    pancharatnam_phase,
    projective_sequence_phase,
)

chis = np.linspace(0.0, 2 * np.pi, 64)
phi = np.pi / 3
u = np.diag([1.0, np.exp(1j * phi)])

print("internal operator diag(1, e^{i pi/3}); expected shift pi/6, visibility cos(pi/6)")
for label, rho in (
    ("pure |+>", DensityMatrix(np.full((2, 2), 0.5))),
    ("maximally mixed", DensityMatrix(np.eye(2) / 2)),
):
    phase, visibility = extract_phase_visibility(fringe_scan(u, rho, chis))
    print("  %-16s shift %+0.6f  visibility %.6f" % (label, phase.radians, visibility))

# with no dynamics at all, a chain of projections produces the same
# discrete loop phase measured interferometrically
octant = [ket(1, 0), ket(1, 1), ket(1, 1j)]
print()
print("projective octant sequence through the interferometer: %+.9f" %
      projective_sequence_phase(octant).radians)
print("cyclic overlap product of the same sequence:           %+.9f" %
      pancharatnam_phase(octant).radians)
