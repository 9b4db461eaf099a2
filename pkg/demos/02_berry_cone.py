# Adiabatic implementation of phase transport: a spin-1/2 dragged around
# a cone of field directions.
#
# Three independent estimates of the same geometric phase are compared:
# the Berry connection loop integral, the discrete loop phase of the
# eigenstate samples (conjugate sign convention), and the phase left on
# the actual Schrodinger trajectory after removing -integral E dt.

import numpy as np

from geomphase import spin_half_cone_experiment, wrap_angle

print("cone angle   Berry     trajectory   -Omega/2    leakage")
for theta in (np.pi / 6, np.pi / 3, np.pi / 2):
    report = spin_half_cone_experiment(theta, duration=200.0, steps=20000)
    target = -report.solid_angle / 2
    print(
        "  %5.3f    %+8.5f   %+8.5f    %+8.5f   %.1e"
        % (
            theta,
            report.berry_phase,
            wrap_angle(report.geometric_phase),
            wrap_angle(target),
            report.adiabaticity_residual,
        )
    )

print()
print("slower driving tightens the trajectory estimate (theta = pi/2):")
for duration, steps in ((100.0, 10000), (200.0, 20000), (400.0, 40000)):
    report = spin_half_cone_experiment(np.pi / 2, duration, steps)
    err = abs(wrap_angle(report.geometric_phase - report.berry_phase))
    print("  T = %5.0f   |trajectory - Berry| = %.2e" % (duration, err))
