# The classical face of the geometric phase: a pendulum's swing plane
# rotates with the carrier frame, at a rate set purely by geometry
# (the cosine of the colatitude), not by the swing dynamics.

import numpy as np

from geomphase import PendulumParams, foucault_closed_form, foucault_integrate, precession_angle

OMEGA = 2 * np.pi          # swing frequency: one swing per second
EARTH = 0.02 * 2 * np.pi   # sped-up frame rotation: one turn per 50 s

print("colatitude   measured rate   W cos(theta)")
for theta in (0.0, np.pi / 6, np.pi / 3, np.pi / 2):
    params = PendulumParams(omega=OMEGA, rotation_rate=EARTH, colatitude=theta)
    trajectory = foucault_integrate(params, 1.0, 50.0, 20000)
    rate = precession_angle(trajectory) / 50.0
    print("   %5.3f       %8.5f       %8.5f" % (theta, rate, abs(params.coriolis)))

print()
params = PendulumParams(omega=OMEGA, rotation_rate=EARTH, colatitude=np.pi / 3)
period = 2 * np.pi / params.rotation_rate
z = foucault_closed_form(params, 1.0, period)
residual = z * np.exp(1j * OMEGA * period)
print("per-revolution factor exp(-2 pi i cos(theta)):  %+.6f%+.6fj" % (residual.real, residual.imag))
print("expected                                        %+.6f%+.6fj"
      % (np.cos(2 * np.pi * np.cos(np.pi / 3)), -np.sin(2 * np.pi * np.cos(np.pi / 3))))
print("(equivalently a swing-plane turn of 2 pi (1 - cos theta) mod 2 pi)")
