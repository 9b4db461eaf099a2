# A complete computation from geometric parts: the one-call
# constant-vs-varying classifier with the conditional phase realized by
# spin transport around a hemisphere and the Hadamards by compiled
# dark-state holonomy rotations.

from geomphase import (
    OracleSpec,
    deutsch,
    deutsch_geometric,
    gate_fidelity,
    geometric_phase_gate,
    hadamard,
    holonomic_hadamard,
)

print("geometric building blocks")
gate = geometric_phase_gate(3.141592653589793, duration=200.0, steps=20000)
print("  transported pi gate vs sigma_z fidelity: %.6f"
      % gate_fidelity(gate.gate.matrix, [[1, 0], [0, -1]]))
hh = holonomic_hadamard()
print("  holonomic Hadamard fidelity vs H:        %.9f"
      % gate_fidelity(hh.matrix, hadamard().matrix))

print()
print("oracle    exact     geometric success")
for f0 in (0, 1):
    for f1 in (0, 1):
        oracle = OracleSpec(f0, f1)
        exact = deutsch(oracle)
        geo = deutsch_geometric(oracle, duration=200.0)
        print(
            "  (%d,%d)   %-9s %-9s %.6f"
            % (f0, f1, exact.classification, geo.classification, geo.success_probability)
        )

print()
print("slower oracle loops classify more sharply:")
for duration in (150.0, 300.0, 600.0):
    geo = deutsch_geometric(OracleSpec(0, 1), duration=duration)
    print("  T = %4.0f   success %.8f" % (duration, geo.success_probability))
