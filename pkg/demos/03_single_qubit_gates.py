# Holonomic single-qubit gates from sech-pulse loops.
#
# A pi-area pulse drives the bright state around a closed loop; the
# computational pair picks up the purely geometric unitary n.sigma.
# Demonstrates the Hadamard point and a small gate family.

import math

import numpy as np

from rabiholo import (
    RabiParams,
    SechPulseSpec,
    build_rabi_hamiltonian,
    diagonalize,
    execute_single_qubit_gate,
)

basis = diagonalize(build_rabi_hamiltonian(RabiParams(1.0, 0.8, 0.3, 30)))
beta = 0.02 * basis.transition(2, 1)

print(f"sech rate beta = {beta:.5f} (0.02 omega_21), "
      f"pulse length {SechPulseSpec(beta, 0, 0).tau:.0f} time units\n")

for name, theta, phi in (
    ("sigma_z     ", 0.0, 0.0),
    ("Hadamard    ", math.pi / 4.0, 0.0),
    ("sigma_x     ", math.pi / 2.0, 0.0),
    ("sigma_y     ", math.pi / 2.0, math.pi / 2.0),
    ("tilted axis ", 1.1, -0.7),
):
    report = execute_single_qubit_gate(SechPulseSpec(beta, theta, phi), basis)
    print(f"{name} theta={theta:6.3f} phi={phi:6.3f}  "
          f"fidelity {report.fidelity:.6f}  leakage {report.leakage:.2e}")

print("\nHadamard propagator on the computational pair:")
report = execute_single_qubit_gate(
    SechPulseSpec(beta, math.pi / 4.0, 0.0), basis)
with np.printoptions(precision=4, suppress=True):
    print(report.achieved)
print("target (sigma_x + sigma_z)/sqrt(2):")
with np.printoptions(precision=4, suppress=True):
    print(report.target)
