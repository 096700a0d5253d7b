"""Dressed-state spectra, driven dynamics, and holonomic gates for
ultrastrongly coupled qubit-cavity systems.

The package is organized around five layers:

- :mod:`rabiholo.qrm` - one quantum Rabi system: Hamiltonian, dressed
  spectrum, parity sectors, selection-rule matrix elements.
- :mod:`rabiholo.drive` - two-tone driving of the physical qubit, full
  lab-frame propagation, and the effective three-level lambda model.
- :mod:`rabiholo.holonomy` - cyclic-evolution single-qubit gates from
  sech pulses and the four-step two-qubit geometric phase gate.
- :mod:`rabiholo.open_system` - time-convolutionless master equation
  with ohmic loss channels and the averaged gate-fidelity benchmark.
- :mod:`rabiholo.coupled` - two Rabi systems bridged by a flux-modulated
  quadrature-quadrature coupling: circuit constants, validity checks,
  and dressed-state excitation transfer.

All frequencies are angular and dimensionless (units of the cavity
frequency); hbar = 1 throughout.
"""

from .errors import (
    GateLeakageError,
    NumericalError,
    ParityMixingError,
    RwaViolationWarning,
)
from .qrm import (
    DressedBasis,
    Parity,
    RabiParams,
    build_rabi_hamiltonian,
    diagonalize,
    dressed_operator,
    matrix_element,
    parity_of,
    spectrum_sweep,
)
from .drive import (
    DrivePulse,
    LambdaModel,
    TimeSeries,
    bright_dark,
    build_drive_hamiltonian,
    effective_lambda,
    panel_pulse,
    populations,
    propagate_schrodinger,
    rabi_oscillations,
)
from .holonomy import (
    GateReport,
    SechPulseSpec,
    design_sech_pulse,
    execute_single_qubit_gate,
    four_step_protocol,
    gate_fidelity,
    logical_hamiltonian,
    single_qubit_holonomy_matrix,
)
from .open_system import (
    BathChannel,
    BathSpec,
    build_tcl_generator,
    hadamard_fidelity_benchmark,
    propagate_master,
)
from .coupled import (
    CoupledCircuitParams,
    DerivedCouplings,
    build_coupled_hamiltonian,
    circuit_couplings,
    effective_coupling,
    resonance_frequency,
    rwa_validity_check,
    simulate_population_inversion,
)

__version__ = "0.1.0"

__all__ = [
    "BathChannel",
    "BathSpec",
    "CoupledCircuitParams",
    "DerivedCouplings",
    "DressedBasis",
    "DrivePulse",
    "GateLeakageError",
    "GateReport",
    "LambdaModel",
    "NumericalError",
    "Parity",
    "ParityMixingError",
    "RabiParams",
    "RwaViolationWarning",
    "SechPulseSpec",
    "TimeSeries",
    "bright_dark",
    "build_coupled_hamiltonian",
    "build_drive_hamiltonian",
    "build_rabi_hamiltonian",
    "build_tcl_generator",
    "circuit_couplings",
    "design_sech_pulse",
    "diagonalize",
    "dressed_operator",
    "effective_coupling",
    "effective_lambda",
    "execute_single_qubit_gate",
    "four_step_protocol",
    "gate_fidelity",
    "hadamard_fidelity_benchmark",
    "logical_hamiltonian",
    "matrix_element",
    "panel_pulse",
    "parity_of",
    "populations",
    "propagate_master",
    "propagate_schrodinger",
    "rabi_oscillations",
    "resonance_frequency",
    "rwa_validity_check",
    "simulate_population_inversion",
    "single_qubit_holonomy_matrix",
    "spectrum_sweep",
]
