# Cyclic-evolution gates: sech-pulse single-qubit holonomies and the
# four-step two-qubit phase gate.

import math

import numpy as np
import pytest
from scipy.integrate import quad

from rabiholo import (
    GateLeakageError,
    SechPulseSpec,
    design_sech_pulse,
    execute_single_qubit_gate,
    four_step_protocol,
    gate_fidelity,
    logical_hamiltonian,
    single_qubit_holonomy_matrix,
)
from rabiholo.drive import effective_lambda, propagate_schrodinger
from rabiholo.holonomy import (
    LOGICAL_SX,
    LOGICAL_SY,
    cyclic_propagator,
    embed_logical,
    four_step_matrices,
    is_product_unitary,
    logical_phase_offset,
    simulate_four_step,
)

SZ = np.diag([1.0, -1.0])
SX = np.array([[0.0, 1.0], [1.0, 0.0]])
HADAMARD = (SX + SZ) / math.sqrt(2.0)


def test_holonomy_matrix_poles():
    assert np.allclose(single_qubit_holonomy_matrix(0.0, 0.0), SZ)
    assert np.allclose(single_qubit_holonomy_matrix(math.pi / 4, 0.0), HADAMARD)


def test_holonomy_matrices_anticommute():
    a = single_qubit_holonomy_matrix(math.pi / 2, 0.0)  # sigma_x
    b = single_qubit_holonomy_matrix(0.0, 0.0)  # sigma_z
    assert np.max(np.abs(a @ b + b @ a)) < 1e-14


def test_holonomy_matrix_unitary_hermitian_traceless(rng):
    for _ in range(25):
        theta, phi = rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi)
        u = single_qubit_holonomy_matrix(theta, phi)
        assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-14)
        assert np.allclose(u, u.conj().T, atol=1e-14)
        assert abs(np.trace(u)) < 1e-14


def test_sech_tau_closed_form():
    spec = SechPulseSpec(beta=1.0, theta=0.0, phi=0.0)
    assert spec.tau == pytest.approx(2.0 * math.acosh(1000.0), rel=1e-12)
    assert spec.tau == pytest.approx(15.2018, abs=5e-4)


def test_sech_area_quadrature():
    # direct quadrature of the truncated envelope: area pi - delta
    beta = 0.37
    spec = SechPulseSpec(beta=beta, theta=0.0, phi=0.0)
    area, _ = quad(lambda t: beta * spec.envelope(t), -0.5 * spec.tau, 0.5 * spec.tau)
    delta = math.pi - area
    assert 0.0 < delta < 4e-3
    assert math.pi * (1.0 - 2.0 * spec.truncation_ratio) <= area <= math.pi


def test_design_hadamard_amplitude_ratio(basis30):
    w21 = basis30.transition(2, 1)
    spec = SechPulseSpec(beta=0.02 * w21, theta=math.pi / 4, phi=0.0)
    pulse = design_sech_pulse(spec, basis30)
    lam = effective_lambda(basis30, pulse)
    ratio = (pulse.omega1_amp * abs(lam.x20)) / (pulse.omega2_amp * abs(lam.z21))
    assert ratio == pytest.approx(math.sqrt(2.0) - 1.0, rel=1e-10)
    # round trip through the lambda reduction lands on the same gate axis
    realized = single_qubit_holonomy_matrix(lam.theta, lam.phi)
    assert gate_fidelity(HADAMARD, realized) == pytest.approx(1.0, abs=1e-10)


def test_raw_coupling_ratio_gives_hadamard(basis30):
    # couplings proportional to (1, sqrt(2)-1) on (|2><0|, |2><1|) drive a
    # loop equal to the Hadamard up to a global phase
    beta = 0.01
    norm = math.sqrt(2.0 * (2.0 - math.sqrt(2.0)))
    c = np.zeros((3, 3), dtype=complex)
    c[2, 0] = 1.0 / norm
    c[2, 1] = (math.sqrt(2.0) - 1.0) / norm
    c = c + c.conj().T
    spec = SechPulseSpec(beta=beta, theta=0.0, phi=0.0)
    u = cyclic_propagator(lambda t: beta * spec.envelope(t) * c, spec.tau)
    assert gate_fidelity(HADAMARD, u[:2, :2]) > 1.0 - 1e-5


def test_beta_guard(basis30):
    w21 = basis30.transition(2, 1)
    spec = SechPulseSpec(beta=0.2 * w21, theta=0.5, phi=0.0)
    with pytest.raises(ValueError, match="omega_21"):
        design_sech_pulse(spec, basis30)


def test_execute_hadamard(basis30):
    w21 = basis30.transition(2, 1)
    spec = SechPulseSpec(beta=0.02 * w21, theta=math.pi / 4, phi=0.0)
    report = execute_single_qubit_gate(spec, basis30)
    assert report.fidelity > 0.999
    assert report.leakage < 1e-3


def test_holonomy_closure_unitarity(basis30):
    # the loop closes to the squared truncation deficit, so a 1e-6 unitarity
    # budget needs the pulse cut below 5e-4 of its peak
    w21 = basis30.transition(2, 1)
    for theta, phi in [(0.4, 0.0), (math.pi / 4, 0.0), (2.0, 1.5)]:
        spec = SechPulseSpec(beta=0.02 * w21, theta=theta, phi=phi,
                             truncation_ratio=2e-4)
        report = execute_single_qubit_gate(spec, basis30)
        block = report.achieved
        assert np.max(np.abs(block.conj().T @ block - np.eye(2))) < 1e-6
        assert report.fidelity > 0.999


def test_zero_amplitude_loop_is_identity():
    spec = SechPulseSpec(beta=0.01, theta=0.0, phi=0.0)
    u = cyclic_propagator(lambda t: np.zeros((3, 3), dtype=complex), spec.tau)
    assert gate_fidelity(np.eye(2), u[:2, :2]) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(u, np.eye(3), atol=1e-12)


def test_no_dynamical_phase(basis30):
    # the instantaneous energy expectation vanishes along the whole loop for
    # computational-subspace initial states, so the gate is purely geometric
    w21 = basis30.transition(2, 1)
    spec = SechPulseSpec(beta=0.02 * w21, theta=math.pi / 4, phi=0.0)
    pulse = design_sech_pulse(spec, basis30)
    lam = effective_lambda(basis30, pulse)
    grid = np.linspace(-0.5 * spec.tau, 0.5 * spec.tau, 801)
    for psi0 in (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]),
                 np.array([1.0, 1.0, 0.0]) / math.sqrt(2.0)):
        traj = propagate_schrodinger(lam.hamiltonian, psi0.astype(complex), grid)
        expect = np.array([
            np.real(np.vdot(traj.values[i], lam.hamiltonian(grid[i]) @ traj.values[i]))
            for i in range(0, len(grid), 8)
        ])
        integral = np.trapezoid(expect, grid[::8])
        assert np.max(np.abs(expect)) < 1e-12
        assert abs(integral) < 1e-6 * math.pi


def test_gate_leakage_error(basis30):
    # cutting the pulse at a third of its peak leaves the loop badly open
    w21 = basis30.transition(2, 1)
    spec = SechPulseSpec(beta=0.02 * w21, theta=math.pi / 4, phi=0.0,
                         truncation_ratio=0.35)
    with pytest.raises(GateLeakageError):
        execute_single_qubit_gate(spec, basis30)


def test_small_holonomy_grid(basis30):
    w21 = basis30.transition(2, 1)
    for theta, phi in [(0.0, 0.0), (math.pi / 2, 1.0), (2.5, -2.0)]:
        spec = SechPulseSpec(beta=0.02 * w21, theta=theta, phi=phi)
        report = execute_single_qubit_gate(spec, basis30)
        assert report.fidelity > 0.999
        assert report.leakage < 1e-3


def test_logical_operator_algebra():
    from rabiholo.holonomy import LogicalTwoQubit

    logical = LogicalTwoQubit()
    assert logical.ket_one == "1l0r" and logical.ket_zero == "0l1r"
    assert np.allclose(logical.sx @ logical.sx, np.eye(2))
    assert np.allclose(logical.sy @ logical.sy, np.eye(2))
    assert np.max(np.abs(logical.sx @ logical.sy + logical.sy @ logical.sx)) < 1e-15


def test_logical_hamiltonian_axes():
    h = logical_hamiltonian(1e-3, 0.0, 0.8, 1.7)
    assert np.allclose(h, 0.5e-3 * 0.8 * 1.7 * LOGICAL_SX)
    h = logical_hamiltonian(1e-3, math.pi / 2, 0.8, 1.7)
    assert np.allclose(h, 0.5e-3 * 0.8 * 1.7 * LOGICAL_SY)


def test_logical_hamiltonian_eigenvalues(rng):
    for _ in range(10):
        phi_d = rng.uniform(-math.pi, math.pi)
        j0, fl, fr = 2e-3, -0.81, 1.69
        vals = np.linalg.eigvalsh(logical_hamiltonian(j0, phi_d, fl, fr))
        assert np.allclose(vals, [-0.5 * j0 * abs(fl * fr), 0.5 * j0 * abs(fl * fr)])


def test_logical_hamiltonian_vanishing_element():
    with pytest.raises(ValueError):
        logical_hamiltonian(1e-3, 0.0, 0.0, 1.0)


def test_logical_phase_offset():
    assert logical_phase_offset(1.0, 1.0) == 0.0
    assert logical_phase_offset(-1.0, 1.0) == pytest.approx(math.pi)
    assert logical_phase_offset(1.0j, 1.0) == pytest.approx(math.pi / 2)


def test_four_step_at_pi():
    u = four_step_protocol(math.pi)
    assert np.allclose(u, np.diag([1.0, -1.0, -1.0, 1.0]), atol=1e-12)


def test_four_step_at_half_pi():
    u = four_step_protocol(math.pi / 2)
    block = u[1:3, 1:3]
    assert np.allclose(block, [[0.0, -1.0j], [-1.0j, 0.0]], atol=1e-12)
    assert u[0, 0] == pytest.approx(1.0) and u[3, 3] == pytest.approx(1.0)


def test_four_step_closed_form(rng):
    for beta in rng.uniform(-math.pi * 0.99, math.pi, size=8):
        u = four_step_protocol(beta)
        expected = np.eye(4, dtype=complex)
        expected[1, 1] = expected[2, 2] = math.cos(beta)
        expected[1, 2] = expected[2, 1] = -1j * math.sin(beta)
        assert np.max(np.abs(u - expected)) < 1e-12


def test_four_step_range_check():
    with pytest.raises(ValueError):
        four_step_protocol(1.5 * math.pi)


def test_geodesic_composition():
    # the product of the four exact rotations is the diagonal phase gate on
    # the Sx eigenstates, up to one global phase
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    minus = np.array([1.0, -1.0]) / math.sqrt(2.0)
    for beta in (0.3, math.pi / 6, 2.0):
        composed = np.eye(2, dtype=complex)
        for step in four_step_matrices(beta):
            composed = step @ composed
        lam_p = plus.conj() @ composed @ plus
        lam_m = minus.conj() @ composed @ minus
        assert abs(lam_p) == pytest.approx(1.0, abs=1e-12)
        assert abs(np.vdot(minus, composed @ plus)) < 1e-12
        # relative phase e^{-2 i beta} between the Sx eigenstates
        assert abs(lam_p / lam_m - np.exp(-2j * beta)) < 1e-10


def test_cyclic_path_of_plus_state():
    beta = 0.9
    steps = four_step_matrices(beta)
    plus = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
    zero = np.array([1.0, 0.0], dtype=complex)
    one = np.array([0.0, 1.0], dtype=complex)
    state = steps[0] @ plus
    assert abs(abs(np.vdot(zero, state)) - 1.0) < 1e-12
    state = steps[1] @ state
    assert abs(abs(np.vdot(one, state)) - 1.0) < 1e-12
    state = steps[2] @ state
    assert abs(abs(np.vdot(zero, state)) - 1.0) < 1e-12
    # after phase stripping the embedded gate sends |+> to e^{-i beta} |+>
    u = four_step_protocol(beta)
    plus_l = np.zeros(4, dtype=complex)
    plus_l[1] = plus_l[2] = 1.0 / math.sqrt(2.0)
    out = u @ plus_l
    assert np.max(np.abs(out - np.exp(-1j * beta) * plus_l)) < 1e-12


def test_four_step_nontrivial_except_at_poles():
    for beta in (math.pi / 6, math.pi / 2, 3 * math.pi / 4):
        assert not is_product_unitary(four_step_protocol(beta))
    assert is_product_unitary(four_step_protocol(math.pi))
    assert is_product_unitary(embed_logical(np.eye(2, dtype=complex)))


def test_simulated_four_step_matches_exact():
    for beta in (math.pi / 6, 2.0):
        exact = four_step_protocol(beta)
        simulated = simulate_four_step(beta, j0=2e-3, f_left=-0.815, f_right=1.691)
        assert np.max(np.abs(exact - simulated)) < 1e-8
