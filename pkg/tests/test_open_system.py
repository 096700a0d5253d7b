# Dissipative dynamics: channel-operator construction, master-equation
# propagation, and the averaged Hadamard-fidelity benchmark.  Reference
# fidelities regenerated by tests/oracles/open_system_oracle.py.

import math

import numpy as np
import pytest

from rabiholo import (
    BathChannel,
    BathSpec,
    NumericalError,
    RabiParams,
    build_tcl_generator,
    hadamard_fidelity_benchmark,
    propagate_master,
)
from rabiholo.drive import propagate_schrodinger
from rabiholo.open_system import (
    dressed_system,
    fibonacci_bloch_states,
    ohmic_density,
)

GAMMA = 1e-2


@pytest.fixture(scope="module")
def lambda_system():
    return dressed_system(RabiParams(1.0, 0.8, 0.3, 30), n_levels=3)


@pytest.fixture(scope="module")
def standard_channels(lambda_system):
    h3, ops, _ = lambda_system
    return build_tcl_generator(h3, BathSpec.standard(GAMMA, GAMMA, GAMMA), ops)


def test_ohmic_density_heaviside():
    w = np.array([-1.0, 0.0, 0.5, 2.0])
    assert np.allclose(ohmic_density(0.01, 1.0, w), [0.0, 0.0, 0.005, 0.02])


def test_zero_rates_give_zero_generators(lambda_system):
    h3, ops, _ = lambda_system
    channels = build_tcl_generator(h3, BathSpec.standard(0.0, 0.0, 0.0), ops)
    for ch in channels:
        assert np.max(np.abs(ch.u_op)) == 0.0


def test_two_level_lowering_weight():
    # zero temperature, sigma_x coupling: U carries only the lowering element
    # with weight gamma(omega_10) / 2
    omega10 = 0.8
    h = np.diag([0.0, omega10])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    baths = BathSpec(channels=(BathChannel("x", "sigma_x", GAMMA),))
    (ch,) = build_tcl_generator(h, baths, {"sigma_x": sx})
    expected = np.zeros((2, 2))
    expected[0, 1] = 0.5 * GAMMA * omega10
    assert np.allclose(ch.u_op, expected, atol=1e-15)


def test_generator_validation(lambda_system):
    h3, ops, _ = lambda_system
    with pytest.raises(ValueError):
        BathChannel("x", "sigma_x", -1.0)
    bad = np.eye(3)
    bad[0, 1] = 0.3
    with pytest.raises(ValueError):
        build_tcl_generator(bad, BathSpec.standard(GAMMA, GAMMA, GAMMA), ops)
    with pytest.raises(ValueError):
        build_tcl_generator(h3, BathSpec.standard(GAMMA, GAMMA, GAMMA), {})


def test_thermal_occupancy_adds_upward_weight():
    omega10 = 0.8
    h = np.diag([0.0, omega10])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    nbar = 0.5
    baths = BathSpec(channels=(
        BathChannel("x", "sigma_x", GAMMA, nbar=lambda w: nbar),))
    (ch,) = build_tcl_generator(h, baths, {"sigma_x": sx})
    assert ch.u_op[0, 1] == pytest.approx(0.5 * GAMMA * omega10 * (nbar + 1.0))
    assert ch.u_op[1, 0] == pytest.approx(0.5 * GAMMA * omega10 * nbar)


def test_undriven_decay_timescale(standard_channels):
    # all three ohmic channels at 1e-2 empty the excited dressed levels into
    # the ground state on the hundred-cavity-period scale
    t = np.linspace(0.0, 500.0, 501)
    for start in (1, 2):
        rho0 = np.zeros((3, 3), dtype=complex)
        rho0[start, start] = 1.0
        traj = propagate_master(rho0, np.zeros((3, 3)), standard_channels, t,
                                max_step=0.5)
        p_exc = np.real(traj.values[:, 1, 1] + traj.values[:, 2, 2])
        idx = int(np.argmax(p_exc < math.exp(-1.0)))
        assert 50.0 < t[idx] < 200.0
        assert np.real(traj.values[-1, 0, 0]) > 0.95


def test_unitary_limit_matches_schrodinger(lambda_system):
    h3, ops, _ = lambda_system
    channels = build_tcl_generator(h3, BathSpec.standard(0.0, 0.0, 0.0), ops)
    psi0 = np.array([0.6, 0.8, 0.0], dtype=complex)
    rho0 = np.outer(psi0, psi0.conj())
    coupling = np.zeros((3, 3), dtype=complex)
    coupling[2, 0] = 0.01
    coupling[2, 1] = -0.02
    coupling += coupling.conj().T
    t = np.linspace(0.0, 80.0, 81)
    traj_rho = propagate_master(rho0, coupling, channels, t, max_step=0.05)
    traj_psi = propagate_schrodinger(coupling, psi0, t, max_step=0.05)
    rho_from_psi = np.einsum("ti,tj->tij", traj_psi.values, traj_psi.values.conj())
    # trace distance = half the sum of singular values of the difference
    diff = traj_rho.values - rho_from_psi
    dist = 0.5 * np.abs(np.linalg.eigvalsh(diff[-1])).sum()
    assert dist < 1e-8


def test_free_relaxation_closed_form():
    # two levels, one sigma_x channel, no Hamiltonian: the excited population
    # decays exactly as exp(-gamma(omega_10) t) ... with the caveat that the
    # generator was built for the splitting omega_10
    omega10 = 0.8
    h = np.diag([0.0, omega10])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    baths = BathSpec(channels=(BathChannel("x", "sigma_x", GAMMA),))
    channels = build_tcl_generator(h, baths, {"sigma_x": sx})
    rho0 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    t = np.linspace(0.0, 300.0, 301)
    traj = propagate_master(rho0, np.zeros((2, 2)), channels, t, max_step=0.25)
    rate = GAMMA * omega10
    expected = np.exp(-rate * t)
    assert np.max(np.abs(np.real(traj.values[:, 1, 1]) - expected)) < 1e-6


def test_rate_scaling_halves_decay_time(lambda_system):
    h3, ops, _ = lambda_system
    times = {}
    for factor in (1.0, 2.0):
        channels = build_tcl_generator(
            h3, BathSpec.standard(factor * GAMMA, factor * GAMMA, factor * GAMMA), ops)
        rho0 = np.zeros((3, 3), dtype=complex)
        rho0[1, 1] = 1.0
        t = np.linspace(0.0, 400.0, 2001)
        traj = propagate_master(rho0, np.zeros((3, 3)), channels, t, max_step=0.4)
        p_exc = np.real(traj.values[:, 1, 1] + traj.values[:, 2, 2])
        times[factor] = t[int(np.argmax(p_exc < math.exp(-1.0)))]
    assert times[1.0] / times[2.0] == pytest.approx(2.0, rel=0.05)


def test_positivity_during_decay(standard_channels):
    rho0 = np.zeros((3, 3), dtype=complex)
    rho0[2, 2] = 0.5
    rho0[1, 1] = 0.5
    t = np.linspace(0.0, 200.0, 201)
    traj = propagate_master(rho0, np.zeros((3, 3)), standard_channels, t, max_step=0.5)
    for rho in traj.values[::20]:
        assert np.linalg.eigvalsh(rho).min() > -1e-6


def test_propagate_master_validation(standard_channels):
    with pytest.raises(ValueError):
        propagate_master(np.eye(3, dtype=complex), np.zeros((3, 3)),
                         standard_channels, np.linspace(0, 1, 3))
    rho0 = np.zeros((3, 3), dtype=complex)
    rho0[0, 0] = 1.0
    with pytest.raises(ValueError):
        propagate_master(rho0, np.zeros((3, 3)), standard_channels,
                         np.array([0.0, 1.0, 3.0]))


def test_unstable_step_aborts_with_diagnostics(standard_channels):
    # a grossly oversized step blows the integration up; the trace guard
    # must trip even when the state has gone non-finite
    h = np.diag([0.0, 300.0, 700.0])
    rho0 = np.array([[0.0, 0.0, 0.0],
                     [0.0, 0.5, 0.5],
                     [0.0, 0.5, 0.5]], dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(NumericalError, match="trace drift"):
            propagate_master(rho0, h, standard_channels,
                             np.linspace(0.0, 40.0, 5), max_step=10.0)


def test_fibonacci_states_deterministic_and_normalized():
    a = fibonacci_bloch_states(64)
    b = fibonacci_bloch_states(64)
    assert np.array_equal(a, b)
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0)
    # quasi-uniform cover: mean z-component near zero
    z = np.abs(a[:, 0]) ** 2 - np.abs(a[:, 1]) ** 2
    assert abs(z.mean()) < 1e-2


def test_lossless_benchmark_near_unity(basis30):
    table = hadamard_fidelity_benchmark(
        np.array([0.05]), 128, BathSpec.standard(0.0, 0.0, 0.0), basis=basis30)
    assert table.mean_fidelity[0] > 1.0 - 1e-3


def test_benchmark_monotone_and_matches_oracle(basis30):
    # frozen from tests/oracles/open_system_oracle.py (solve_ivp integrator,
    # 200 Fibonacci states, gamma = 1e-2)
    oracle = {
        1.0: 0.50041293,
        10.0: 0.69784194,
        100.0: 0.95353929,
        1000.0: 0.99511772,
    }
    ratios = np.array(sorted(oracle))
    table = hadamard_fidelity_benchmark(
        ratios * GAMMA, 200, BathSpec.standard(GAMMA, GAMMA, GAMMA), basis=basis30)
    assert np.all(np.diff(table.mean_fidelity) > 0)
    for ratio, mean in zip(ratios, table.mean_fidelity):
        assert mean == pytest.approx(oracle[ratio], abs=5e-5)


def test_benchmark_sampling_stability(basis30):
    baths = BathSpec.standard(GAMMA, GAMMA, GAMMA)
    beta = np.array([0.1])
    f2000 = hadamard_fidelity_benchmark(beta, 2000, baths, basis=basis30)
    f4000 = hadamard_fidelity_benchmark(beta, 4000, baths, basis=basis30)
    assert abs(f2000.mean_fidelity[0] - f4000.mean_fidelity[0]) < 1e-3


def test_driven_generator_is_nearly_silent(basis30):
    # evaluating the bath at the instantaneous driven splittings starves the
    # ohmic density: slow pulses stay far from the strong relaxation the
    # dressed-frequency reading produces
    beta = np.array([0.1])
    baths = BathSpec.standard(GAMMA, GAMMA, GAMMA)
    driven = hadamard_fidelity_benchmark(
        beta, 64, baths, basis=basis30, generator_basis="driven")
    dressed = hadamard_fidelity_benchmark(
        beta, 64, baths, basis=basis30, generator_basis="dressed")
    assert driven.mean_fidelity[0] > 0.97
    assert dressed.mean_fidelity[0] < 0.75
    assert driven.mean_fidelity[0] > dressed.mean_fidelity[0] + 0.2
