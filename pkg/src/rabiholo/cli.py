"""Command-line front end: every simulation as a subcommand.

Each run writes its primary artifact (CSV or JSON) plus a config-echo
sidecar ``<out>.config.json`` holding every parameter of the run, enough
to reproduce the files bit for bit.  Exit codes: 0 success, 2 argument
or validation error, 3 numerical failure.  The environment variable
``RABIHOLO_WORKERS`` fans the fidelity sweep out across processes.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .coupled import (
    CoupledCircuitParams,
    circuit_couplings,
    simulate_population_inversion,
)
from .drive import effective_lambda, panel_pulse, rabi_oscillations
from .errors import NumericalError
from .holonomy import SechPulseSpec, execute_single_qubit_gate
from .io import write_csv, write_json
from .open_system import BathSpec, hadamard_fidelity_benchmark
from .qrm import RabiParams, build_rabi_hamiltonian, diagonalize, spectrum_sweep

__all__ = ["main", "build_parser"]

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _echo_config(out: str, subcommand: str, params: dict, seed: int) -> None:
    write_json(out + ".config.json", {
        "subcommand": subcommand,
        "params": params,
        "seed": seed,
        "version": __version__,
    })


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rabiholo",
        description="Dressed spectra, driven dynamics, and holonomic gates "
                    "of ultrastrongly coupled qubit-cavity systems.",
        epilog="Set RABIHOLO_WORKERS to fan parameter sweeps out across processes.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="dressed level curves over a coupling grid")
    sp.add_argument("--omega-a", type=float, default=0.8,
                    help="qubit frequency [omega_c units] (default 0.8)")
    sp.add_argument("--g-min", type=float, default=0.0,
                    help="first coupling strength [omega_c units] (default 0)")
    sp.add_argument("--g-max", type=float, default=1.0,
                    help="last coupling strength [omega_c units] (default 1)")
    sp.add_argument("--g-steps", type=int, default=101,
                    help="number of grid points [count] (default 101)")
    sp.add_argument("--levels", type=int, default=6,
                    help="dressed levels per row [count] (default 6)")
    sp.add_argument("--cutoff", type=int, default=30,
                    help="Fock cutoff [levels] (default 30)")
    sp.add_argument("--no-track", action="store_true",
                    help="sort levels by energy instead of tracking curves [flag]")
    sp.add_argument("--out", default="spectrum.csv", help="output CSV [path]")
    sp.set_defaults(run=cmd_spectrum)

    rd = sub.add_parser("rabi-drive", help="two-tone driven population dynamics")
    rd.add_argument("--panel", choices=("a", "b", "c"), default="a",
                    help="preset drive configuration [choice] (default a)")
    rd.add_argument("--omega-a", type=float, default=0.8,
                    help="qubit frequency [omega_c units] (default 0.8)")
    rd.add_argument("--g", type=float, default=0.3,
                    help="coupling strength [omega_c units] (default 0.3)")
    rd.add_argument("--cutoff", type=int, default=30,
                    help="Fock cutoff [levels] (default 30)")
    rd.add_argument("--amplitude-ratio", type=float, default=0.02,
                    help="drive amplitude over transition frequency [ratio] (default 0.02)")
    rd.add_argument("--periods", type=float, default=1.5,
                    help="run length in predicted Rabi periods [count] (default 1.5)")
    rd.add_argument("--samples", type=int, default=601,
                    help="output samples [count] (default 601)")
    rd.add_argument("--levels", type=int, default=3,
                    help="populations to record [count] (default 3)")
    rd.add_argument("--out", default="rabi.csv", help="output CSV [path]")
    rd.set_defaults(run=cmd_rabi_drive)

    gt = sub.add_parser("gate", help="single-qubit holonomic gate report")
    gt.add_argument("--theta", type=float, default=math.pi / 4.0,
                    help="target polar angle [radian] (default pi/4, Hadamard)")
    gt.add_argument("--phi", type=float, default=0.0,
                    help="target azimuthal angle [radian] (default 0)")
    gt.add_argument("--beta", type=float, default=None,
                    help="sech pulse rate [omega_c units] (default 0.02 omega_21)")
    gt.add_argument("--omega-a", type=float, default=0.8,
                    help="qubit frequency [omega_c units] (default 0.8)")
    gt.add_argument("--g", type=float, default=0.3,
                    help="coupling strength [omega_c units] (default 0.3)")
    gt.add_argument("--cutoff", type=int, default=30,
                    help="Fock cutoff [levels] (default 30)")
    gt.add_argument("--out", default="gate.json", help="output JSON [path]")
    gt.set_defaults(run=cmd_gate)

    fd = sub.add_parser("fidelity", help="open-system Hadamard fidelity sweep")
    fd.add_argument("--gamma", type=float, default=1e-2,
                    help="common bare loss rate [omega_c units] (default 1e-2)")
    fd.add_argument("--gamma-x", type=float, default=None,
                    help="transversal rate override [omega_c units]")
    fd.add_argument("--gamma-z", type=float, default=None,
                    help="longitudinal rate override [omega_c units]")
    fd.add_argument("--gamma-c", type=float, default=None,
                    help="field-quadrature rate override [omega_c units]")
    fd.add_argument("--ratio-min", type=float, default=1.0,
                    help="lowest beta/gamma_x [ratio] (default 1)")
    fd.add_argument("--ratio-max", type=float, default=1e3,
                    help="highest beta/gamma_x [ratio] (default 1e3)")
    fd.add_argument("--steps", type=int, default=7,
                    help="logarithmic grid points [count] (default 7)")
    fd.add_argument("--n-states", type=int, default=4000,
                    help="Bloch-sphere inputs per rate [count] (default 4000)")
    fd.add_argument("--omega-a", type=float, default=0.8,
                    help="qubit frequency [omega_c units] (default 0.8)")
    fd.add_argument("--g", type=float, default=0.3,
                    help="coupling strength [omega_c units] (default 0.3)")
    fd.add_argument("--cutoff", type=int, default=30,
                    help="Fock cutoff [levels] (default 30)")
    fd.add_argument("--generator", choices=("dressed", "driven"), default="dressed",
                    help="reference frame for the dissipator [choice] (default dressed)")
    fd.add_argument("--out", default="fidelity.csv", help="output CSV [path]")
    fd.set_defaults(run=cmd_fidelity)

    tq = sub.add_parser("two-qubit", help="dressed excitation transfer between two systems")
    tq.add_argument("--left-omega-a", type=float, default=0.8,
                    help="left qubit frequency [omega_c units] (default 0.8)")
    tq.add_argument("--left-g", type=float, default=0.3,
                    help="left coupling strength [omega_c units] (default 0.3)")
    tq.add_argument("--right-omega-a", type=float, default=1.0,
                    help="right qubit frequency [omega_c units] (default 1.0)")
    tq.add_argument("--right-g", type=float, default=0.9,
                    help="right coupling strength [omega_c units] (default 0.9)")
    tq.add_argument("--cutoff", type=int, default=20,
                    help="per-side Fock cutoff [levels] (default 20)")
    tq.add_argument("--critical-current", type=float, default=93e-6,
                    help="SQUID critical current [ampere] (default 93e-6)")
    tq.add_argument("--periods", type=float, default=1.25,
                    help="run length in estimated inversions [count] (default 1.25)")
    tq.add_argument("--samples", type=int, default=601,
                    help="output samples [count] (default 601)")
    tq.add_argument("--out", default="inversion.csv", help="output CSV [path]")
    tq.set_defaults(run=cmd_two_qubit)

    cc = sub.add_parser("circuit", help="SQUID-bridge coupling strengths")
    cc.add_argument("--impedance", type=float, default=80.0,
                    help="resonator impedance [ohm] (default 80)")
    cc.add_argument("--capacitance", type=float, default=200e-15,
                    help="resonator capacitance [farad] (default 200e-15)")
    cc.add_argument("--critical-current", type=float, default=180e-6,
                    help="SQUID critical current [ampere] (default 180e-6)")
    cc.add_argument("--bias-phase", type=float, default=math.pi / 4.0,
                    help="static reduced flux phase [radian] (default pi/4)")
    cc.add_argument("--mod-depth", type=float, default=0.1 * math.pi / 4.0,
                    help="modulated reduced flux phase [radian] (default 0.1 pi/4)")
    cc.add_argument("--out", default="circuit.json", help="output JSON [path]")
    cc.set_defaults(run=cmd_circuit)

    for p in (sp, rd, gt, fd, tq, cc):
        p.add_argument("--seed", type=int, default=0,
                       help="seed echoed for reproducibility [integer] (default 0)")
    return parser


def cmd_spectrum(args) -> None:
    g_grid = np.linspace(args.g_min, args.g_max, args.g_steps)
    sweep = spectrum_sweep(args.omega_a, g_grid, args.levels, args.cutoff,
                           track=not args.no_track)
    header = (["g"] + [f"E{k}" for k in range(args.levels)]
              + [f"p{k}" for k in range(args.levels)])
    rows = (
        [sweep.g[i]] + list(sweep.energies[i]) + list(sweep.parities[i])
        for i in range(len(sweep.g))
    )
    write_csv(args.out, header, rows)
    _echo_config(args.out, "spectrum", {
        "omega_a": args.omega_a, "g_min": args.g_min, "g_max": args.g_max,
        "g_steps": args.g_steps, "levels": args.levels, "cutoff": args.cutoff,
        "track": not args.no_track,
    }, args.seed)


def cmd_rabi_drive(args) -> None:
    params = RabiParams(1.0, args.omega_a, args.g, args.cutoff)
    basis = diagonalize(build_rabi_hamiltonian(params))
    pulse, initial = panel_pulse(basis, args.panel, amplitude_ratio=args.amplitude_ratio)
    lam = effective_lambda(basis, pulse)
    period = math.pi / lam.omega_rabi if lam.omega_rabi > 0 else 1000.0
    series = rabi_oscillations(
        basis, pulse, initial, args.periods * period,
        n_samples=args.samples, indices=range(args.levels),
    )
    header = ["t"] + [f"P{k}" for k in range(args.levels)]
    rows = ([series.times[i]] + list(series.values[i]) for i in range(len(series.times)))
    write_csv(args.out, header, rows)
    initial_label = {"a": "dressed 0", "b": "dressed 1", "c": "bright"}[args.panel]
    _echo_config(args.out, "rabi-drive", {
        "panel": args.panel, "omega_a": args.omega_a, "g": args.g,
        "cutoff": args.cutoff, "amplitude_ratio": args.amplitude_ratio,
        "omega1_amp": pulse.omega1_amp, "omega2_amp": pulse.omega2_amp,
        "bar_omega1": pulse.bar_omega1, "bar_omega2": pulse.bar_omega2,
        "initial_state": initial_label, "periods": args.periods,
        "samples": args.samples, "rabi_rate": lam.omega_rabi,
    }, args.seed)


def cmd_gate(args) -> None:
    params = RabiParams(1.0, args.omega_a, args.g, args.cutoff)
    basis = diagonalize(build_rabi_hamiltonian(params))
    beta = args.beta if args.beta is not None else 0.02 * basis.transition(2, 1)
    spec = SechPulseSpec(beta=beta, theta=args.theta, phi=args.phi)
    report = execute_single_qubit_gate(spec, basis)
    write_json(args.out, report.to_json_dict())
    _echo_config(args.out, "gate", {
        "theta": args.theta, "phi": args.phi, "beta": beta,
        "omega_a": args.omega_a, "g": args.g, "cutoff": args.cutoff,
    }, args.seed)


def _fidelity_chunk(task):
    betas, n_states, rates, params_tuple, generator = task
    params = RabiParams(*params_tuple)
    baths = BathSpec.standard(*rates)
    table = hadamard_fidelity_benchmark(
        betas, n_states, baths, params=params, generator_basis=generator)
    return table.mean_fidelity, table.std_fidelity


def cmd_fidelity(args) -> None:
    gx = args.gamma_x if args.gamma_x is not None else args.gamma
    gz = args.gamma_z if args.gamma_z is not None else args.gamma
    gc = args.gamma_c if args.gamma_c is not None else args.gamma
    ratios = np.logspace(math.log10(args.ratio_min), math.log10(args.ratio_max), args.steps)
    # rates may all be zero (lossless reference); keep the pulse grid finite
    betas = ratios * (gx if gx > 0 else 1e-2)
    workers = int(os.environ.get("RABIHOLO_WORKERS", "1"))
    params_tuple = (1.0, args.omega_a, args.g, args.cutoff)
    if workers > 1:
        tasks = [([b], args.n_states, (gx, gz, gc), params_tuple, args.generator)
                 for b in betas]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_fidelity_chunk, tasks))
        means = np.concatenate([p[0] for p in parts])
        stds = np.concatenate([p[1] for p in parts])
    else:
        means, stds = _fidelity_chunk(
            (betas, args.n_states, (gx, gz, gc), params_tuple, args.generator))
    header = ["beta", "mean_fidelity", "std_fidelity", "n_states"]
    rows = ([betas[i], means[i], stds[i], args.n_states] for i in range(len(betas)))
    write_csv(args.out, header, rows)
    _echo_config(args.out, "fidelity", {
        "gamma_x": gx, "gamma_z": gz, "gamma_c": gc,
        "ratio_min": args.ratio_min, "ratio_max": args.ratio_max,
        "steps": args.steps, "n_states": args.n_states,
        "omega_a": args.omega_a, "g": args.g, "cutoff": args.cutoff,
        "generator": args.generator, "workers": workers,
    }, args.seed)


def cmd_two_qubit(args) -> None:
    left = RabiParams(1.0, args.left_omega_a, args.left_g, args.cutoff)
    right = RabiParams(1.0, args.right_omega_a, args.right_g, args.cutoff)
    circuit = CoupledCircuitParams.inversion_demo(critical_current=args.critical_current)
    result = simulate_population_inversion(
        left, right, circuit, n_samples=args.samples, periods=args.periods)
    header = ["t", "P_10", "P_01", "leakage"]
    series = result.series
    rows = ([series.times[i]] + list(series.values[i]) for i in range(len(series.times)))
    write_csv(args.out, header, rows)
    _echo_config(args.out, "two-qubit", {
        "left_omega_a": args.left_omega_a, "left_g": args.left_g,
        "right_omega_a": args.right_omega_a, "right_g": args.right_g,
        "cutoff": args.cutoff, "critical_current": args.critical_current,
        "periods": args.periods, "samples": args.samples,
        "omega_d": result.omega_d, "j_eff": result.j_eff,
        "initial_state": "1l0r",
    }, args.seed)


def cmd_circuit(args) -> None:
    circuit = CoupledCircuitParams(
        impedance_left=args.impedance, impedance_right=args.impedance,
        capacitance_left=args.capacitance, capacitance_right=args.capacitance,
        critical_current=args.critical_current,
        bias_phase=args.bias_phase, mod_depth=args.mod_depth,
    )
    dc = circuit_couplings(circuit)
    write_json(args.out, {
        "inputs": {
            "impedance_ohm": args.impedance,
            "capacitance_farad": args.capacitance,
            "critical_current_ampere": args.critical_current,
            "bias_phase_radian": args.bias_phase,
            "mod_depth_radian": args.mod_depth,
        },
        "couplings_omega_c_units": {
            "jbar_left": dc.jbar_left, "jbar_right": dc.jbar_right,
            "jbar_0": dc.jbar_0, "j_left": dc.j_left,
            "j_right": dc.j_right, "j_0": dc.j_0,
        },
    })
    _echo_config(args.out, "circuit", {
        "impedance": args.impedance, "capacitance": args.capacitance,
        "critical_current": args.critical_current,
        "bias_phase": args.bias_phase, "mod_depth": args.mod_depth,
    }, args.seed)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.run(args)
    except (ValueError, IndexError) as exc:
        print(f"rabiholo: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"rabiholo: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
