"""Two-tone driving of the physical qubit and the effective lambda model.

The drive couples to the qubit alone,

    H_d(t) = W1(t) cos(w1 t + phi1) sigma_x + W2(t) cos(w2 t + phi2) sigma_z,

and inherits the parity selection rules of the dressed basis: the
sigma_x tone addresses opposite-parity pairs (here the 0-2 transition),
the sigma_z tone equal-parity pairs (1-2).  On resonance and for weak
amplitudes the rotating-wave approximation reduces the driven system to
a three-level lambda configuration whose Rabi rate, mixing angle, and
relative phase are carried by :class:`LambdaModel`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NumericalError, RwaViolationWarning
from .qrm import (
    SIGMA_X,
    SIGMA_Z,
    DressedBasis,
    dressed_operator,
    matrix_element,
    qubit_operator,
)

__all__ = [
    "DrivePulse",
    "LambdaModel",
    "TimeSeries",
    "build_drive_hamiltonian",
    "propagate_schrodinger",
    "populations",
    "effective_lambda",
    "bright_dark",
    "lambda_hamiltonian",
    "default_time_step",
    "panel_pulse",
    "rabi_oscillations",
]

#: norm drift above this triggers step halving in the propagator
NORM_DRIFT_TOL = 1e-6
MAX_HALVINGS = 6

#: drive amplitude above this fraction of the smallest addressed
#: transition frequency strains the rotating-wave approximation
RWA_AMPLITUDE_RATIO = 0.1


def _unit_envelope(t: float) -> float:
    return 1.0


@dataclass
class DrivePulse:
    """Two-tone drive: amplitudes, carriers, phases, common envelope.

    Amplitudes are peak values; ``envelope`` is a scalar function of time
    in [0, 1] applied multiplicatively to both tones (constant 1 by
    default).  Frequencies are angular, in cavity-frequency units.
    """

    omega1_amp: float
    omega2_amp: float
    bar_omega1: float
    bar_omega2: float
    phi1: float = 0.0
    phi2: float = 0.0
    envelope: Callable[[float], float] = field(default=_unit_envelope)

    def __post_init__(self):
        vals = (self.omega1_amp, self.omega2_amp, self.bar_omega1,
                self.bar_omega2, self.phi1, self.phi2)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"non-finite drive parameters: {vals}")
        if self.omega1_amp < 0 or self.omega2_amp < 0:
            raise ValueError("drive amplitudes must be non-negative")
        if self.bar_omega1 <= 0 or self.bar_omega2 <= 0:
            raise ValueError("carrier frequencies must be positive")

    def amp1(self, t: float) -> float:
        return self.omega1_amp * self.envelope(t)

    def amp2(self, t: float) -> float:
        return self.omega2_amp * self.envelope(t)


@dataclass(frozen=True)
class TimeSeries:
    """Times plus a per-time payload (states, populations, matrices)."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")


def build_drive_hamiltonian(t: float, pulse: DrivePulse, n_fock: int) -> np.ndarray:
    """Lab-frame drive Hamiltonian at time t on the product space."""
    if not np.isfinite(t):
        raise ValueError(f"non-finite time {t}")
    c1 = pulse.amp1(t) * math.cos(pulse.bar_omega1 * t + pulse.phi1)
    c2 = pulse.amp2(t) * math.cos(pulse.bar_omega2 * t + pulse.phi2)
    return c1 * qubit_operator(SIGMA_X, n_fock) + c2 * qubit_operator(SIGMA_Z, n_fock)


def default_time_step(omega_max: float) -> float:
    """Integration step resolving the largest retained frequency.

    Fifty samples per period of ``omega_max``; for dressed-basis
    propagation pass the full spectral spread so the step also sits well
    inside the RK4 stability region.
    """
    if omega_max <= 0:
        raise ValueError("omega_max must be positive")
    return (2.0 * math.pi / omega_max) / 50.0


def propagate_schrodinger(
    hamiltonian,
    psi0: np.ndarray,
    t_grid: np.ndarray,
    *,
    max_step: float | None = None,
) -> TimeSeries:
    """Fixed-step fourth-order Runge-Kutta integration of i dpsi/dt = H(t) psi.

    ``hamiltonian`` is either a constant matrix or a callable t -> matrix.
    ``t_grid`` must be uniform; states are recorded at every grid point,
    with the internal step subdivided to at most ``max_step`` (grid
    spacing by default).  If the final norm drifts by more than 1e-6 the
    whole run is repeated with the step halved, at most six times.

    ``psi0`` may also be a (dim, k) matrix of k column states, which are
    propagated together (used to build propagators).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2:
        raise ValueError("t_grid must contain at least two points")
    dts = np.diff(t_grid)
    if not np.allclose(dts, dts[0], rtol=1e-9, atol=1e-15):
        raise ValueError("t_grid must be uniform")
    dt_grid = float(dts[0])
    if dt_grid <= 0:
        raise ValueError("t_grid must be increasing")

    psi0 = np.asarray(psi0, dtype=complex)
    h_of_t = hamiltonian if callable(hamiltonian) else (lambda t, _h=np.asarray(hamiltonian): _h)
    dim = h_of_t(t_grid[0]).shape[0]
    if psi0.shape[0] != dim:
        raise ValueError(f"state dimension {psi0.shape[0]} does not match H dimension {dim}")

    norm0 = np.linalg.norm(psi0, axis=0)
    n_sub = 1 if max_step is None else max(1, math.ceil(dt_grid / max_step))
    for attempt in range(MAX_HALVINGS + 1):
        h = dt_grid / n_sub
        out = np.empty((len(t_grid),) + psi0.shape, dtype=complex)
        out[0] = psi0
        psi = psi0.copy()
        for i in range(len(t_grid) - 1):
            t = t_grid[i]
            for k in range(n_sub):
                tk = t + k * h
                hm = h_of_t(tk + 0.5 * h)
                k1 = -1j * (h_of_t(tk) @ psi)
                k2 = -1j * (hm @ (psi + 0.5 * h * k1))
                k3 = -1j * (hm @ (psi + 0.5 * h * k2))
                k4 = -1j * (h_of_t(tk + h) @ (psi + h * k3))
                psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out[i + 1] = psi
        drift = float(np.max(np.abs(np.linalg.norm(psi, axis=0) - norm0)))
        if drift < NORM_DRIFT_TOL:
            return TimeSeries(times=t_grid, values=out)
        n_sub *= 2
    raise NumericalError(
        f"norm drift {drift:.3e} persists after {MAX_HALVINGS} step halvings "
        f"(final step {h:.3e})"
    )


def populations(traj: TimeSeries, basis: DressedBasis, indices) -> TimeSeries:
    """Populations P_i(t) = |<i|psi(t)>|^2 for the requested dressed indices."""
    indices = list(indices)
    for i in indices:
        if not 0 <= i < basis.dim:
            raise IndexError(f"dressed index {i} out of range for dimension {basis.dim}")
    proj = basis.vectors[:, indices].conj().T  # (k, dim)
    amps = traj.values @ proj.T
    return TimeSeries(times=traj.times, values=np.abs(amps) ** 2)


def _wrap_angle(x: float) -> float:
    """Wrap to (-pi, pi]."""
    y = (x + math.pi) % (2.0 * math.pi) - math.pi
    return math.pi if y == -math.pi else y


@dataclass(frozen=True)
class LambdaModel:
    """Rotating-frame three-level reduction of the two-tone drive.

    The interaction Hamiltonian on the dressed levels (0, 1, 2) is

        H_I = W(t) (e^{i phi} sin(theta/2) |2><0| - cos(theta/2) |2><1| + h.c.)

    with peak Rabi rate ``omega_rabi``, mixing angle ``theta`` in
    (-pi, pi], relative carrier phase ``phi = phi2 - phi1``, and the
    transition elements ``x20``, ``z21`` the reduction was built from.
    """

    omega_rabi: float
    theta: float
    phi: float
    x20: complex
    z21: complex
    envelope: Callable[[float], float] = field(default=_unit_envelope)

    def rabi(self, t: float) -> float:
        """Instantaneous Rabi rate W(t)."""
        return self.omega_rabi * self.envelope(t)

    def couplings(self) -> tuple[complex, complex]:
        """Peak coefficients (c0, c1) of |2><0| and |2><1| in H_I."""
        c0 = self.omega_rabi * np.exp(1j * self.phi) * math.sin(self.theta / 2.0)
        c1 = -self.omega_rabi * math.cos(self.theta / 2.0)
        return complex(c0), complex(c1)

    def hamiltonian(self, t: float) -> np.ndarray:
        return lambda_hamiltonian(self.theta, self.phi, self.rabi(t))


def lambda_hamiltonian(theta: float, phi: float, rabi: float) -> np.ndarray:
    """Three-level lambda Hamiltonian for a given mixing angle and rate."""
    h = np.zeros((3, 3), dtype=complex)
    h[2, 0] = rabi * np.exp(1j * phi) * math.sin(theta / 2.0)
    h[2, 1] = -rabi * math.cos(theta / 2.0)
    h[0, 2] = np.conj(h[2, 0])
    h[1, 2] = np.conj(h[2, 1])
    return h


def effective_lambda(
    basis: DressedBasis,
    pulse: DrivePulse,
    *,
    detuning_tol: float = 1e-6,
) -> LambdaModel:
    """Reduce a resonant two-tone drive to its lambda-model parameters.

    Requires carrier 1 on the 0-2 transition and carrier 2 on the 2-1
    transition within ``detuning_tol`` (in cavity-frequency units).
    Amplitudes beyond a tenth of the smallest addressed transition
    frequency strain the rotating-wave approximation and raise
    :class:`RwaViolationWarning`.
    """
    w20 = basis.transition(2, 0)
    w21 = basis.transition(2, 1)
    if abs(pulse.bar_omega1 - w20) > detuning_tol:
        raise ValueError(
            f"carrier 1 must sit on the 0-2 transition: "
            f"bar_omega1 = {pulse.bar_omega1:.9f}, omega_20 = {w20:.9f}"
        )
    if abs(pulse.bar_omega2 - w21) > detuning_tol:
        raise ValueError(
            f"carrier 2 must sit on the 2-1 transition: "
            f"bar_omega2 = {pulse.bar_omega2:.9f}, omega_21 = {w21:.9f}"
        )
    w_min = min(w21, w20, pulse.bar_omega1, pulse.bar_omega2)
    amp_max = max(pulse.omega1_amp, pulse.omega2_amp)
    if amp_max > RWA_AMPLITUDE_RATIO * w_min:
        warnings.warn(
            f"drive amplitude {amp_max:.4g} exceeds {RWA_AMPLITUDE_RATIO} of the "
            f"smallest transition frequency {w_min:.4g}; lambda model unreliable",
            RwaViolationWarning,
            stacklevel=2,
        )

    x20 = matrix_element("sigma_x", basis, 2, 0)
    z21 = matrix_element("sigma_z", basis, 2, 1)
    # real-symmetric Hamiltonian and real phase convention make these real
    if max(abs(x20.imag), abs(z21.imag)) > 1e-9:
        raise ValueError("complex transition elements; unexpected phase convention")
    r0 = 0.5 * pulse.omega1_amp * x20.real
    r1 = 0.5 * pulse.omega2_amp * z21.real
    omega_rabi = math.hypot(r0, r1)
    theta = _wrap_angle(-2.0 * math.atan2(r0, r1))
    phi = _wrap_angle(pulse.phi2 - pulse.phi1)
    return LambdaModel(
        omega_rabi=omega_rabi,
        theta=theta,
        phi=phi,
        x20=x20,
        z21=z21,
        envelope=pulse.envelope,
    )


def bright_dark(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Bright/dark superpositions of the two lower lambda levels.

    Returned as three-component vectors (zero weight on level 2).  The
    bright state carries all the coupling to level 2; the dark state is
    annihilated by the lambda Hamiltonian for every rate.
    """
    half = theta / 2.0
    bright = np.array([np.exp(-1j * phi) * math.sin(half), -math.cos(half), 0.0], dtype=complex)
    dark = np.array([math.cos(half), np.exp(1j * phi) * math.sin(half), 0.0], dtype=complex)
    return bright, dark


# ---------------------------------------------------------------------------
# canonical driven-oscillation runs (one per drive configuration)

PANELS = ("a", "b", "c")


def panel_pulse(basis: DressedBasis, panel: str, *, amplitude_ratio: float = 0.02):
    """Preset pulse and initial state for the three canonical drive runs.

    Panel a: sigma_x tone only, amplitude 0.02 omega_20, start in |0>;
    full-contrast exchange 0 <-> 2.  Panel b: sigma_z tone only,
    amplitude 0.02 omega_21, start in |1>; exchange 1 <-> 2.  Panel c:
    both tones at 0.02 omega_21, start in the bright superposition so
    the transfer to |2> is full contrast.

    Returns ``(pulse, initial)`` with ``initial`` a product-basis state.
    """
    w20 = basis.transition(2, 0)
    w21 = basis.transition(2, 1)
    if panel == "a":
        pulse = DrivePulse(amplitude_ratio * w20, 0.0, w20, w21)
        initial = basis.vectors[:, 0].astype(complex)
    elif panel == "b":
        pulse = DrivePulse(0.0, amplitude_ratio * w21, w20, w21)
        initial = basis.vectors[:, 1].astype(complex)
    elif panel == "c":
        pulse = DrivePulse(amplitude_ratio * w21, amplitude_ratio * w21, w20, w21)
        lam = effective_lambda(basis, pulse)
        b, _ = bright_dark(lam.theta, lam.phi)
        initial = basis.vectors[:, :2] @ b[:2]
    else:
        raise ValueError(f"unknown panel {panel!r}; expected one of {PANELS}")
    return pulse, initial


def rabi_oscillations(
    basis: DressedBasis,
    pulse: DrivePulse,
    initial: np.ndarray,
    t_final: float,
    *,
    n_samples: int = 601,
    indices=(0, 1, 2),
    max_step: float | None = None,
) -> TimeSeries:
    """Propagate the full lab-frame Hamiltonian and return dressed populations.

    The propagation runs in the dressed frame, where the static part is
    diagonal, with the drive matrices rotated once up front.  ``initial``
    is a product-basis state.  The default step resolves the full
    retained spectral spread (see :func:`default_time_step`).
    """
    sx = dressed_operator("sigma_x", basis)
    sz = dressed_operator("sigma_z", basis)
    diag = basis.energies
    h_static = np.diag(diag)

    def h_of_t(t: float) -> np.ndarray:
        c1 = pulse.amp1(t) * math.cos(pulse.bar_omega1 * t + pulse.phi1)
        c2 = pulse.amp2(t) * math.cos(pulse.bar_omega2 * t + pulse.phi2)
        return h_static + c1 * sx + c2 * sz

    if max_step is None:
        max_step = default_time_step(float(diag[-1] - diag[0]))
    psi0 = basis.vectors.conj().T @ np.asarray(initial, dtype=complex)
    t_grid = np.linspace(0.0, t_final, n_samples)
    traj = propagate_schrodinger(h_of_t, psi0, t_grid, max_step=max_step)
    # dressed-frame amplitudes: populations read off directly
    pops = np.abs(traj.values[:, list(indices)]) ** 2
    return TimeSeries(times=t_grid, values=pops)
