"""Single quantum Rabi system in a truncated Fock basis.

Builds and diagonalizes

    H = omega_c a'a + (omega_a / 2) sigma_z + g sigma_x (a' + a),

with hbar = 1 and every frequency measured in units of the cavity
frequency.  The product basis is qubit (x) Fock with the qubit factor
first: index q * n_fock + n holds qubit state q in {ground, excited}
and n photons.  The excitation parity (-1)^(a'a + sigma_+ sigma_-) is
conserved, which splits the dressed states into even and odd sectors
and forces the selection rules (odd operators such as sigma_x and
a + a' only connect opposite-parity states, even operators such as
sigma_z and (a + a')^2 only equal-parity states).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import linear_sum_assignment

from .errors import NumericalError, ParityMixingError

__all__ = [
    "Parity",
    "RabiParams",
    "DressedBasis",
    "SpectrumSweep",
    "MATRIX_ELEMENT_KINDS",
    "destroy",
    "quadrature",
    "qubit_operator",
    "field_operator",
    "parity_diagonal",
    "parity_operator",
    "build_rabi_hamiltonian",
    "diagonalize",
    "parity_of",
    "matrix_element",
    "dressed_operator",
    "spectrum_sweep",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]])  # basis order (ground, excited)

#: parity expectation below this magnitude means the vector straddles sectors
PARITY_THRESHOLD = 0.9


class Parity(enum.Enum):
    """Eigenvalue sector of the excitation-parity operator."""

    EVEN = "e"
    ODD = "o"

    @property
    def sign(self) -> int:
        return 1 if self is Parity.EVEN else -1


@dataclass(frozen=True)
class RabiParams:
    """Frequencies, coupling, and Fock cutoff of one qubit-cavity system.

    All frequencies are angular and dimensionless (units of the cavity
    frequency, so ``omega_c = 1.0`` is the natural reference).  ``n_fock``
    is the number of boson levels retained; the Hilbert dimension is
    ``2 * n_fock``.
    """

    omega_c: float = 1.0
    omega_a: float = 0.8
    g: float = 0.3
    n_fock: int = 30

    def __post_init__(self):
        vals = (self.omega_c, self.omega_a, self.g)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"non-finite Rabi parameters: {vals}")
        if self.omega_c <= 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")
        if self.omega_a < 0:
            raise ValueError(f"omega_a must be non-negative, got {self.omega_a}")
        if self.g < 0:
            raise ValueError(f"g must be non-negative, got {self.g}")
        if self.n_fock < 2:
            raise ValueError(f"n_fock must be at least 2, got {self.n_fock}")

    @property
    def dim(self) -> int:
        return 2 * self.n_fock


def destroy(n_fock: int) -> np.ndarray:
    """Bosonic annihilation operator on ``n_fock`` levels."""
    return np.diag(np.sqrt(np.arange(1.0, n_fock)), 1)


def quadrature(n_fock: int) -> np.ndarray:
    """Field quadrature a + a' on ``n_fock`` levels."""
    a = destroy(n_fock)
    return a + a.T


def qubit_operator(op: np.ndarray, n_fock: int) -> np.ndarray:
    """Embed a 2x2 qubit operator in the product space."""
    return np.kron(op, np.eye(n_fock))


def field_operator(op: np.ndarray) -> np.ndarray:
    """Embed a Fock-space operator in the product space."""
    return np.kron(np.eye(2), op)


def parity_diagonal(n_fock: int) -> np.ndarray:
    """Diagonal of the parity operator exp(i pi (a'a + sigma_+ sigma_-))."""
    boson = (-1.0) ** np.arange(n_fock)
    return np.concatenate([boson, -boson])  # (ground, excited) blocks


def parity_operator(n_fock: int) -> np.ndarray:
    return np.diag(parity_diagonal(n_fock))


def build_rabi_hamiltonian(params: RabiParams) -> np.ndarray:
    """Assemble the quantum Rabi Hamiltonian in the product basis.

    Returns a real symmetric ``(2 n_fock, 2 n_fock)`` matrix.  All three
    terms are real in this basis, so eigenvectors can be chosen real.
    """
    n = params.n_fock
    num = np.diag(np.arange(float(n)))
    h = params.omega_c * field_operator(num)
    h += 0.5 * params.omega_a * qubit_operator(SIGMA_Z, n)
    h += params.g * np.kron(SIGMA_X, quadrature(n))
    return h


@dataclass(frozen=True)
class DressedBasis:
    """Eigen-decomposition of a Rabi Hamiltonian with parity labels.

    ``energies`` ascend with the ground level shifted to zero, ``vectors``
    holds one eigenvector per column in the product basis (real, largest
    component positive), ``parities`` labels each column.
    """

    energies: np.ndarray
    vectors: np.ndarray
    parities: tuple[Parity, ...]
    n_fock: int

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def transition(self, upper: int, lower: int) -> float:
        """Transition frequency omega_upper - omega_lower."""
        return float(self.energies[upper] - self.energies[lower])


def parity_of(vector: np.ndarray, n_fock: int) -> Parity:
    """Classify a normalized product-basis vector by parity sector.

    Raises ParityMixingError when the parity expectation has magnitude
    below 0.9, which indicates a degeneracy or cutoff defect rather
    than a physical eigenstate.
    """
    p = parity_diagonal(n_fock)
    expval = float(np.real(np.sum(p * np.abs(vector) ** 2)))
    if expval > PARITY_THRESHOLD:
        return Parity.EVEN
    if expval < -PARITY_THRESHOLD:
        return Parity.ODD
    raise ParityMixingError(
        f"mixed-parity vector: <P> = {expval:.6f}; "
        "basis or cutoff defect (degenerate sector mixing?)"
    )


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column real positive."""
    v = np.array(vectors)
    for j in range(v.shape[1]):
        k = int(np.argmax(np.abs(v[:, j])))
        pivot = v[k, j]
        if pivot != 0:
            v[:, j] = v[:, j] * (np.conj(pivot) / abs(pivot))
    if np.iscomplexobj(v) and np.max(np.abs(v.imag)) < 1e-14:
        v = v.real.copy()
    return v


def _split_degenerate_parity(energies, vectors, pdiag, tol):
    """Rotate (near-)degenerate clusters onto parity eigenvectors.

    eigh returns an arbitrary mixture inside a degenerate cluster; since
    parity commutes with the Hamiltonian the cluster can always be split
    into definite-parity columns.
    """
    v = vectors
    i = 0
    n = len(energies)
    while i < n:
        j = i + 1
        while j < n and energies[j] - energies[j - 1] < tol:
            j += 1
        if j - i > 1:
            block = v[:, i:j]
            p_block = block.T.conj() @ (pdiag[:, None] * block)
            _, rot = eigh(p_block)
            v[:, i:j] = block @ rot
        i = j
    return v


def diagonalize(h: np.ndarray) -> DressedBasis:
    """Dressed basis of a Rabi Hamiltonian (or any product-space Hermitian).

    Eigenvalues ascend and are rescaled so the ground level sits at zero.
    Eigenvector phases follow a deterministic convention (largest
    component real positive) so matrix elements are reproducible run to
    run.  Parity labels are attached via :func:`parity_of`.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] % 2:
        raise ValueError(f"expected an even-dimensional square matrix, got {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.conj().T)) > 1e-12 * scale:
        raise ValueError("matrix is not Hermitian")
    try:
        energies, vectors = eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigensolver failed to converge for dimension {h.shape[0]}"
        ) from exc
    n_fock = h.shape[0] // 2
    pdiag = parity_diagonal(n_fock)
    vectors = _split_degenerate_parity(energies, vectors, pdiag, tol=1e-11 * scale)
    vectors = _fix_phases(vectors)
    energies = energies - energies[0]
    parities = tuple(parity_of(vectors[:, j], n_fock) for j in range(vectors.shape[1]))
    return DressedBasis(energies=energies, vectors=vectors, parities=parities, n_fock=n_fock)


MATRIX_ELEMENT_KINDS = ("sigma_x", "sigma_z", "quadrature", "quadrature_squared")


def _product_operator(kind: str, n_fock: int) -> np.ndarray:
    if kind == "sigma_x":
        return qubit_operator(SIGMA_X, n_fock)
    if kind == "sigma_z":
        return qubit_operator(SIGMA_Z, n_fock)
    if kind == "quadrature":
        return field_operator(quadrature(n_fock))
    if kind == "quadrature_squared":
        x = quadrature(n_fock)
        return field_operator(x @ x)
    raise ValueError(f"unknown operator kind {kind!r}; expected one of {MATRIX_ELEMENT_KINDS}")


def matrix_element(kind: str, basis: DressedBasis, s: int, t: int) -> complex:
    """Dressed matrix element <s| O |t> for O in the selection-rule set.

    ``kind`` is one of ``sigma_x``, ``sigma_z``, ``quadrature`` (a + a'),
    or ``quadrature_squared``.
    """
    dim = basis.dim
    if not (0 <= s < dim and 0 <= t < dim):
        raise IndexError(f"dressed indices ({s}, {t}) out of range for dimension {dim}")
    op = _product_operator(kind, basis.n_fock)
    return complex(basis.vectors[:, s].conj() @ op @ basis.vectors[:, t])


def dressed_operator(kind: str, basis: DressedBasis) -> np.ndarray:
    """Full operator transformed to the dressed basis."""
    op = _product_operator(kind, basis.n_fock)
    return basis.vectors.conj().T @ op @ basis.vectors


@dataclass(frozen=True)
class SpectrumSweep:
    """Level curves of the dressed spectrum over a coupling grid.

    ``energies[i, k]`` is level k at ``g[i]`` (ground rescaled to zero),
    ``parities[i, k]`` the matching label.  With tracking enabled the
    columns follow individual level curves through crossings instead of
    staying energy-sorted.
    """

    g: np.ndarray
    energies: np.ndarray
    parities: np.ndarray  # array of 'e'/'o' strings
    omega_a: float
    n_fock: int
    tracked: bool


def spectrum_sweep(
    omega_a: float,
    g_grid,
    n_levels: int,
    n_fock: int,
    *,
    omega_c: float = 1.0,
    track: bool = True,
) -> SpectrumSweep:
    """Sweep the dressed spectrum over an ascending coupling grid.

    When ``track`` is set, levels are followed from one grid point to the
    next by maximal eigenvector overlap, so each output column is a
    continuous curve of constant parity even through level crossings.
    """
    g_grid = np.asarray(g_grid, dtype=float)
    if g_grid.ndim != 1 or len(g_grid) == 0:
        raise ValueError("g_grid must be a non-empty 1-d array")
    if np.any(np.diff(g_grid) <= 0) and len(g_grid) > 1:
        raise ValueError("g_grid must be strictly ascending")
    if n_levels > 2 * n_fock:
        raise ValueError(f"n_levels = {n_levels} exceeds Hilbert dimension {2 * n_fock}")

    energies = np.empty((len(g_grid), n_levels))
    labels = np.empty((len(g_grid), n_levels), dtype=object)
    prev_vectors = None
    for i, g in enumerate(g_grid):
        try:
            basis = diagonalize(
                build_rabi_hamiltonian(RabiParams(omega_c, omega_a, g, n_fock))
            )
        except (ValueError, NumericalError) as exc:
            raise type(exc)(f"sweep failed at g = {g}: {exc}") from exc
        order = np.arange(n_levels)
        if track and prev_vectors is not None:
            # assign new columns to previous curves by maximal |overlap|
            overlap = np.abs(prev_vectors.conj().T @ basis.vectors)
            rows, cols = linear_sum_assignment(-overlap)
            order = cols[np.argsort(rows)]
        energies[i] = basis.energies[order]
        labels[i] = [basis.parities[k].value for k in order]
        if track:
            prev_vectors = basis.vectors[:, order]
    return SpectrumSweep(
        g=g_grid,
        energies=energies,
        parities=labels,
        omega_a=omega_a,
        n_fock=n_fock,
        tracked=track,
    )
