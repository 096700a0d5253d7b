"""Exception and warning types shared across the package."""


class NumericalError(RuntimeError):
    """A numerical routine failed (non-convergence, drift, leakage)."""


class ParityMixingError(NumericalError):
    """An eigenvector straddles parity sectors; basis or cutoff defect."""


class GateLeakageError(NumericalError):
    """A gate propagation leaked too much population out of the qubit subspace."""


class RwaViolationWarning(UserWarning):
    """A rotating-wave-approximation validity condition is strained."""
