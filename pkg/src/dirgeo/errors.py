"""Exception types for numerical failure modes.

Invalid arguments (wrong shapes, out-of-domain values, bad option combos)
raise plain ``ValueError``/``TypeError``.  The classes below mark failures
of the numerics themselves, so callers can tell the two apart.
"""


class NumericalError(RuntimeError):
    """A computation failed to converge or left its validity region."""


class IntegrationError(NumericalError):
    """ODE integration aborted.

    Attributes
    ----------
    t : float
        Time of the last accepted step.
    state : ndarray
        Last accepted state vector.
    reason : str
    """

    def __init__(self, reason, t, state):
        super().__init__(f"{reason} (t={t:.6g})")
        self.reason = reason
        self.t = t
        self.state = state


class ShootingError(NumericalError):
    """Boundary-value solve for a connecting geodesic did not converge."""

    def __init__(self, msg, iterations, residual):
        super().__init__(f"{msg} ({iterations} iterations, residual {residual:.3e})")
        self.iterations = iterations
        self.residual = residual


class ConvergenceError(NumericalError):
    """An iterative solver ran out of iterations."""


class ConsistencyError(NumericalError):
    """A redundant self-check failed (results disagree beyond tolerance)."""
