"""Exception types shared across the package."""


class SwarmformError(Exception):
    """Base class for all errors raised by this package."""


class NumericDomainError(SwarmformError, ValueError):
    """Numeric data outside the valid domain (non-finite values, a pole set
    that is not closed under conjugation, ...)."""


class ConfigurationError(SwarmformError, ValueError):
    """A static parameter violates its contract (dt <= 0, c_max <= 0, ...)."""


class SynthesisError(SwarmformError, ValueError):
    """Gain synthesis is impossible for the given plant (g = 0 or
    k_p * k_d = 0 leaves the position/velocity channels unreachable)."""


class ScenarioError(SwarmformError, ValueError):
    """Scenario text failed to parse or validate.  The message always names
    the offending key."""


class SimulationAbort(SwarmformError, RuntimeError):
    """The integrator produced a non-finite state.  Carries a diagnostics
    payload: time, agent index and the offending state."""

    def __init__(self, t, agent, state, message="non-finite state"):
        self.t = t
        self.agent = agent
        self.state = state
        super().__init__(f"{message} at t={t:.6f} s (agent {agent}): {state}")


class ModelValidityWarning(UserWarning):
    """Tilt angle left the small-angle regime the linear model assumes."""
