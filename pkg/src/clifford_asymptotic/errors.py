"""Exception types raised by the geometry and flow routines."""


class DegenerateJet(ValueError):
    """The chart fails to be an immersion (EG - F^2 <= 0)."""


class NonHyperbolic(ArithmeticError):
    """f^2 - eg <= 0: no pair of real asymptotic directions.

    ``t`` and ``w`` hold the last valid state of an integration when the
    error is raised from inside the flow.
    """

    def __init__(self, message, t=None, w=None, curve=None):
        super().__init__(message)
        self.t = t
        self.w = w
        self.curve = curve


class BranchAmbiguous(NonHyperbolic):
    """f == 0, so the small root cannot be selected by sign(f)."""


class StepUnderflow(RuntimeError):
    """Adaptive step dropped below the configured minimum."""

    def __init__(self, message, t=None, w=None):
        super().__init__(message)
        self.t = t
        self.w = w


class IllConditioned(ValueError):
    """Extrapolation ladder too close together to separate powers of eps."""


class MissingThirdDerivative(ValueError):
    """Second variation requested for a field without h_uuv / h_uvv."""


class PoleSingularity(ValueError):
    """Point too close to the projection pole (0, 0, 0, 1)."""
