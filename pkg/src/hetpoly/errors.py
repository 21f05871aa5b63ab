"""Exception types shared across the package."""


class HetpolyError(Exception):
    """Base class for all package-specific errors."""


class SingularConfigurationError(HetpolyError):
    """Two chain sites came closer than the coincidence floor d_min.

    Signals an invalid state (the 1/d**6 kernels diverge), not a
    recoverable condition.
    """


class AcceptanceRateError(HetpolyError):
    """Measured Metropolis acceptance rate outside the sane [0.05, 0.95] band."""


class StabilityError(HetpolyError):
    """Integrator time step violates the stability bound."""


class NonConvergenceError(HetpolyError):
    """Iterative procedure hit its iteration cap before reaching tolerance."""


class SaddlePointError(HetpolyError):
    """Hessian has a negative eigenvalue beyond the zero-mode tolerance."""


class FitWindowError(HetpolyError):
    """No stable fitting window could be identified in the series."""


class CampaignError(HetpolyError):
    """Campaign-level failure (too many failed jobs, bad spec, ...)."""
