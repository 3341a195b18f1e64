"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A precondition or configuration value is invalid.

    Messages name the offending parameter or config key.
    """


class NonFiniteMultiplier(ValidationError):
    """A Fourier multiplier produced NaN or infinity on the grid."""


class NegativeOrderOnNonzeroMean(ValidationError):
    """A negative-order homogeneous derivative was requested on data whose
    mean (zero-frequency) coefficient does not vanish."""


class ZeroData(ValidationError):
    """An operation that normalizes by the data norm received zero data."""


class NonConvergence(RuntimeError):
    """The fixed-point iteration failed to contract.

    Carries the partial trajectory (``field``) and the per-patch reports
    gathered so far (``reports``), when available.
    """

    def __init__(self, message, field=None, reports=None):
        super().__init__(message)
        self.field = field
        self.reports = reports or []


class BlowupDetected(RuntimeError):
    """The time integrator exceeded the configured sup-norm ceiling."""

    def __init__(self, message, time=None, sup_norm=None):
        super().__init__(message)
        self.time = time
        self.sup_norm = sup_norm
