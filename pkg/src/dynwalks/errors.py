"""Shared exception types."""


class GraphError(ValueError):
    """Invalid graph input or an operation outside its domain."""


class GenerationError(RuntimeError):
    """A randomized generator exhausted its retry budget."""


class CapabilityError(RuntimeError):
    """An exact computation was requested beyond the supported size."""


class ValidationError(ValueError):
    """A schedule failed common-stationarity validation.

    Carries the first offending step index in ``step``.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class TruncationError(RuntimeError):
    """A horizon-capped computation did not converge.

    Carries the horizon reached (``t``) and the value observed there.
    """

    def __init__(self, message, t, value):
        super().__init__(message)
        self.t = t
        self.value = value
