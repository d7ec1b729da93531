from typing import Optional


class SteeringSimException(Exception):
    """Base exception for the steering simulator."""
    pass


class ConfigValidationError(SteeringSimException):
    """Raised when a scenario or config file fails to parse or validate."""
    pass


class PresetNotFoundError(SteeringSimException):
    """Raised when a preset name does not resolve to a file."""
    pass


class InvalidReferenceError(SteeringSimException):
    """Raised when a reference cannot supply analytic derivatives."""
    pass


class NumericFailure(SteeringSimException):
    """Raised when a state or control value stops being finite."""

    def __init__(self, message: str, t: Optional[float] = None):
        super().__init__(message)
        self.t = t


class BoundaryViolation(SteeringSimException):
    """Raised when (delta, xi) leaves the guarded interior of the constraint set."""

    def __init__(
        self,
        message: str,
        *,
        quantity: str,
        delta: float,
        xi: Optional[float] = None,
        margin: Optional[float] = None,
        t: Optional[float] = None
    ):
        super().__init__(message)
        self.quantity = quantity
        self.delta = delta
        self.xi = xi
        self.margin = margin
        self.t = t

    def describe(self) -> str:
        when = f"t={self.t:.4f}s" if self.t is not None else "t=?"
        xi = f"{self.xi:.6g}" if self.xi is not None else "n/a"
        margin = f"{self.margin:.3e}" if self.margin is not None else "n/a"
        return f"{self.quantity} guard tripped at {when} (delta={self.delta:.6g}, xi={xi}, margin={margin})"
