"""Exception types shared across the package."""


class EbslError(ValueError):
    """Base class for all domain errors."""


class InvalidOpinionError(EbslError):
    """Raised when an opinion triple is outside the admissible simplex."""


class InvalidEvidenceError(EbslError):
    """Raised for negative or non-finite evidence masses."""


class InvalidScalarError(EbslError):
    """Raised for an inadmissible scalar weight (negative or non-finite)."""


class ThetaViolationError(EbslError):
    """Raised when positive evidence exceeds the discounting threshold.

    Carries the offending amount and the threshold so callers can report
    exactly how far the precondition was missed.
    """

    def __init__(self, p: float, theta: float, where: str = ""):
        self.p = p
        self.theta = theta
        loc = f" at {where}" if where else ""
        super().__init__(
            f"positive evidence {p!r} exceeds threshold theta={theta!r}{loc}; "
            f"weights above 1 would amplify evidence"
        )


class UnboundVariableError(EbslError):
    """Raised when an expression references a variable with no binding."""


class ParseError(EbslError):
    """Raised for malformed interaction-log input in strict mode."""
