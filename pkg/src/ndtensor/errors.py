"""Exceptions raised by the tensor and tape layer."""


class ShapeError(ValueError):
    """Operand shapes do not conform to the requested operation."""


class NonFiniteError(ArithmeticError):
    """An operation produced Inf or NaN from finite inputs."""

    def __init__(self, kind: str, detail: str = ""):
        self.kind = kind
        message = f"Non-finite result in '{kind}'"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class TapeError(ValueError):
    """A Var was used with a tape that does not own it, or a backward precondition failed."""
