"""Training-loop failures."""

from typing import Optional


class DivergenceError(RuntimeError):
    """A loss went non-finite or exceeded the divergence threshold."""

    def __init__(self, phase: str, step: int, value: Optional[float] = None, detail: str = ""):
        self.phase = phase
        self.step = step
        self.value = value
        message = f"Training diverged during {phase} at step {step}"
        if value is not None:
            message += f" (loss={value!r})"
        if detail:
            message += f": {detail}"
        super().__init__(message)
