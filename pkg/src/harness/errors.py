"""Harness-level failures."""


class ConfigError(ValueError):
    """Experiment configuration is missing, malformed, or inconsistent."""


class RunError(RuntimeError):
    """A (mode, seed) cell failed; carries the run identity."""

    def __init__(self, run_id: str, cause: Exception):
        self.run_id = run_id
        self.cause = cause
        super().__init__(f"[{run_id}] {cause}")
