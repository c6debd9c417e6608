"""Exception types shared across the package."""


class StarTebdError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(StarTebdError, ValueError):
    """Invalid configuration value or malformed config file."""


class InstanceTooLargeError(ConfigError):
    """Dense-oracle size guard exceeded."""


class DivergenceError(StarTebdError, RuntimeError):
    """Evolution produced non-finite observables or blew past the bond cap.

    Carries the step index at which the run was aborted.
    """

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step
