"""Exception types shared across the package."""


class NonConvergence(RuntimeError):
    """The induced-velocity solver failed with both Newton and bisection."""


class InvalidInput(ValueError):
    pass


class InvalidSpeed(InvalidInput):
    """Cost was requested at a non-positive speed."""


class InvalidTimestep(ValueError):
    pass


class ValidationError(ValueError):
    """A parameter violated its invariant.

    ``key`` is a dotted path to the offending value, e.g. ``vehicle.mass``.
    Loaders prefix the section name as the error propagates outwards.
    """

    def __init__(self, key: str, message: str):
        self.key = key
        self.message = message
        super().__init__(f"{key}: {message}")

    def under(self, prefix: str) -> "ValidationError":
        if not prefix:
            return self
        return type(self)(f"{prefix}.{self.key}" if self.key else prefix, self.message)


class ConfigError(ValidationError):
    """Controller construction rejected an inconsistent channel pair."""


class InvalidConfig(ValidationError):
    """Simulation configuration failed validation."""


class MismatchedConfig(ValueError):
    """Two traces cannot be compared (different dt or duration)."""


class ParseError(ValueError):
    """Config file is not well-formed; carries the 1-based line if known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")
