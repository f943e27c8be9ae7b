class ConfigError(ValueError):
    """Scenario document does not match the expected schema."""


class NumericalError(ArithmeticError):
    """A computation broke down numerically (rank gap, singular system, singular metric)."""
