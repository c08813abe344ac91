"""Exception types shared across the package."""


class ABCNetError(Exception):
    pass


class InvalidInputError(ABCNetError, ValueError):
    """Bad argument values (non-finite vectors, empty inputs, ...)."""


class ConfigError(ABCNetError, ValueError):
    """Invalid experiment or colony configuration."""


class BudgetExhausted(ABCNetError):
    """Raised by run_iteration when another full iteration would overrun the budget."""


class DataCorruptionError(ABCNetError, ValueError):
    """Event data referencing bees outside [0, N) or an unknown layer."""


class NumericalError(ABCNetError, ArithmeticError):
    pass
