"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An argument broke a documented precondition."""


class DegreeMatrixParseError(ValueError):
    """A degree-matrix text could not be parsed; the message names the cell."""


class EnumerationBudgetError(RuntimeError):
    """Exhaustive codeword enumeration would exceed the configured dimension cap."""

    def __init__(self, dimension: int, budget: int):
        super().__init__(
            f"code dimension {dimension} exceeds enumeration budget {budget} "
            f"(2^{dimension} codewords); raise max_dim to override"
        )
        self.dimension = dimension
        self.budget = budget


class DecodingInvariantError(RuntimeError):
    """The erasure system was inconsistent, which cannot happen for genuine BEC output."""


class ConfigError(ValueError):
    """An unknown or inconsistent run configuration (e.g. decoder name)."""
