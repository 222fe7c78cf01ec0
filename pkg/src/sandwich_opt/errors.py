"""Exception types shared across the package."""


class SandwichOptError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(SandwichOptError):
    """Malformed, non-finite, or structurally invalid input data."""


class DomainError(SandwichOptError):
    """Input lies outside the mathematical domain of the operation."""


class ParameterError(SandwichOptError):
    """Order parameter outside the supported range."""


class InvalidBox(SandwichOptError):
    """Spectral box [alpha, beta] is empty, non-positive, or violated."""


class NumericalError(SandwichOptError):
    """A computed quantity violates a hard sanity bound."""


class InvalidStepSize(SandwichOptError):
    """Step size outside the stable range (0, 2/beta_star)."""


class InvalidStart(SandwichOptError):
    """Starting iterate lies outside the feasible box beyond tolerance."""
