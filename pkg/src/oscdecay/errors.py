"""Exception types shared by all modules."""


class OscDecayError(Exception):
    """Base class for every error raised by the package."""


class DomainError(OscDecayError, ValueError):
    """An argument lies outside the domain of an operation."""


class HeterogeneityError(DomainError):
    """Monomials of a polynomial do not share one homogeneity degree."""

    def __init__(self, first, second, deg_first, deg_second):
        self.first = first
        self.second = second
        super().__init__(
            f"monomial x1^{first[0]} x2^{first[1]} has degree {deg_first} but "
            f"x1^{second[0]} x2^{second[1]} has degree {deg_second}"
        )


class UnsupportedCaseError(DomainError):
    """The configuration is excluded, e.g. conic weights (1, 1)."""


class DegenerateInputError(DomainError):
    """The zero polynomial, or a polynomial vanishing on a whole ray."""


class NumericError(OscDecayError, ArithmeticError):
    """A numerical procedure failed to converge.

    ``best`` and ``error_estimate`` carry the last available iterate when
    there is one.
    """

    def __init__(self, message, best=None, error_estimate=None):
        super().__init__(message)
        self.best = best
        self.error_estimate = error_estimate


class InsufficientDataError(OscDecayError):
    """Too few usable samples for a fit."""


class CoverageError(DomainError):
    """A dilated surface leaves the sampled domain of a grid function."""

    def __init__(self, t_values):
        self.t_values = list(t_values)
        super().__init__(f"surface support exits the sampled grid for t in {self.t_values}")
