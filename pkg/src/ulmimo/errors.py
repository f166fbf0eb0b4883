"""Exception types shared across the package.

The CLI maps these onto distinct exit codes: invalid inputs and scenario
problems are configuration errors, non-convergence of a fixed-point solve
is reported separately from other numerical failures.
"""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class ScenarioError(InvalidInputError):
    """A scenario file failed to parse or validate."""


class NumericalError(RuntimeError):
    """A numerical routine could not produce a trustworthy result."""


class ConvergenceError(NumericalError):
    """A fixed-point iteration did not reach its tolerance.

    Carries the last relative residual so callers can decide whether the
    result is salvageable.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last relative residual {residual:.3e})")
        self.residual = residual


class DegenerateRegimeError(NumericalError):
    """The large-system equations have no valid solution for this input.

    Raised when the second-moment denominator is non-positive; the input
    distribution violates the applicability of the limit theorem and is
    never silently regularized.
    """


class ConditioningError(NumericalError):
    """A linear system was too ill-conditioned to solve reliably."""
