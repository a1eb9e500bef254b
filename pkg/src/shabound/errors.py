"""Exception types shared across the package."""


class ShaboundError(Exception):
    """Base class for all package errors."""


class SingularModel(ShaboundError):
    """Raised when a Weierstrass model has discriminant zero."""


class IncompleteFactorization(ShaboundError):
    """A factorization budget was exhausted; carries the partial result."""

    def __init__(self, partial):
        self.partial = partial
        super().__init__(f"unfactored composite cofactor {partial.cofactor}")


class HypothesisViolated(ShaboundError):
    """A bound formula was evaluated outside the hypotheses it needs."""


class ClassifierDisagreement(ShaboundError):
    """The two independent S1/S2 classifiers disagree; indicates a bug."""


class UnreachableCusp(ShaboundError):
    """A forced congruence has no solution (factor polynomial has no root mod l)."""


class DegenerateFiber(ShaboundError):
    """A family parameter value lands on a singular fiber."""


class InputError(ShaboundError):
    """Invalid user-supplied input (CLI exit code 2)."""
