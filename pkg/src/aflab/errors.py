"""Exception hierarchy shared by every aflab module."""


class AflabError(Exception):
    """Base class for all errors raised by aflab."""


class DomainError(AflabError, ValueError):
    """An argument lies outside the domain of an operation."""

    def __init__(self, message, node=None):
        if node is not None:
            message = f"{message} (node {node})"
        super().__init__(message)
        self.node = node


class ConfigurationError(AflabError, ValueError):
    """Invalid construction parameters (grid sizes, family parameters)."""


class ConvexityError(DomainError):
    """The reverse Weingarten map of a support body is not positive definite."""


class StarShapedError(DomainError):
    """A radial graph has a non-positive radius."""


class RegularityError(DomainError):
    """A parametric curve has a vanishing velocity."""


class HypothesisError(AflabError):
    """A theorem hypothesis required by a computation is violated."""


class UsageError(AflabError):
    """Inconsistent or unknown user input (check ids, grid mismatch, spec files)."""


class PhiDomainError(DomainError):
    """A weight function is evaluated outside its admissible interval."""
