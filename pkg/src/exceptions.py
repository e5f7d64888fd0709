"""Error types raised across the package.

Every error derives from PosiError so callers (the CLI, the simulation
harness) can catch the whole family in one place.
"""


class PosiError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PosiError, ValueError):
    """Invalid scenario, CLI or file input."""


class DataValidationError(ConfigError):
    """An input table failed schema or value validation."""


class BadLevel(PosiError, ValueError):
    """Significance level outside (0, 1)."""


class NonPsd(PosiError, ValueError):
    """Matrix fails the symmetric positive-semidefinite check."""


class InvalidCorrelation(PosiError, ValueError):
    """Matrix is PSD but not a correlation matrix (bad diagonal)."""


class DomainError(PosiError, ValueError):
    """Special-function argument outside its domain."""


class NoConvergence(PosiError, RuntimeError):
    """An iterative routine did not converge or failed to bracket."""


class IndexOutOfRange(PosiError, IndexError):
    """Column index outside 1..p."""


class RankDeficient(PosiError, ValueError):
    """Submatrix does not have full column rank."""


class TooLarge(PosiError, ValueError):
    """Requested enumeration exceeds the configured cap."""


class DegenerateDof(PosiError, ValueError):
    """No residual degrees of freedom (n <= |M|)."""


class ModelNotInCandidateSet(PosiError, KeyError):
    """Selected model is not a member of the candidate set."""


class MissingForcedIndex(PosiError, ValueError):
    """A candidate model omits the coefficient every model must contain."""


class DimensionMismatch(PosiError, ValueError):
    """Stacked vectors disagree with the candidate offsets."""


class NonBinaryResponse(PosiError, ValueError):
    """Response contains values other than 0 and 1."""


class ProbOutOfRange(PosiError, ValueError):
    """Success probabilities not bounded away from 0 and 1."""


class SingularHessian(PosiError, ValueError):
    """Fitted Hessian is not invertible."""


class MleNonexistent(PosiError, RuntimeError):
    """Maximum-likelihood estimate does not exist (separation)."""


class KTooLarge(PosiError, ValueError):
    """More selection steps requested than available regressors."""


class SelectionFailed(PosiError, RuntimeError):
    """Model selector could not produce a model."""


class AllModelsFailed(SelectionFailed):
    """Every candidate failed to fit inside a ranking selector."""
