"""Exception hierarchy for the qci package."""
from __future__ import annotations


class QCIError(Exception):
    """Base class for all library errors."""


class ConfigError(QCIError, ValueError):
    """Malformed or inconsistent algebra / run configuration."""


class NotPrime(ConfigError):
    pass


class NoSuchRoot(ConfigError):
    pass


class BadCommutationMatrix(ConfigError):
    pass


class DegenerateForm(QCIError):
    pass


class NotDiagonal(QCIError):
    pass


class NotAutomorphism(QCIError):
    pass


class AlgebraMismatch(QCIError):
    pass


class RelationViolated(QCIError):
    def __init__(self, i: int, witness):
        self.generator = i
        self.witness = witness
        super().__init__(f"x_{i + 1}^a_{i + 1} acts nonzero (witness basis vector {witness})")


class CommutationViolated(QCIError):
    def __init__(self, i: int, j: int, witness):
        self.pair = (i, j)
        self.witness = witness
        super().__init__(
            f"x_{i + 1} x_{j + 1} != q x_{j + 1} x_{i + 1} on basis vector {witness}"
        )


class NotInvariant(QCIError):
    pass


class HullConstructionFailed(QCIError):
    pass


class RadicalUncertain(QCIError):
    pass


class SplitBudgetExceeded(QCIError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ProjectiveInput(QCIError):
    pass


class NotIndecomposable(QCIError):
    pass


class SocleSearchFailed(QCIError):
    pass


class MissingSequence(QCIError):
    pass


class BudgetExceeded(QCIError):
    def __init__(self, message: str, fragment=None):
        super().__init__(message)
        self.fragment = fragment


class HypothesisViolated(QCIError):
    def __init__(self, offenders):
        self.offenders = list(offenders)
        super().__init__(f"summands of W lie in the component or its shift: {self.offenders}")


class ZeroPoint(QCIError, ValueError):
    pass


class BlockOutOfRange(QCIError, ValueError):
    pass


class NotDivisible(QCIError):
    pass
