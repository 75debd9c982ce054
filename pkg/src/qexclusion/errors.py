"""Exception hierarchy shared by all modules."""


class ExclusionError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(ExclusionError):
    pass


class NotPSD(ExclusionError):
    pass


class DimensionMismatch(ExclusionError):
    pass


class CountMismatch(ExclusionError):
    pass


class ProbSum(ExclusionError):
    pass


class NotDensity(ExclusionError):
    pass


class BadSubsetSize(ExclusionError):
    pass


class TooFewStates(ExclusionError):
    pass


class EmptyEnsemble(ExclusionError):
    pass


class DegenerateK(ExclusionError):
    """The fidelity witness divides by k - 2 and is refused for k < 3."""


class BadEps(ExclusionError):
    pass


class ScaleCap(ExclusionError):
    """Problem exceeds the dense desk-scale limits."""
