"""Exception types raised across the package.

Every validated input problem derives from ``MlsnaError`` so the CLI can map
it to exit status 1.
"""


class MlsnaError(ValueError):
    """Base class for validated input errors."""


class DuplicateEdge(MlsnaError):
    pass


class SelfLoop(MlsnaError):
    pass


class EmptyLog(MlsnaError):
    pass


class UnknownLayer(MlsnaError, KeyError):
    pass


class UnknownNode(MlsnaError, KeyError):
    pass


class AlphaOutOfRange(MlsnaError):
    pass


class DegenerateNetwork(MlsnaError):
    pass


class NoSuchEdge(MlsnaError):
    pass


class DegenerateDenominator(MlsnaError):
    pass


class NoConvergence(MlsnaError):
    pass


class WeightOutOfRange(MlsnaError):
    pass


class UniverseMismatch(MlsnaError):
    pass


class InfeasibleSpec(MlsnaError):
    pass


class WiringFailure(MlsnaError):
    pass


class EmptyGroup(MlsnaError):
    pass


class FrameMismatch(MlsnaError):
    pass


class EmptyDataset(MlsnaError):
    pass


class LengthMismatch(MlsnaError):
    pass


class InvalidParameter(MlsnaError):
    pass
