"""Exception types raised by oscnet."""


class OscnetError(ValueError):
    """Base class for all oscnet errors."""


class NonPositivePotential(OscnetError):
    """The mass-weighted potential has a free or unstable mode."""


class DimensionMismatch(OscnetError):
    pass


class InvalidModeSet(OscnetError):
    pass


class UnphysicalState(OscnetError):
    """A covariance violates the uncertainty relation."""


class NonPositiveFactor(OscnetError):
    pass


class InvalidParameter(OscnetError):
    pass


class GenerationFailure(OscnetError):
    """A random graph generator exhausted its retry budget."""


class PatternMismatch(OscnetError):
    """The interaction matrix does not have the required pattern."""


class NoEntanglementAtZeroT(OscnetError):
    pass


class TooManyModes(OscnetError):
    pass
