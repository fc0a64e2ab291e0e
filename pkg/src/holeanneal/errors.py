"""Exception taxonomy shared by every module in the package."""


class HoleAnnealError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(HoleAnnealError, ValueError):
    """A parameter violates a documented precondition."""


class OutOfRangeError(HoleAnnealError, ValueError):
    """A reduced-time coordinate lies outside the unit interval."""


class SingularParameterError(HoleAnnealError, ValueError):
    """A closed form is undefined at the supplied couplings (e.g. zero hopping)."""


class SizeExceededError(HoleAnnealError, ValueError):
    """A full-space operation was requested for more sites than supported."""


class UnreachableTargetError(HoleAnnealError):
    """The target success probability exceeds the slow-anneal ceiling."""


class BracketFailureError(HoleAnnealError):
    """Automatic bracketing could not enclose the requested probability."""


class RegimeError(HoleAnnealError):
    """A closed form was evaluated outside its regime of validity."""


class NoCrossingError(HoleAnnealError):
    """The schedule never reaches the avoided-crossing condition."""
