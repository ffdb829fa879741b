"""Exception types shared across the toolkit."""


class IrwdError(Exception):
    """Base class for all toolkit-specific errors."""


class ChannelSpecError(IrwdError):
    """A channel spec file is malformed or missing a required field."""


class DegenerateChannel(IrwdError):
    """A direct gain required to be nonzero (h11 or h22) is zero, or a
    quantity that must be positive vanishes."""


class SingularRelayGeometry(IrwdError):
    """The relay-to-destination gain matrix is singular, so no gain pair
    can meet both alignment targets."""


class AfInfeasible(IrwdError):
    """The relay power budget is below the power the aligned gains need."""


class NotInRegime(IrwdError):
    """A capacity expression was requested outside the regime where it is
    known to hold."""


class SingularCovariance(IrwdError):
    """A covariance block needed for a mutual-information value is
    numerically singular."""


class CodebookTooLarge(IrwdError):
    """Requested rates imply a codebook above the exhaustive-decoding cap."""
