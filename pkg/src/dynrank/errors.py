"""Exception hierarchy shared across the package."""


class DynrankError(Exception):
    """Base class for all errors raised by dynrank."""


class ProfileError(DynrankError):
    """Malformed approval profile or profile document."""


class UnknownCandidateError(ProfileError):
    """A candidate name does not occur in the profile."""


class EmptyGroupError(DynrankError):
    """An operation requiring a nonempty voter group received an empty one."""


class ZeroSupportImplementedError(DynrankError):
    """An implemented candidate has no supporters; debt assignment is undefined."""


class SessionError(DynrankError):
    """Invalid transition on a selection session."""


class AlreadyImplementedError(SessionError):
    """The candidate was implemented before."""


class DepthViolationError(SessionError):
    """The candidate lies below the session's depth restriction."""


class SearchBudgetExceeded(DynrankError):
    """Adversarial search ran out of budget; carries the best partial result."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
