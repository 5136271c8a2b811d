"""
Error types for witt-strata
Every failure carries the exit code the command line reports for it
"""


class WittError(Exception):
    """Base class for all library errors"""
    exit_code = 1


class ProfileError(WittError, ValueError):
    """Malformed input or a violated data invariant"""


class ZeroElementError(ProfileError):
    """The zero element was passed where a nonzero element is required"""


class UnknownRegionError(WittError):
    """A polygon was evaluated where its truncated tail is unknown"""


class TruncationError(WittError):
    """The operation is undefined for truncated inputs"""


class InconclusiveError(WittError):
    """A finite computation could not decide the question asked"""
    exit_code = 3


class EnclosureError(WittError):
    """A certified enclosure did not reach the required width"""

    def __init__(self, message: str, width=None, index=None):
        super().__init__(message)
        self.width = width
        self.index = index


class VerificationError(WittError):
    """A property suite reported failures"""
    exit_code = 2
