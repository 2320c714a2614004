"""Exception hierarchy shared by all pipeline stages."""


class BrailleError(Exception):
    """Base class for every error raised by this package."""


class ImageFormatError(BrailleError, ValueError):
    """Unreadable, unsupported or zero-sized image file."""


class NoDotMassError(BrailleError):
    """The lower grey range of the histogram holds no pixels at all."""


class NoCircleCandidatesError(BrailleError):
    """No connected component qualified as a dot; the page is unreadable."""


class StructureError(BrailleError):
    """The page geometry could not be recovered from the dot cloud."""


class PitchExtractionError(StructureError):
    """Fewer than two peaks in a peer-distance distribution."""

    def __init__(self, message, dominant=None):
        super().__init__(message)
        self.dominant = dominant


class MappingError(BrailleError, ValueError):
    """Malformed mapping table or duplicate key under the ``error`` policy."""


class UnmappableGraphemeError(BrailleError, KeyError):
    """A grapheme has no code in the mapping table."""

    def __str__(self):
        return self.args[0] if self.args else ""
