"""
Exception hierarchy for the SC-PAQ pipeline.
"""

from typing import Optional


class ScpaqError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ScpaqError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class PartitionError(ScpaqError, ValueError):
    """A frame or block cannot be partitioned as requested."""


class VideoFormatError(ScpaqError):
    """Raw video data does not match its declared layout."""

    def __init__(
        self,
        message: str,
        frame_index: Optional[int] = None,
        plane: Optional[str] = None,
        offset: Optional[int] = None,
    ):
        self.frame_index = frame_index
        self.plane = plane
        self.offset = offset
        super().__init__(message)


class ArtifactError(ScpaqError):
    """An output artifact could not be written or read back."""
