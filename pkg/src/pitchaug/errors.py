"""Exception hierarchy shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all pitchaug errors."""


class InsufficientFramesError(ToolkitError):
    """Audio too short to produce the required number of analysis frames."""


class UnvoicedAudioError(ToolkitError):
    """An operation that needs voiced frames received none."""


class ScaleRangeError(ToolkitError):
    """A pitch/time scale factor fell outside the supported range."""


class GenderUnresolvedError(ToolkitError):
    """A policy decision was requested for an UNKNOWN-gender sample."""


class ManifestError(ToolkitError):
    """Manifest file is malformed (missing column, bad field, dup id)."""


class AudioFormatError(ToolkitError):
    """Audio file could not be decoded or sliced as requested."""


class EmptyReferenceError(ToolkitError):
    """WER requested against an empty reference."""


class ScoringError(ToolkitError):
    """Segment scores are inconsistent (mismatched ids, empty group)."""


class PipelineError(ToolkitError):
    """Per-sample failure surfaced by the streaming pipeline."""
