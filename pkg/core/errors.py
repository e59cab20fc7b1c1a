"""Exception hierarchy for the narrative assessment pipeline."""

from typing import Optional


class PipelineError(Exception):
    """Base class for every error raised by the pipeline."""


class MissingField(PipelineError):
    """A required field is absent from a platform record."""

    def __init__(self, name: str, source: Optional[str] = None):
        self.name = name
        self.source = source
        where = f" ({source})" if source else ""
        super().__init__(f"missing required field '{name}'{where}")


class BadTimestamp(PipelineError):
    """A timestamp is non-positive, unparseable or inconsistent."""

    def __init__(self, field_name: str, value: object):
        self.field_name = field_name
        self.value = value
        super().__init__(f"bad timestamp in '{field_name}': {value!r}")


class NotAUrl(PipelineError):
    """Input does not parse as an absolute http(s) URL."""

    def __init__(self, raw: str):
        self.raw = raw
        super().__init__(f"not an absolute http(s) URL: {raw!r}")


class BadWindow(PipelineError):
    """Window length or stride is not positive, or stride exceeds the window."""


class EmptyText(PipelineError):
    """A MinHash signature was requested for an empty shingle set."""


class DegenerateLabels(PipelineError):
    """Calibration data holds a single class."""


class BadConfig(PipelineError):
    """A synthetic scenario configuration violates its invariants."""


class ConfigError(PipelineError):
    """The pipeline configuration is invalid."""


class IoError(PipelineError):
    """An input or artifact file cannot be read or written."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class StageError(PipelineError):
    """A pipeline stage failed."""

    def __init__(self, stage: str, reason: str):
        self.stage = stage
        self.reason = reason
        super().__init__(f"stage '{stage}' failed: {reason}")
