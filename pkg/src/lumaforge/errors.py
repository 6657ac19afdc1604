"""Exception types shared across the toolkit.

The CLI maps these onto exit codes (see cli.py): configuration/usage -> 1,
ingestion -> 2, pipeline stage -> 3.
"""


class ConfigurationError(ValueError):
    """Invalid parameter value, config field, or operation usage."""


class IngestionError(RuntimeError):
    """Frame files could not be loaded: missing, malformed, or inconsistent."""


class PipelineStageError(RuntimeError):
    """A pipeline stage failed while processing a frame sequence."""
