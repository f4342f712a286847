"""Exception hierarchy shared by the library and the CLI."""


class ScimapError(Exception):
    """Base class for all errors raised by scimap."""

    exit_code = 1


class InputError(ScimapError, ValueError):
    """Malformed or inconsistent input data.

    ``line`` is the 1-based line number of the offending record when the
    error comes from a text format.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantError(ScimapError, RuntimeError):
    """An internal consistency check failed."""

    exit_code = 2


class PipelineError(ScimapError):
    """Failure inside one stage of the end-to-end pipeline."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        if hasattr(cause, "exit_code"):
            self.exit_code = cause.exit_code
        else:
            self.exit_code = 1 if isinstance(cause, (ValueError, OSError)) else 2
        super().__init__(f"stage '{stage}' failed: {cause}")
