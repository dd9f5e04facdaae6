"""Exception types shared across the toolkit.

Every error raised by the library derives from ToolkitError so the CLI can
map failures onto its exit-code contract (2 lookup, 3 data, 4 I/O).
"""


class ToolkitError(Exception):
    exit_code = 3


class FileFormatError(ToolkitError):
    """A malformed input file; message carries path and 1-based line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class UnknownSymbolError(ToolkitError):
    """A phoneme or phone token absent from the active inventory."""


class DuplicateEntryError(ToolkitError):
    """An entry that repeats a key required to be unique."""


class RuleSetError(ToolkitError):
    """A rule set that is non-total or contains conflicting rules."""


class WordNotFoundError(ToolkitError):
    """A headword missing from the pronunciation dictionary."""

    exit_code = 2


class PatchError(ToolkitError):
    """An invalid language-model patch request."""


class OovTokenError(ToolkitError):
    """A query token not covered by the model and no fallback available."""


class ScoringError(ToolkitError):
    """Mismatched or malformed reference/hypothesis inputs."""
