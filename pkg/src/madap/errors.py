"""Exception hierarchy shared across the pipeline.

Two families matter to the CLI: usage errors (bad invocation, missing
prerequisites; exit code 2) and data errors (malformed inputs found while
processing; exit code 1, with a diagnostics file).
"""


class MadapError(Exception):
    """Base class for all pipeline errors."""


class UsageError(MadapError):
    """Caller mistake: bad flags, unparseable config, missing artifacts."""


class ConfigError(UsageError):
    """Configuration file is missing, unreadable, or contains bad values."""


class MissingArtifact(UsageError):
    """A stage was run before the stage that produces its inputs."""


class UnknownFormat(UsageError):
    """Requested export format is not supported."""


class DataError(MadapError):
    """Input data violated the format contract."""


class MalformedPage(DataError):
    """Profile page fixture lacks the required header fields."""


class TruncatedList(DataError):
    """A profile's paginated document list has a missing page."""


class UnreadableStream(DataError):
    """Byte stream could not be decoded or read at all."""


class UnknownAction(DataError):
    """Review-decision row has an unrecognized action or target."""


class DuplicateAcrossTiers(DataError):
    """A venue name appears under more than one tier."""


class EmptyClass(DataError):
    """A ranking table was requested for a document class with no members."""


class EmptyGraph(DataError):
    """Centrality requested on a graph with no nodes."""


class NonTermination(DataError):
    """Snowball discovery failed to reach a fixpoint within max rounds."""
