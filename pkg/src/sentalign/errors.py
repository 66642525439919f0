"""Exception hierarchy shared across the toolkit.

DataError covers malformed corpora, annotation files, and similarity
matrices; ModelError covers checkpoint problems. The CLI maps them to
distinct exit codes.
"""


class SentAlignError(Exception):
    pass


class DataError(SentAlignError):
    """Bad input data: corpus lines, annotation records, matrices, configs."""


class ModelError(SentAlignError):
    """Bad model checkpoint: wrong version, corrupt or truncated file."""
