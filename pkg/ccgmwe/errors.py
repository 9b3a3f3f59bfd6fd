"""Exceptions raised by ccgmwe."""


class CcgMweError(Exception):
    """Base class for all ccgmwe errors."""


class CategoryParseError(CcgMweError):
    def __init__(self, text, offset, reason):
        self.text = text
        self.offset = offset
        self.reason = reason
        super().__init__("Cannot parse category {!r} at offset {}: {}".format(text, offset, reason))


class FormatError(CcgMweError):
    """A data file does not follow its format."""

    def __init__(self, path, line, reason):
        self.path = path
        self.line = line
        self.reason = reason
        where = str(path) if line is None else "{}:{}".format(path, line)
        super().__init__("{}: {}".format(where, reason))


class LexiconError(FormatError):
    pass


class ConfigError(CcgMweError):
    pass


class OverlapError(CcgMweError):
    """Occurrences share leaf indices or point outside the sentence."""


class DataInconsistencyError(CcgMweError):
    pass


class StageError(CcgMweError):
    def __init__(self, stage, sentence_id=None, cause=None):
        self.stage = stage
        self.sentence_id = sentence_id
        self.cause = cause
        if sentence_id is None:
            message = "[{}] {}".format(stage, cause)
        else:
            message = "[{}] sentence {}: {}".format(stage, sentence_id, cause)
        super().__init__(message)
