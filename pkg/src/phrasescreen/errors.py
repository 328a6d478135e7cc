"""Exception types shared across the package.

The CLI maps these to exit code 1 (bad input); anything else is an
internal error (exit code 2).
"""


class PhraseScreenError(Exception):
    """Base class for expected, input-level failures."""


class LoadError(PhraseScreenError):
    """A data file is missing, unreadable, or unusable as a whole."""


class ConfigError(PhraseScreenError):
    """Invalid configuration (bad thresholds, unknown modes, ...)."""


class PhraseLengthError(PhraseScreenError):
    """Phrase cannot be cosine-scored because it is not exactly two tokens."""


class ArtifactMismatchError(PhraseScreenError):
    """Persisted model and vectorizer do not belong together."""
