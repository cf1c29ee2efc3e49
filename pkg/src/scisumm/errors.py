"""Exception types shared across the package."""


class ScisummError(Exception):
    """Base class for package-specific failures."""


class DataError(ScisummError):
    """Malformed, inconsistent, or structurally unusable input data."""


class EmbeddingFormatError(DataError):
    """An embedding or document-frequency file violates its format."""
