"""Exception types raised across the package.

Everything subclasses :class:`KpropError`, which itself subclasses
``ValueError`` so callers can catch broadly without importing this module.
"""


class KpropError(ValueError):
    """Base class for all errors raised by this package."""


class ShapeMismatchError(KpropError):
    """Operands have incompatible shapes or dimensions."""


class NonFiniteError(KpropError):
    """An input contains NaN or infinite entries."""


class NotSymmetricError(KpropError):
    """A matrix required to be symmetric is not, beyond tolerance."""


class ConfigError(KpropError):
    """A configuration value is invalid (wrong range, unknown name, ...)."""


class EmptyInputError(KpropError):
    """An operation received an empty set where at least one element is required."""


class DisjointSetsError(KpropError):
    """Index sets required to be disjoint overlap."""


class SamplingError(KpropError):
    """A sampling request cannot be satisfied by the available data."""


class FileFormatError(KpropError):
    """A file does not conform to the expected on-disk format."""


class UnsupportedLayoutError(FileFormatError):
    """The file is recognized but uses a layout this reader does not support."""


class DataConsistencyError(KpropError):
    """Related on-disk arrays disagree (e.g. feature rows vs label count)."""
