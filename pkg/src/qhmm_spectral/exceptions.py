"""Exception types raised across the package."""

from __future__ import annotations

__all__ = [
    "QhmmError",
    "DimensionMismatchError",
    "UnknownSymbolError",
    "AlphabetMismatchError",
    "InvalidModelError",
    "NonUnitaryError",
    "EnumerationCapError",
    "UnderflowError",
    "TransferSizeError",
    "CompressionError",
    "DefectiveOperatorError",
    "ModelFormatError",
]


class QhmmError(Exception):
    """Base class for all library-specific errors."""


class DimensionMismatchError(QhmmError, ValueError):
    """Matrix or vector shapes are inconsistent with the declared dimensions."""


class UnknownSymbolError(QhmmError, KeyError):
    """A word contains a symbol outside the model's alphabet."""


class AlphabetMismatchError(QhmmError, ValueError):
    """Two models that must share an alphabet do not."""


class InvalidModelError(QhmmError, ValueError):
    """A model failed validation where a valid model is required."""


class NonUnitaryError(QhmmError, ValueError):
    """The supplied matrix is not unitary within tolerance."""


class EnumerationCapError(QhmmError, ValueError):
    """An exhaustive word enumeration would exceed the configured cap."""


class UnderflowError(QhmmError, ArithmeticError):
    """The running probability of a sampled prefix underflowed."""


class TransferSizeError(QhmmError, ValueError):
    """A transfer operator would exceed the dense-storage size limit."""


class CompressionError(QhmmError, ValueError):
    """Compression could not produce a faithful lower-dimensional model."""


class DefectiveOperatorError(QhmmError, ValueError):
    """A transfer operator is numerically non-diagonalizable."""


class ModelFormatError(QhmmError, ValueError):
    """A model or operator file does not conform to the JSON schema."""
