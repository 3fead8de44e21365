"""Coherent, squeezed, entangled and cat states from minimum-uncertainty equations."""

__version__ = "0.1.0"

from .errors import ConditioningError, InvalidArgument, TruncationError  # noqa: F401
