"""Adversarial network coding: capacity bounds, coding schemes and exact search."""

from .errors import AdvnetError, InvalidInput, LimitExceeded

__all__ = ["AdvnetError", "InvalidInput", "LimitExceeded"]
__version__ = "0.1.0"
