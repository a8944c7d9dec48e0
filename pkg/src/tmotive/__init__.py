"""Exact arithmetic for special L-values of t-motives over F_q(theta)."""

from .errors import TMotiveError

__all__ = ["TMotiveError"]

__version__ = "0.1.0"
