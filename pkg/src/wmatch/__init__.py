"""Matching machines, their asymptotic speed and optimal search strategies."""
from .core import SINK, Alphabet, IidModel, MatchingMachine, Pattern, is_compact, validate_structure
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"
