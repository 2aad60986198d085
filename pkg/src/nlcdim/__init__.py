"""Dimension and Boolean dimension of posets via tree and NLC decompositions."""

from .errors import NlcDimError
from .poset import Poset, brute_force_dimension, kelly_example, standard_example

__all__ = ["NlcDimError", "Poset", "brute_force_dimension", "kelly_example", "standard_example"]
__version__ = "0.1.0"
