"""Tiles, numeration and tilings for non-unit irreducible Pisot
substitutions: exact number-field and p-adic arithmetic, Dumont-Thomas
numeration, central tiles with their GIFS structure, and tiling analysis."""

from .errors import (PisotilesError, PrecisionError, ResourceCapError,
                     UnsupportedDigitModel, ValidationError)
from .substitution import Substitution
from .system import PisotSystem

__all__ = [
    "PisotilesError", "PrecisionError", "ResourceCapError",
    "UnsupportedDigitModel", "ValidationError", "Substitution", "PisotSystem",
]

__version__ = "0.1.0"
