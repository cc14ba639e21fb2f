"""Germ builders for the classical and dual Artin monoids"""

from .factory import BuilderFactory
from .base import BaseGermBuilder

from .classical import ClassicalGermBuilder, classical_artin
from .dual import DualGermBuilder, dual_artin

__all__ = [
    "BuilderFactory",
    "BaseGermBuilder",
    "ClassicalGermBuilder",
    "DualGermBuilder",
    "classical_artin",
    "dual_artin",
]
