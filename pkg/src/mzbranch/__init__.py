"""Exact symbolic audits for the symplectic Dirac operator and its transvector algebra."""

__version__ = "0.1.0"

from .poly import Polynomial, TriDegree
from .weyl import WeylOperator, commutator, compose
from .dsl import op, poly
from .transvector import ProjectorContext, SingularWeight

__all__ = [
    "Polynomial",
    "TriDegree",
    "WeylOperator",
    "commutator",
    "compose",
    "op",
    "poly",
    "ProjectorContext",
    "SingularWeight",
]
