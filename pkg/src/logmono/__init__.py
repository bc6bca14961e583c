"""Exact symbolic toolkit for log differential forms, log-Fitting ideals,
and combinatorial principalization of morphisms between charted pairs."""

from .chart import ChartedPair, MorphismOfPairs, RationalPoint
from .frontend import ProblemFile, parse_expression, parse_problem
from .ideal import IdealPresentation
from .poly import Monomial, Polynomial

__all__ = [
    "ChartedPair",
    "IdealPresentation",
    "Monomial",
    "MorphismOfPairs",
    "Polynomial",
    "ProblemFile",
    "RationalPoint",
    "parse_expression",
    "parse_problem",
]

__version__ = "0.1.0"
