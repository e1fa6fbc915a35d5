"""Coherent-state star products with a truncated Fock-space oracle.

The Voros product and its extension from displaced number states act on
polynomial phase-space symbols; every relation the package exports is
checked against brute-force operator matrices.
"""

from .errors import (
    ConfigError,
    DomainError,
    ModeMismatch,
    NonConvergence,
    ParseError,
    StarlabError,
    TruncationError,
)
from .heisenberg import ExtendedStarContext, extended_star, icoeff, moyal_bracket, star_exp, voros_star
from .report import ReportEntry, VerificationReport
from .symbols import PhaseSymbol, variables

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DomainError",
    "ModeMismatch",
    "NonConvergence",
    "ParseError",
    "StarlabError",
    "TruncationError",
    "ExtendedStarContext",
    "extended_star",
    "icoeff",
    "moyal_bracket",
    "star_exp",
    "voros_star",
    "ReportEntry",
    "VerificationReport",
    "PhaseSymbol",
    "variables",
    "__version__",
]
