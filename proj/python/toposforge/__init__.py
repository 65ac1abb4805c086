"""Kripke-Joyal forcing over sheaves on finite spaces."""

from ._toposforge import (
    FormulaParseError,
    FormulaSortError,
    InvalidStructureError,
    ResolutionError,
    Space,
    Spectrum,
    suites,
    translate,
    verify,
)

__all__ = [
    "FormulaParseError",
    "FormulaSortError",
    "InvalidStructureError",
    "ResolutionError",
    "Space",
    "Spectrum",
    "suites",
    "translate",
    "verify",
]
