"""Derivation checking and countermodel search."""
from .derivation import (CheckResult, Derivation, DerivationFormatError, Line, check_derivation,
                         load_derivation, parse_derivation, script_names)
from .schemas import Logic, logic, logic_names, match_schema
from .search import SearchGuardError, search_countermodel
from .taut import TautologyGuardError, tautology

__all__ = [
    "CheckResult", "Derivation", "DerivationFormatError", "Line", "Logic", "SearchGuardError",
    "TautologyGuardError", "check_derivation", "load_derivation", "logic", "logic_names",
    "match_schema", "parse_derivation", "script_names", "search_countermodel", "tautology",
]
