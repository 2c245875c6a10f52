"""Strict-tolerant first-order logic: syntax, sequent calculi, finite-model
semantics, derivation transformations, normalization and interpolation."""

from .syntax import parse_formula, parse_sequent, show, show_sequent
from .calculi import CALCULI, Derivation, RuleViolation, accepts, check

__all__ = ["parse_formula", "parse_sequent", "show", "show_sequent",
           "CALCULI", "Derivation", "RuleViolation", "accepts", "check"]
