"""spa: a small LCF-style proof assistant for classical first-order logic.

A sealed axiomatic kernel produces all theorems; a declarative proof-script
language, derived rules, tactics, and a proof-producing automated prover
are layered on top, together with a checking CLI and HTTP service.
"""

from .syntax import (
    Formula, Term, parse_formula, parse_term, print_formula, print_term,
    free_vars, subst,
)
from .kernel import Theorem, conclusion_of

__version__ = "0.1.0"

__all__ = [
    "Formula", "Term", "Theorem",
    "parse_formula", "parse_term", "print_formula", "print_term",
    "free_vars", "subst", "conclusion_of",
    "__version__",
]
