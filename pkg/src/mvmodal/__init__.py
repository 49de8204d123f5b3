"""Finitely many-valued coalgebraic modal logic.

Subpackages and modules:

* :mod:`mvmodal.algebra` -- finite residuated lattices and Łukasiewicz chains
* :mod:`mvmodal.syntax` -- formulas, the three languages, parsing and closure
* :mod:`mvmodal.semantics` -- functors, predicate liftings, models, one-step models
* :mod:`mvmodal.filtration` -- quotients by a closed formula set
* :mod:`mvmodal.proof` -- rules, proof trees and the propositional oracle
* :mod:`mvmodal.decide` -- bounded searches
"""

from .algebra import (FiniteAlgebra, TruthValue, from_tables, godel_chain, lukasiewicz,
                      validate_algebra)
from .syntax import Flavor, Rank, closure, parse, parse_any, rank, substitute, to_text

__version__ = "0.1.0"

__all__ = [
    "FiniteAlgebra", "Flavor", "Rank", "TruthValue", "closure", "from_tables", "godel_chain",
    "lukasiewicz", "parse", "parse_any", "rank", "substitute", "to_text", "validate_algebra",
]
