"""Coalgebraic semantics: functors, predicate liftings, models and one-step models."""

from .functors import (DISTRIBUTION, FUZZY, KINDS, NEIGHBORHOOD, POWERSET, SELECTION,
                       TABLE_KINDS, FunctionTable, all_vectors, count_TS, enumerate_TS,
                       functor_map, materialize, validate_element)
from .liftings import BUILTIN, FLOOR, STRICT, Lifting, ProbPolicy, get_lifting, lifting_apply
from .model import (TModel, element_from_json, element_to_json, evaluate, evaluate_many,
                    evaluate_prop, evaluate_structure, model_from_json, model_to_json, value_map)
from .naturality import NaturalityReport, NaturalityWitness, naturality_check
from .onestep import OneStepModel, coloring, eval0, eval1

__all__ = [
    "BUILTIN", "DISTRIBUTION", "FLOOR", "FUZZY", "FunctionTable", "KINDS", "Lifting",
    "NEIGHBORHOOD", "NaturalityReport", "NaturalityWitness", "OneStepModel", "POWERSET",
    "ProbPolicy", "SELECTION", "STRICT", "TABLE_KINDS", "TModel", "all_vectors", "coloring",
    "count_TS", "element_from_json", "element_to_json", "enumerate_TS", "eval0", "eval1",
    "evaluate", "evaluate_many", "evaluate_prop", "evaluate_structure", "functor_map",
    "get_lifting", "lifting_apply", "materialize", "model_from_json", "model_to_json",
    "naturality_check", "validate_element", "value_map",
]
