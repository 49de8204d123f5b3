"""
Modal operators as predicate liftings
=====================================

A T-model assigns each state an element of T(S).  A lifting turns a
truth-valued predicate on S into a truth value at that element.  The same
evaluator handles all five structure kinds below.
"""

from fractions import Fraction

from mvmodal import lukasiewicz, parse_any
from mvmodal.datasets import load_json
from mvmodal.errors import OutOfDomain
from mvmodal.semantics import (BUILTIN, FLOOR, Lifting, ProbPolicy, evaluate, model_from_json,
                               naturality_check, value_map)

L3 = lukasiewicz(3)

# Crisp successor sets: w sees u (p = 1/2) and v (p = 1).
box_model = model_from_json(load_json("model_box_l3.json"))
for text in ["<box>(p)", "<dia>(p)", "<box>(p) -> p", "<dia>(p * p)"]:
    print(f"{text:<16}", value_map(box_model, parse_any(text, L3)))

# Fuzzy successors: the accessibility degree acts like an implication
# premise for fbox and like a conjunct for fdia.
fuzzy = model_from_json(load_json("model_fuzzy_l3.json"))
for text in ["<fbox>(p)", "<fdia>(p)"]:
    print(f"{text:<16}", value_map(fuzzy, parse_any(text, L3)))

# Distributions.  <prob>(p) sums mu(s) * p(s) and must land in the chain;
# <M[r]>(p) is the largest a such that "p >= a" has probability strictly
# above r, so <M[1]> is always 0.
dist = model_from_json(load_json("model_distribution_l3.json"))
for text in ["<prob>(p)", "<M[1/2]>(p)", "<M[1]>(p)"]:
    print(f"{text:<16}", value_map(dist, parse_any(text, L3)))

# A weighted sum can fall between grid points: half of the mass on a state
# where p = 1/2 gives 1/4.  The strict policy refuses, the floor policy
# rounds down and records what it did.
coin = model_from_json({
    "algebra": {"kind": "lukasiewicz", "n": 3}, "functor": "distribution", "states": ["a", "b"],
    "sigma": {"a": {"a": "1/2", "b": "1/2"}, "b": {"b": "1"}},
    "valuation": {"p": {"a": "1/2", "b": "0"}}})
f = parse_any("<prob>(p)", L3)
try:
    evaluate(coin, f)
except OutOfDomain as e:
    print("\nstrict:", e)
policy = ProbPolicy(FLOOR, floored=[])
print("floored:", value_map(coin, f, policy), "sums rounded:", [str(q) for q in policy.floored])

# Naturality: pushing a predicate back along f : X -> Y and lifting must
# agree with lifting and then pushing the structure forward.  The check is
# exhaustive over small carriers.
for name in ["box", "fdia", "prob"]:
    print(naturality_check(BUILTIN[name], L3, size_bound=3))


# Folding with * instead of the meet looks harmless but is not natural:
# two states that collapse onto one are counted twice upstairs.
def folded(alg, args, X, param, policy):
    v = alg.one
    for x in X:
        v = alg.prod[v][args[0][x]]
    return v


report = naturality_check(Lifting("fold", 1, "powerset", folded), L3, size_bound=3)
print(report)
print(report.witness.describe(L3))

# M is parametrised by a rational threshold.  Under the fair coin each
# level of (1/2, 1) carries mass 1/2 or 1, and the strict inequality shows.
mu = (Fraction(1, 2), Fraction(1, 2))
for r in [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]:
    v = BUILTIN["M"](L3, [(1, 2)], mu, r, None)
    print(f"M[{r}] of (1/2, 1) under (1/2, 1/2):", L3.format_value(v))
