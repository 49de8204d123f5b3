"""
Bounded search
==============

Brute-force enumeration of small models.  A countermodel settles the
question; "valid-up-to-bound" only says nothing small was found.
"""

import json

from mvmodal import lukasiewicz, parse_any
from mvmodal.datasets import load_json
from mvmodal.decide import bounded_validity, onestep_sound_bounded, prop_consequence
from mvmodal.proof import congruence_rule, monotonicity_rule, rule_from_json

L2, L3 = lukasiewicz(2), lukasiewicz(3)

# Propositional consequence first: idempotence of * fails at 1/2.
res = prop_consequence(L3, [], parse_any("p -> p * p", L3))
print("p -> p*p:", res.holds, {k: L3.format_value(v) for k, v in res.witness.items()})
print("excluded middle in L2:", prop_consequence(L2, [], parse_any("p | !p", L2)).holds)
print("excluded middle in L3:", prop_consequence(L3, [], parse_any("p | !p", L3)).holds)

# The classic non-theorem p -> <box>(p).
v = bounded_validity(parse_any("p -> <box>(p)", L2), "powerset", L2, max_states=2)
print()
print(v.describe())
print(json.dumps(v.to_json()["witness"], indent=1))

# Meets commute with meets, so nothing turns up.
v = bounded_validity(parse_any("<box>(p & q) <-> <box>(p) & <box>(q)", L3), "powerset", L3, 2)
print()
print(v.describe())

# In sat-1 mode the search looks for a state of full truth instead.
v = bounded_validity(parse_any("<fdia>(p) & !p", L3), "fuzzy", L3, 2, mode="sat-1")
print()
print(v.describe())

# One-step soundness of rules: congruence and monotonicity pass.
print()
for rule in [congruence_rule("box"), monotonicity_rule("fdia"), congruence_rule("cond")]:
    kind = {"box": "powerset", "fdia": "fuzzy", "cond": "selection"}[rule.name[2:]]
    print(rule, "->", onestep_sound_bounded(rule, kind, L3, 2).outcome)

# Asserting <box>(p) outright does not.
bad = rule_from_json(load_json("rule_box_unconditional.json"), L2)
print()
print(onestep_sound_bounded(bad, "powerset", L2, 2).describe())
