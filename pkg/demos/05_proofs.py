"""
Checking proofs
===============

Rules are schemata over metavariables.  A proof is a tree whose leaves are
hypotheses, axiom instances or propositional tautologies of the algebra.
"""

from mvmodal import lukasiewicz, parse_any
from mvmodal.datasets import load_json
from mvmodal.proof import (check_proof, congruence_rule, match_instance, proof_document_from_json,
                           system_from_json)
from mvmodal.syntax import to_text

L3 = lukasiewicz(3)

c_box = congruence_rule("box")
print(c_box)
print(congruence_rule("cond"))

# Matching is one-way; a metavariable used twice must match the same thing.
rho = match_instance(c_box, [parse_any("r <-> s", L3)], parse_any("<box>(r) <-> <box>(s)", L3))
print({k: to_text(v) for k, v in rho.items()})
print(match_instance(c_box, [parse_any("r <-> s", L3)], parse_any("<dia>(r) <-> <dia>(s)", L3)))

system = system_from_json(load_json("system_box.json"), L3)
print("\nrules:", ", ".join(system.rules))


def show(node, depth=0):
    print("  " * depth + f"{to_text(node.formula)}   [{node.rule}]")
    for child in node.children:
        show(child, depth + 1)


hyps, tree = proof_document_from_json(load_json("proof_box.json"), L3)
show(tree)
print(check_proof(system, hyps, tree, L3))

# Each mutated copy fails at a specific node, reported by its path.
for case in load_json("proof_box_mutations.json"):
    hyps, tree = proof_document_from_json(case["proof"], L3)
    res = check_proof(system, hyps, tree, L3)
    print(f"\n{case['name']}: {case['description']}")
    print("  ", res.error)
