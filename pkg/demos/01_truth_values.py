"""
Finite truth-value algebras
===========================

Łukasiewicz chains, the Δ / τ / υ operators, and what the law checker
says about a table that is almost, but not quite, residuated.
"""

from mvmodal import lukasiewicz, godel_chain, validate_algebra
from mvmodal.algebra import check_algebra_json
from mvmodal.datasets import load_json

# The three-element chain 0 < 1/2 < 1.  Values are small integers internally;
# format_value turns them back into exact fractions.
L3 = lukasiewicz(3)
half = L3.parse_value("1/2")
print("elements:", [L3.format_value(a) for a in L3.elements])

# Strong conjunction is truncated addition, so two halves make nothing.
print("1/2 * 1/2 =", L3.format_value(L3.prod[half][half]))
print("1/2 -> 0  =", L3.format_value(L3.impl[half][L3.zero]))


# Full operation tables, printed the way one would write them by hand.
def show(name, table, alg):
    labels = [alg.format_value(a) for a in alg.elements]
    print(f"\n{name:>5} | " + "  ".join(f"{x:>3}" for x in labels))
    print("-" * (8 + 5 * alg.k))
    for a, row in zip(labels, table):
        print(f"{a:>5} | " + "  ".join(f"{alg.format_value(v):>3}" for v in row))


show("*", L3.prod, L3)
show("->", L3.impl, L3)

# Δ keeps only full truth.  τ_c tests for one exact value and υ_c for
# "at least c".
for a in L3.elements:
    print(f"x={L3.format_value(a):>3}  D x={L3.format_value(L3.delta(a)):>3}"
          f"  tau_1/2 x={L3.format_value(L3.tau(half, a)):>3}"
          f"  up_1/2 x={L3.format_value(L3.upsilon(half, a)):>3}")

# Every bundled chain satisfies the lattice, monoid and residuation laws.
print()
print(validate_algebra(lukasiewicz(5)))

# Gödel chains are FL_ew algebras as well; there * is just the meet.
G4 = godel_chain(4)
print("\n", G4, "ok:", validate_algebra(G4).ok)

# Patch one entry of the implication table and the checker names the first
# triple (a, b, c) where  a * b <= c  and  a <= b -> c  disagree.
report = check_algebra_json(load_json("l3_broken_impl.json"))
bad = report.first_failure
print(f"\nbroken table: {bad.law} fails at {bad.witness}")
