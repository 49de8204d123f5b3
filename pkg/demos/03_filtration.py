"""
Filtrations
===========

Glue together states that no formula of a closed set can tell apart, then
check that every formula of the set keeps its value.
"""

from mvmodal import lukasiewicz, parse_any
from mvmodal.datasets import load_json
from mvmodal.filtration import check_filtration_lemma, equiv_classes, filtrate, fmp_bound
from mvmodal.semantics import model_from_json, model_to_json, value_map
from mvmodal.syntax import closure, to_text

L2, L3 = lukasiewicz(2), lukasiewicz(3)

kripke = model_from_json(load_json("model_kripke_l2.json"))
phi = closure([parse_any("p", L2)], "basic", L2)
print("Phi =", [to_text(f) for f in phi])
print("classes:", equiv_classes(kripke, phi))

# The quotient takes successors of the representative and maps them through q.
res = filtrate(kripke, phi)
print("q:", res.mapping(kripke))
print(model_to_json(res.quotient))
print(check_filtration_lemma(kripke, phi, res).describe(L2))

# A larger set separates more states.  Here every state ends up alone.
phi2 = closure([parse_any("<box>(p) -> p", L2)], "basic", L2)
print("\nwith <box>(p) -> p:", equiv_classes(kripke, phi2))

# Distributions add up mass that lands in the same class.
dist = model_from_json(load_json("model_distribution_l3.json"))
phi3 = closure([parse_any("<prob>(p)", L3)], "basic", L3)
res3 = filtrate(dist, phi3)
print("\nmerged distribution:", model_to_json(res3.quotient)["sigma"])
print(check_filtration_lemma(dist, phi3, res3).describe(L3))
print("values before:", value_map(dist, parse_any("<prob>(p)", L3)))
print("values after: ", value_map(res3.quotient, parse_any("<prob>(p)", L3)))

# Any representative works, not just the least one.
alt = filtrate(dist, phi3, r_choice=["w", "v"])
print("other representative ok:", check_filtration_lemma(dist, phi3, alt).ok)

# The model-size bound k^|closure| grows fast.
for text, flavor in [("<box>(p) -> p", "basic"), ("<box>(p) -> p", "delta"), ("p", "basic")]:
    b = fmp_bound(parse_any(text, L3), L3, flavor)
    print(f"{text:<15} {flavor:<6} closure {b.closure_size}  bound {b.bound}")
