"""Rules, proof trees and proof checking.

Leaves of a proof are justified in one of three ways:

``hyp``
    the label is one of the hypotheses;
``axiom:<name>``
    the label is an instance of a premise-free rule of the system;
``taut``
    the label is valid in the algebra, decided by enumerating all
    assignments.  Modal subformulas are treated as opaque atoms, so a leaf
    may be a substitution instance of a propositional tautology.

Internal nodes name a rule; their children's labels (in order) and their own
label must form an instance of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .algebra import FiniteAlgebra
from .errors import BlowUp, FlavorError, ModalLogicError, RankError
from .semantics.model import evaluate_prop
from .syntax import (Atom, Binary, Const, Flavor, Formula, Imp, Modal, Signature, Tau, Upsilon,
                     atoms, builtin_signature, first_flavor_violation, iff, is_rank0,
                     modal_atoms, parse_any, rank, Rank, substitute, to_text)

DEFAULT_ASSIGNMENT_CAP = 1_000_000


# ---------------------------------------------------------------------------
# rules


@dataclass(frozen=True)
class Rule:
    """A schematic rule ``premises / conclusion``; every atom is a metavariable."""

    name: str
    premises: tuple[Formula, ...]
    conclusion: Formula

    @property
    def metavariables(self) -> frozenset[str]:
        out = atoms(self.conclusion)
        for p in self.premises:
            out |= atoms(p)
        return out

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    @property
    def is_non_modal(self) -> bool:
        return all(is_rank0(f) for f in (*self.premises, self.conclusion))

    @property
    def is_one_step(self) -> bool:
        return all(is_rank0(p) for p in self.premises) and rank(self.conclusion) is Rank.RANK1

    def __str__(self) -> str:
        prem = ", ".join(to_text(p) for p in self.premises)
        return f"{self.name}: {{{prem}}} / {to_text(self.conclusion)}"


def _metavars(arity: int) -> tuple[list[Atom], list[Atom]]:
    if arity == 1:
        return [Atom("p")], [Atom("q")]
    return ([Atom(f"p{i}") for i in range(1, arity + 1)],
            [Atom(f"q{i}") for i in range(1, arity + 1)])


def _rule_name(prefix: str, lifting: str, param: Fraction | None) -> str:
    return f"{prefix}_{lifting}" if param is None else f"{prefix}_{lifting}[{param}]"


def congruence_rule(lifting: str, signature: Signature | None = None,
                    param: Fraction | None = None) -> Rule:
    """``{p_i <-> q_i} / <l>(p..) <-> <l>(q..)``."""
    decl = (builtin_signature() if signature is None else signature)[lifting]
    ps, qs = _metavars(decl.arity)
    prem = tuple(iff(p, q) for p, q in zip(ps, qs))
    concl = iff(Modal(lifting, tuple(ps), param), Modal(lifting, tuple(qs), param))
    return Rule(_rule_name("C", lifting, param), prem, concl)


def monotonicity_rule(lifting: str, signature: Signature | None = None,
                      param: Fraction | None = None) -> Rule:
    """``{p_i -> q_i} / <l>(p..) -> <l>(q..)``."""
    decl = (builtin_signature() if signature is None else signature)[lifting]
    ps, qs = _metavars(decl.arity)
    prem = tuple(Imp(p, q) for p, q in zip(ps, qs))
    concl = Imp(Modal(lifting, tuple(ps), param), Modal(lifting, tuple(qs), param))
    return Rule(_rule_name("M", lifting, param), prem, concl)


def _match(pat: Formula, f: Formula, rho: dict) -> bool:
    if isinstance(pat, Atom):
        bound = rho.get(pat.name)
        if bound is None:
            rho[pat.name] = f
            return True
        return bound == f
    if type(pat) is not type(f):
        return False
    if isinstance(pat, Const):
        return pat.index == f.index
    if isinstance(pat, Modal):
        if pat.name != f.name or pat.param != f.param or len(pat.args) != len(f.args):
            return False
    elif isinstance(pat, (Tau, Upsilon)):
        if pat.level.index != f.level.index:
            return False
    return all(_match(a, b, rho) for a, b in zip(pat.children(), f.children()))


def match_instance(rule: Rule, premises: Sequence[Formula], conclusion: Formula) -> dict | None:
    """The substitution making ``rule`` produce exactly these formulas, or ``None``.

    Premises are matched in order; a metavariable used twice must be mapped
    to the same formula at every occurrence.
    """
    if len(premises) != len(rule.premises):
        return None
    rho: dict[str, Formula] = {}
    pairs = [(rule.conclusion, conclusion), *zip(rule.premises, premises)]
    if all(_match(p, f, rho) for p, f in pairs):
        return rho
    return None


# ---------------------------------------------------------------------------
# the semantic oracle


@dataclass(frozen=True)
class ConsequenceResult:
    holds: bool
    witness: dict[str, int] | None = None
    value: int | None = None
    assignments: int = 0


def consequence(algebra: FiniteAlgebra, gamma: Iterable[Formula], phi: Formula,
                cap: int = DEFAULT_ASSIGNMENT_CAP) -> ConsequenceResult:
    """Decide ``gamma |= phi`` over rank-0 formulas by enumerating assignments.

    The witness, if any, is the lexicographically least assignment (atoms in
    sorted order) that sends every hypothesis to 1 and ``phi`` below 1.
    """
    gamma = tuple(gamma)
    for f in (*gamma, phi):
        if not is_rank0(f):
            raise RankError(f"{to_text(f)!r} contains a modality; only rank-0 formulas are decided")
    names = sorted(set().union(atoms(phi), *(atoms(g) for g in gamma)))
    k = algebra.k
    total = k ** len(names)
    if total > cap:
        raise BlowUp(f"assignments to {len(names)} atoms", total, cap)
    rows = list(product(range(k), repeat=len(names)))
    cols = {p: tuple(r[i] for r in rows) for i, p in enumerate(names)}
    memo: dict = {}

    def ev(f):
        return evaluate_prop(f, total, algebra, cols.__getitem__, None, memo)

    hyp = [ev(g) for g in gamma]
    goal = ev(phi)
    one = algebra.one
    for i in range(total):
        if goal[i] != one and all(h[i] == one for h in hyp):
            return ConsequenceResult(False, dict(zip(names, rows[i])), goal[i], i + 1)
    return ConsequenceResult(True, assignments=total)


def semantic_axiom_oracle(algebra: FiniteAlgebra, gamma: Iterable[Formula], phi: Formula,
                          flavor=None, cap: int = DEFAULT_ASSIGNMENT_CAP) -> bool:
    """``gamma |=_A phi`` for modality-free formulas."""
    gamma = tuple(gamma)
    if flavor is not None:
        for f in (*gamma, phi):
            bad = first_flavor_violation(f, flavor, algebra)
            if bad is not None:
                raise FlavorError(f"{to_text(bad)!r} is not allowed in the {Flavor.parse(flavor).value} language")
    return consequence(algebra, gamma, phi, cap).holds


def skeleton(f: Formula) -> Formula:
    """Replace every outermost modal subformula by a fresh atom."""
    mods = modal_atoms(f)
    if not mods:
        return f
    used = atoms(f)
    fresh = {}
    i = 0
    for m in mods:
        while f"_m{i}" in used:
            i += 1
        fresh[m] = Atom(f"_m{i}")
        i += 1

    def walk(g):
        if g in fresh:
            return fresh[g]
        ch = g.children()
        return g if not ch else g.rebuild(tuple(walk(c) for c in ch))
    return walk(f)


# ---------------------------------------------------------------------------
# proof trees


@dataclass(frozen=True)
class ProofTree:
    formula: Formula
    rule: str
    children: tuple["ProofTree", ...] = ()
    substitution: Mapping[str, Formula] | None = None

    def nodes(self) -> int:
        return 1 + sum(c.nodes() for c in self.children)


@dataclass
class DerivationSystem:
    rules: dict[str, Rule] = field(default_factory=dict)
    flavor: Flavor = Flavor.BASIC

    def add(self, rule: Rule) -> None:
        if rule.name in self.rules:
            raise ValueError(f"duplicate rule name {rule.name}")
        self.rules[rule.name] = rule


@dataclass(frozen=True)
class ProofError:
    path: tuple[int, ...]
    index: int
    kind: str
    message: str

    @property
    def location(self) -> str:
        return "root" + "".join(f".{i}" for i in self.path)

    def __str__(self) -> str:
        return f"node {self.location} (#{self.index} in depth-first order): {self.kind}: {self.message}"


@dataclass(frozen=True)
class ProofResult:
    ok: bool
    error: ProofError | None = None
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.ok


def _check_node(system: DerivationSystem, hyps: frozenset, node: ProofTree,
                alg: FiniteAlgebra, cap: int) -> tuple[str, str] | None:
    bad = first_flavor_violation(node.formula, system.flavor, alg)
    if bad is not None:
        return "flavor", f"{to_text(bad)!r} is not allowed in the {system.flavor.value} language"
    tag = node.rule
    if tag in ("hyp", "taut") or tag.startswith("axiom:"):
        if node.children:
            return "arity", f"a {tag} leaf must not have children ({len(node.children)} given)"
        if tag == "hyp":
            if node.formula not in hyps:
                return "hypothesis", f"{to_text(node.formula)!r} is not a hypothesis"
            return None
        if tag == "taut":
            res = consequence(alg, (), skeleton(node.formula), cap)
            if not res.holds:
                w = ", ".join(f"{p}={alg.format_value(v)}" for p, v in res.witness.items())
                return "oracle", f"{to_text(node.formula)!r} is not valid (value {alg.format_value(res.value)} at {w})"
            return None
        name = tag[len("axiom:"):]
        rule = system.rules.get(name)
        if rule is None or not rule.is_axiom:
            return "unknown-rule", f"no axiom named {name!r}"
        return _instance_error(rule, node)
    rule = system.rules.get(tag)
    if rule is None:
        return "unknown-rule", f"no rule named {tag!r}"
    if len(node.children) != len(rule.premises):
        n, m = len(rule.premises), len(node.children)
        return "arity", (f"rule {rule.name} has {n} premise{'' if n == 1 else 's'}, "
                         f"node has {m} child{'' if m == 1 else 'ren'}")
    return _instance_error(rule, node)


def _instance_error(rule: Rule, node: ProofTree) -> tuple[str, str] | None:
    premises = [c.formula for c in node.children]
    if node.substitution is not None:
        rho = dict(node.substitution)
        got = [substitute(p, rho) for p in rule.premises]
        if substitute(rule.conclusion, rho) != node.formula or got != premises:
            return "substitution", f"the given substitution does not turn {rule.name} into this step"
        return None
    if match_instance(rule, premises, node.formula) is None:
        return "no-match", f"{to_text(node.formula)!r} from its children is not an instance of {rule}"
    return None


def check_proof(system: DerivationSystem, gamma: Iterable[Formula], tree: ProofTree,
                algebra: FiniteAlgebra, cap: int = DEFAULT_ASSIGNMENT_CAP) -> ProofResult:
    """Check every node; report the first failing one in depth-first (pre-)order."""
    hyps = frozenset(gamma)
    index = 0
    stack: list[tuple[ProofTree, tuple[int, ...]]] = [(tree, ())]
    while stack:
        node, path = stack.pop()
        err = _check_node(system, hyps, node, algebra, cap)
        if err is not None:
            return ProofResult(False, ProofError(path, index, *err), index + 1)
        index += 1
        stack.extend((c, path + (i,)) for i, c in reversed(list(enumerate(node.children))))
    return ProofResult(True, None, index)


# ---------------------------------------------------------------------------
# JSON


def rule_from_json(obj: Mapping, algebra: FiniteAlgebra, signature: Signature | None = None) -> Rule:
    try:
        return Rule(str(obj["name"]),
                    tuple(parse_any(p, algebra, signature) for p in obj.get("premises", [])),
                    parse_any(obj["conclusion"], algebra, signature))
    except KeyError as e:
        raise ModalLogicError(f"rule JSON is missing field {e}") from None


def rule_to_json(rule: Rule) -> dict:
    return {"name": rule.name, "premises": [to_text(p) for p in rule.premises],
            "conclusion": to_text(rule.conclusion)}


def system_from_json(obj: Mapping, algebra: FiniteAlgebra,
                     signature: Signature | None = None) -> DerivationSystem:
    """Read ``{"flavor", "congruence": [...], "monotonicity": [...], "rules": [...]}``."""
    system = DerivationSystem(flavor=Flavor.parse(obj.get("flavor", "basic")))
    for name in obj.get("congruence", []):
        system.add(congruence_rule(name, signature))
    for name in obj.get("monotonicity", []):
        system.add(monotonicity_rule(name, signature))
    for r in obj.get("rules", []):
        system.add(rule_from_json(r, algebra, signature))
    return system


def proof_from_json(obj: Mapping, algebra: FiniteAlgebra,
                    signature: Signature | None = None) -> ProofTree:
    try:
        formula = parse_any(obj["formula"], algebra, signature)
        tag = str(obj["rule"])
    except KeyError as e:
        raise ModalLogicError(f"proof node is missing field {e}") from None
    sub = obj.get("substitution")
    if sub is not None:
        sub = {p: parse_any(t, algebra, signature) for p, t in sub.items()}
    children = tuple(proof_from_json(c, algebra, signature) for c in obj.get("children", []))
    return ProofTree(formula, tag, children, sub)


def proof_document_from_json(obj: Mapping, algebra: FiniteAlgebra,
                             signature: Signature | None = None) -> tuple[list[Formula], ProofTree]:
    """A proof file is either a bare root node or ``{"hypotheses": [...], "proof": node}``."""
    if "proof" in obj:
        hyps = [parse_any(h, algebra, signature) for h in obj.get("hypotheses", [])]
        return hyps, proof_from_json(obj["proof"], algebra, signature)
    return [], proof_from_json(obj, algebra, signature)
