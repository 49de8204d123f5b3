"""Brute-force decision procedures.

* :func:`prop_consequence` decides ``Gamma |=_A phi`` for modality-free formulas.
* :func:`bounded_validity` searches all models up to a number of states for a
  state where a formula is below 1 (or equal to 1, in ``sat-1`` mode).
* :func:`onestep_sound_bounded` searches small one-step models for a marking
  that validates a rule's premises but not its conclusion.

Searches are refutation-complete only: a countermodel is definitive, while
"up to bound" answers say nothing about larger carriers unless the bound
reaches the finite-model bound reported alongside.

Enumeration order is fixed.  Carriers grow from 1 state; within a size the
valuation (atoms sorted, each a vector over the states in lexicographic
order) varies slowest and the structure of the last state fastest.
Neighborhood and selection tables are explored by reading entries on demand
(see :mod:`mvmodal.semantics.lazy`); entries a witness never reads are filled
with 0 (neighborhood) or the all-0 vector (selection).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from .algebra import FiniteAlgebra
from .errors import BlowUp, FlavorError, KindMismatch, RankError
from .filtration import FmpBound, fmp_bound
from .proof import DEFAULT_ASSIGNMENT_CAP, ConsequenceResult, Rule, consequence
from .semantics.functors import (DEFAULT_TS_CAP, NEIGHBORHOOD, TABLE_KINDS, FunctionTable,
                                 all_vectors, check_kind, count_TS, enumerate_TS)
from .semantics.lazy import LazyTable, complete, leaves
from .semantics.liftings import BUILTIN, Lifting, ProbPolicy, get_lifting
from .semantics.model import (TModel, element_to_json, evaluate, evaluate_structure,
                              model_to_json)
from .semantics.onestep import OneStepModel, eval0, eval1
from .syntax import (Flavor, Formula, Modal, atoms, first_flavor_violation, iter_nodes, to_text)

VALIDITY = "validity"
SAT1 = "sat-1"
MODES = (VALIDITY, SAT1)

CAP_ENV = "MVMODAL_MAX_EVALUATIONS"
_FALLBACK_EVAL_CAP = 50_000_000


def default_eval_cap() -> int:
    """Evaluation cap for searches; ``$MVMODAL_MAX_EVALUATIONS`` overrides it."""
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else _FALLBACK_EVAL_CAP


def prop_consequence(algebra: FiniteAlgebra, gamma: Iterable[Formula], phi: Formula,
                     flavor=None, cap: int = DEFAULT_ASSIGNMENT_CAP) -> ConsequenceResult:
    """``Gamma |=_A phi`` by enumeration of all assignments, with the least witness."""
    gamma = tuple(gamma)
    if flavor is not None:
        for f in (*gamma, phi):
            bad = first_flavor_violation(f, flavor, algebra)
            if bad is not None:
                raise FlavorError(f"{to_text(bad)!r} is not allowed in the {Flavor.parse(flavor).value} language")
    return consequence(algebra, gamma, phi, cap)


@dataclass
class SearchVerdict:
    """Outcome of a bounded search, with its witness when one was found."""

    outcome: str
    bounds: dict
    examined: int
    formula: str = ""
    model: TModel | None = None
    state: str | None = None
    value: int | None = None
    onestep: OneStepModel | None = None
    fmp: FmpBound | None = None
    extra: dict = field(default_factory=dict)

    @property
    def witness_found(self) -> bool:
        return self.model is not None or self.onestep is not None

    @property
    def negative(self) -> bool:
        """True for countermodels, unsound rules and unsatisfiable formulas."""
        return self.outcome in ("countermodel", "unsound", "unsatisfiable-up-to-bound")

    @property
    def complete(self) -> bool:
        """Whether the search bound reaches the finite-model bound."""
        return self.fmp is not None and self.bounds.get("max_states", 0) >= self.fmp.bound

    def to_json(self) -> dict:
        out: dict = {"outcome": self.outcome, "formula": self.formula, "bounds": dict(self.bounds),
                     "examined": self.examined}
        if self.fmp is not None:
            out["fmp_bound"] = {"bound": self.fmp.bound, "closure_size": self.fmp.closure_size,
                                "convention": self.fmp.convention, "reached": self.complete}
        if self.model is not None:
            alg = self.model.algebra
            out["witness"] = {"model": model_to_json(self.model), "state": self.state,
                              "value": alg.json_value(self.value)}
        elif self.onestep is not None:
            m = self.onestep
            alg = m.algebra
            out["witness"] = {
                "algebra": alg.to_json(), "functor": m.kind, "states": list(m.states),
                "marking": {s: {p: alg.json_value(v) for p, v in sorted(row.items())}
                            for s, row in zip(m.states, m.marking)},
                "delta": element_to_json(m.kind, m.delta, m.states, alg),
                "value": alg.json_value(self.value),
            }
        out.update(self.extra)
        return out

    def describe(self) -> str:
        lines = [f"{self.outcome} ({self.examined} evaluations; bounds {self.bounds})"]
        if self.model is not None:
            alg = self.model.algebra
            lines.append(f"  value {alg.format_value(self.value)} at state {self.state}")
            for s, el in zip(self.model.states, self.model.sigma):
                lines.append(f"  sigma({s}) = {element_to_json(self.model.kind, el, self.model.states, alg)}")
            for p, v in sorted(self.model.valuation.items()):
                vals = ", ".join(f"{s}={alg.format_value(x)}" for s, x in zip(self.model.states, v))
                lines.append(f"  {p}: {vals}")
        if self.onestep is not None:
            m = self.onestep
            alg = m.algebra
            for s, row in zip(m.states, m.marking):
                vals = ", ".join(f"{p}={alg.format_value(v)}" for p, v in sorted(row.items()))
                lines.append(f"  m({s}): {vals}")
            lines.append(f"  delta = {element_to_json(m.kind, m.delta, m.states, alg)}")
            lines.append(f"  conclusion value {alg.format_value(self.value)}")
        if self.fmp is not None:
            reach = "reached" if self.complete else "not reached"
            lines.append(f"  finite-model bound k^|closure| = {self.fmp.bound} ({reach}; "
                         f"closure size {self.fmp.closure_size}, size = AST node count)")
        return "\n".join(lines)


def _check_kinds(phi: Formula, kind: str, registry) -> None:
    for g in iter_nodes(phi):
        if isinstance(g, Modal):
            lift = get_lifting(g.name, registry)
            if lift.kind != kind:
                raise KindMismatch(f"lifting {g.name} is for {lift.kind} structures, not {kind}")


def _state_names(n: int) -> tuple[str, ...]:
    return tuple(f"s{i}" for i in range(n))


def _table_domain(kind: str, n: int, alg: FiniteAlgebra):
    if kind == NEIGHBORHOOD:
        values = range(alg.k)
    else:
        values = list(all_vectors(n, alg.k))
    return lambda slot, key: values


def _default_entry(kind: str, n: int, alg: FiniteAlgebra):
    return alg.zero if kind == NEIGHBORHOOD else (alg.zero,) * n


def _complete_tables(kind, n, alg, assign, slots) -> list[FunctionTable]:
    keys = list(all_vectors(n, alg.k))
    default = _default_entry(kind, n, alg)
    out = []
    for slot in slots:
        entries = {key: v for (s, key), v in assign.items() if s == slot}
        out.append(FunctionTable(n, alg.k, complete(entries, keys, default)))
    return out


def bounded_validity(phi: Formula, kind: str, algebra: FiniteAlgebra, max_states: int,
                     mode: str = VALIDITY, policy: ProbPolicy | None = None,
                     eval_cap: int | None = None, ts_cap: int = DEFAULT_TS_CAP,
                     granularity: int = 2, flavor=Flavor.BASIC,
                     liftings: Mapping[str, Lifting] | None = None) -> SearchVerdict:
    """Search every model with 1..``max_states`` states over the atoms of ``phi``.

    ``validity`` mode looks for a state where ``phi`` is below 1 and
    ``sat-1`` mode for a state where it equals 1.  The least witness in
    enumeration order is re-evaluated with :func:`evaluate` before it is
    returned.
    """
    check_kind(kind)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    registry = BUILTIN if liftings is None else liftings
    _check_kinds(phi, kind, registry)
    cap = default_eval_cap() if eval_cap is None else eval_cap
    alg = algebra
    one = alg.one
    names = sorted(atoms(phi))
    bounds = {"max_states": max_states, "eval_cap": cap, "mode": mode}
    if kind == "distribution":
        bounds["granularity"] = granularity
    examined = 0

    def hit(ext):
        for s, v in enumerate(ext):
            if (v != one) if mode == VALIDITY else (v == one):
                return s
        return None

    for n in range(1, max_states + 1):
        projected = examined + alg.k ** (n * len(names)) * count_TS(kind, n, alg.k, granularity) ** n
        valuations = list(product(list(all_vectors(n, alg.k)), repeat=len(names)))
        if kind in TABLE_KINDS:
            domain = _table_domain(kind, n, alg)
            for vals in valuations:
                valuation = dict(zip(names, vals))

                def run(assign):
                    sigma = [LazyTable(s, assign) for s in range(n)]
                    return evaluate_structure(alg, kind, sigma, valuation, [phi], policy, registry)[0]

                for assign, ext in leaves(run, domain):
                    examined += 1
                    if examined > cap:
                        raise BlowUp("model evaluations", projected, cap)
                    s = hit(ext)
                    if s is not None:
                        sigma = _complete_tables(kind, n, alg, assign, range(n))
                        return _found(phi, kind, alg, n, sigma, valuation, s, ext[s], mode,
                                      bounds, examined, policy, registry, flavor)
            continue
        if projected > cap:
            raise BlowUp(f"models with up to {n} states", projected, cap)
        ts = list(enumerate_TS(kind, n, alg, ts_cap, granularity))
        for vals in valuations:
            valuation = dict(zip(names, vals))
            for sigma in product(ts, repeat=n):
                examined += 1
                ext = evaluate_structure(alg, kind, sigma, valuation, [phi], policy, registry)[0]
                s = hit(ext)
                if s is not None:
                    return _found(phi, kind, alg, n, sigma, valuation, s, ext[s], mode,
                                  bounds, examined, policy, registry, flavor)
    outcome = "valid-up-to-bound" if mode == VALIDITY else "unsatisfiable-up-to-bound"
    return SearchVerdict(outcome, bounds, examined, to_text(phi), fmp=fmp_bound(phi, alg, flavor))


def _found(phi, kind, alg, n, sigma, valuation, s, value, mode, bounds, examined, policy,
           registry, flavor) -> SearchVerdict:
    model = TModel(alg, kind, _state_names(n), tuple(sigma), valuation)
    again = evaluate(model, phi, policy, registry)[s]
    if again != value:
        raise RuntimeError(f"witness failed re-evaluation: {again} != {value}")
    outcome = "countermodel" if mode == VALIDITY else "satisfiable"
    return SearchVerdict(outcome, bounds, examined, to_text(phi), model=model,
                         state=model.states[s], value=value, fmp=fmp_bound(phi, alg, flavor))


def onestep_sound_bounded(rule: Rule, kind: str, algebra: FiniteAlgebra, max_states: int,
                          policy: ProbPolicy | None = None, eval_cap: int | None = None,
                          ts_cap: int = DEFAULT_TS_CAP, granularity: int = 2,
                          liftings: Mapping[str, Lifting] | None = None) -> SearchVerdict:
    """Check one-step soundness of ``rule`` on carriers of 1..``max_states`` states.

    For every marking of the rule's metavariables under which all premises
    are constantly 1, the conclusion must be 1 at every ``delta``.
    """
    check_kind(kind)
    if not rule.is_one_step:
        raise RankError(f"{rule.name} is not a one-step rule (rank-0 premises, rank-1 conclusion)")
    registry = BUILTIN if liftings is None else liftings
    _check_kinds(rule.conclusion, kind, registry)
    cap = default_eval_cap() if eval_cap is None else eval_cap
    alg = algebra
    one = alg.one
    names = sorted(rule.metavariables)
    bounds = {"max_states": max_states, "eval_cap": cap}
    if kind == "distribution":
        bounds["granularity"] = granularity
    examined = 0

    for n in range(1, max_states + 1):
        projected = examined + alg.k ** (n * len(names)) * count_TS(kind, n, alg.k, granularity)
        if kind not in TABLE_KINDS:
            if projected > cap:
                raise BlowUp(f"one-step models with up to {n} states", projected, cap)
            ts = list(enumerate_TS(kind, n, alg, ts_cap, granularity))
        for vals in product(list(all_vectors(n, alg.k)), repeat=len(names)):
            marking = [{p: v[s] for p, v in zip(names, vals)} for s in range(n)]
            if not all(x == one for prem in rule.premises for x in eval0(marking, prem, alg)):
                continue
            at = eval1(marking, rule.conclusion, alg, kind, policy, registry)
            if kind in TABLE_KINDS:
                candidates = leaves(lambda assign: at(LazyTable(0, assign)), _table_domain(kind, n, alg))
            else:
                candidates = ((delta, None) for delta in ts)
            for delta, lazy_value in candidates:
                examined += 1
                if examined > cap:
                    raise BlowUp(f"one-step models with up to {n} states", projected, cap)
                value = at(delta) if lazy_value is None else lazy_value
                if value != one:
                    if kind in TABLE_KINDS:
                        delta = _complete_tables(kind, n, alg, delta, [0])[0]
                    m = OneStepModel(alg, kind, _state_names(n), delta, marking)
                    again = m.eval1(rule.conclusion, policy)
                    if again != value:
                        raise RuntimeError(f"witness failed re-evaluation: {again} != {value}")
                    return SearchVerdict("unsound", bounds, examined, str(rule), onestep=m, value=value)
    return SearchVerdict("sound-up-to-bound", bounds, examined, str(rule))
