"""T-models, the evaluator, and the model JSON format."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from ..algebra import FiniteAlgebra, algebra_from_json
from ..errors import KindMismatch, ModelError, UndeclaredAtom
from ..syntax import (And, Atom, Const, Delta, Formula, Fuse, Imp, Modal, Or, Tau,
                      Upsilon)
from .functors import (DISTRIBUTION, FUZZY, NEIGHBORHOOD, POWERSET, SELECTION,
                       FunctionTable, all_vectors, check_kind, validate_element)
from .liftings import BUILTIN, Lifting, ProbPolicy, get_lifting

Extension = tuple  # value index per state


@dataclass(frozen=True)
class TModel:
    """A coalgebra ``sigma: S -> TS`` over ``states`` plus a valuation.

    ``sigma[i]`` is the structure element of state ``i`` (see
    :mod:`mvmodal.semantics.functors` for the representation per kind) and
    ``valuation[p][i]`` the value of atom ``p`` at state ``i``.
    """

    algebra: FiniteAlgebra
    kind: str
    states: tuple[str, ...]
    sigma: tuple
    valuation: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        check_kind(self.kind)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "sigma", tuple(self.sigma))
        object.__setattr__(self, "valuation", {p: tuple(v) for p, v in self.valuation.items()})
        n = len(self.states)
        if n == 0:
            raise ModelError("a model needs at least one state")
        if len(set(self.states)) != n:
            raise ModelError("state names must be distinct")
        if len(self.sigma) != n:
            raise ModelError(f"sigma must give one structure per state ({n}), got {len(self.sigma)}")
        if self.kind == DISTRIBUTION and not self.algebra.is_lukasiewicz:
            raise ModelError("distribution models need a Łukasiewicz algebra")
        for i, el in enumerate(self.sigma):
            validate_element(self.kind, el, n, self.algebra, where=f"at state {self.states[i]}")
        for p, vals in self.valuation.items():
            if len(vals) != n or any(not (isinstance(v, int) and 0 <= v < self.algebra.k) for v in vals):
                raise ModelError(f"valuation of {p} must give a value in the algebra for each state")

    @property
    def n(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise ModelError(f"unknown state {state!r}") from None


# ---------------------------------------------------------------------------
# evaluation


def evaluate_prop(f: Formula, n: int, alg: FiniteAlgebra,
                  atom_ext: Callable[[str], Extension],
                  modal_ext: Callable[[Modal, Callable], Extension],
                  memo: dict | None = None) -> Extension:
    """Structural evaluation over ``n`` points; modal nodes are delegated."""
    memo = {} if memo is None else memo
    M, J, P, I = alg.meet, alg.join, alg.prod, alg.impl
    one, zero = alg.one, alg.zero

    def ev(g):
        r = memo.get(g)
        if r is not None:
            return r
        t = type(g)
        if t is Atom:
            r = atom_ext(g.name)
        elif t is Const:
            r = (g.index,) * n
        elif t is And:
            r = tuple(M[a][b] for a, b in zip(ev(g.left), ev(g.right)))
        elif t is Or:
            r = tuple(J[a][b] for a, b in zip(ev(g.left), ev(g.right)))
        elif t is Fuse:
            r = tuple(P[a][b] for a, b in zip(ev(g.left), ev(g.right)))
        elif t is Imp:
            r = tuple(I[a][b] for a, b in zip(ev(g.left), ev(g.right)))
        elif t is Delta:
            r = tuple(one if a == one else zero for a in ev(g.arg))
        elif t is Tau:
            c = g.level.index
            r = tuple(one if a == c else zero for a in ev(g.arg))
        elif t is Upsilon:
            row = alg.le[g.level.index]
            r = tuple(one if row[a] else zero for a in ev(g.arg))
        elif t is Modal:
            r = modal_ext(g, ev)
        else:
            raise TypeError(f"not a formula node: {g!r}")
        memo[g] = r
        return r

    return ev(f)


def evaluate(model: TModel, f: Formula, policy: ProbPolicy | None = None,
             liftings: Mapping[str, Lifting] | None = None) -> Extension:
    """``s -> ||f||(s)`` as a tuple of value indices ordered like ``model.states``."""
    return evaluate_many(model, [f], policy, liftings)[0]


def evaluate_many(model: TModel, formulas: Sequence[Formula], policy: ProbPolicy | None = None,
                  liftings: Mapping[str, Lifting] | None = None) -> list[Extension]:
    """Extensions of several formulas, sharing work on common subformulas."""
    return evaluate_structure(model.algebra, model.kind, model.sigma, model.valuation,
                              formulas, policy, liftings)


def evaluate_structure(alg: FiniteAlgebra, kind: str, sigma: Sequence, valuation: Mapping,
                       formulas: Sequence[Formula], policy: ProbPolicy | None = None,
                       liftings: Mapping[str, Lifting] | None = None) -> list[Extension]:
    """Evaluate over an unvalidated structure (used by searches over partial tables)."""
    n = len(sigma)
    registry = BUILTIN if liftings is None else liftings

    def atom_ext(name):
        try:
            return valuation[name]
        except KeyError:
            raise UndeclaredAtom(f"atom {name!r} has no valuation in the model") from None

    def modal_ext(g: Modal, ev):
        lift = get_lifting(g.name, registry)
        if lift.kind != kind:
            raise KindMismatch(f"lifting {g.name} is for {lift.kind} models, this model is {kind}")
        args = [ev(a) for a in g.args]
        return tuple(lift(alg, args, sigma[s], g.param, policy) for s in range(n))

    memo: dict = {}
    return [evaluate_prop(f, n, alg, atom_ext, modal_ext, memo) for f in formulas]


def value_map(model: TModel, f: Formula, policy: ProbPolicy | None = None) -> dict[str, str]:
    ext = evaluate(model, f, policy)
    return {s: model.algebra.format_value(v) for s, v in zip(model.states, ext)}


# ---------------------------------------------------------------------------
# JSON


def _state_values(obj: Mapping, states: Sequence[str], alg: FiniteAlgebra, default=None,
                  where: str = "") -> tuple[int, ...]:
    unknown = set(obj) - set(states)
    if unknown:
        raise ModelError(f"unknown state(s) {sorted(unknown)} {where}")
    out = []
    for s in states:
        if s in obj:
            out.append(alg.parse_value(obj[s]))
        elif default is not None:
            out.append(default)
        else:
            raise ModelError(f"missing value for state {s!r} {where}")
    return tuple(out)


def element_from_json(kind: str, row, states: Sequence[str], alg: FiniteAlgebra, where: str = ""):
    """Read one structure element (a ``sigma`` row) in the model file format."""
    n = len(states)
    pos = {s: i for i, s in enumerate(states)}
    if kind == POWERSET:
        try:
            return frozenset(pos[t] for t in row)
        except KeyError as e:
            raise ModelError(f"unknown state {e} {where}") from None
    if kind == FUZZY:
        return _state_values(row, states, alg, default=alg.zero, where=where)
    if kind == DISTRIBUTION:
        unknown = set(row) - set(states)
        if unknown:
            raise ModelError(f"unknown state(s) {sorted(unknown)} {where}")
        try:
            return tuple(Fraction(str(row.get(t, 0))) for t in states)
        except (ValueError, ZeroDivisionError):
            raise ModelError(f"non-rational probability {where}") from None
    key_field, val_field = ("set", "value") if kind == NEIGHBORHOOD else ("in", "out")
    entries = {}
    for item in row:
        key = _state_values(item[key_field], states, alg, where=where)
        if kind == NEIGHBORHOOD:
            entries[key] = alg.parse_value(item[val_field])
        else:
            entries[key] = _state_values(item[val_field], states, alg, where=where)
    missing = set(all_vectors(n, alg.k)) - set(entries)
    if missing:
        raise ModelError(f"{kind} table {where} is not total: {len(missing)} keys missing")
    return FunctionTable(n, alg.k, entries)


def model_from_json(obj: Mapping) -> TModel:
    try:
        alg = algebra_from_json(obj["algebra"])
        kind = check_kind(obj["functor"])
        states = tuple(obj["states"])
        raw_sigma = obj["sigma"]
    except KeyError as e:
        raise ModelError(f"model JSON is missing field {e}") from None
    sigma = []
    for s in states:
        if s not in raw_sigma:
            raise ModelError(f"sigma is not total: no entry for state {s!r}")
        sigma.append(element_from_json(kind, raw_sigma[s], states, alg, where=f"in sigma[{s}]"))
    valuation = {p: _state_values(v, states, alg, where=f"in valuation[{p}]")
                 for p, v in obj.get("valuation", {}).items()}
    return TModel(alg, kind, states, tuple(sigma), valuation)


def _named(alg, states, ext) -> dict:
    return {s: alg.json_value(v) for s, v in zip(states, ext)}


def element_to_json(kind: str, el, states: Sequence[str], alg: FiniteAlgebra):
    if kind == POWERSET:
        return [states[i] for i in sorted(el)]
    if kind == FUZZY:
        return _named(alg, states, el)
    if kind == DISTRIBUTION:
        return {t: str(p) for t, p in zip(states, el)}
    if kind == NEIGHBORHOOD:
        return [{"set": _named(alg, states, key), "value": alg.json_value(el[key])}
                for key in all_vectors(len(states), alg.k)]
    return [{"in": _named(alg, states, key), "out": _named(alg, states, el[key])}
            for key in all_vectors(len(states), alg.k)]


def model_to_json(model: TModel) -> dict:
    alg, states = model.algebra, model.states
    return {
        "algebra": alg.to_json(),
        "functor": model.kind,
        "states": list(states),
        "sigma": {s: element_to_json(model.kind, el, states, alg) for s, el in zip(states, model.sigma)},
        "valuation": {p: _named(alg, states, v) for p, v in sorted(model.valuation.items())},
    }
