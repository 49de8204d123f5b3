"""Filtrations: quotienting a T-model by agreement on a closed formula set.

States ``s`` and ``t`` are identified when every formula of ``Phi`` takes the
same value at both.  Given the quotient map ``q`` and a representative choice
``r`` with ``q(r(c)) = c``, the quotient structure is ``Tq . sigma . r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import FiniteAlgebra
from .errors import InvalidParameter, NotClosed
from .semantics.functors import DEFAULT_TABLE_CAP, functor_map, materialize
from .semantics.liftings import ProbPolicy
from .semantics.model import TModel, evaluate_many
from .syntax import Flavor, Formula, canonical_key, closure, is_closed, size, to_text

SIZE_CONVENTION = "|phi| = number of AST nodes; the bound is k ** |closure({phi})|"


@dataclass(frozen=True)
class FiltrationResult:
    """A quotient of ``model`` together with the maps that produced it.

    ``classes[c]`` lists the original state indices of class ``c``;
    ``q[s]`` is the class of state ``s`` and ``r[c]`` the representative.
    """

    phi: tuple[Formula, ...]
    classes: tuple[tuple[int, ...], ...]
    q: tuple[int, ...]
    r: tuple[int, ...]
    quotient: TModel

    def mapping(self, model: TModel) -> dict[str, str]:
        """``{original state: quotient state}``."""
        return {s: self.quotient.states[c] for s, c in zip(model.states, self.q)}


@dataclass
class FiltrationReport:
    checked: int = 0
    violations: list[tuple[Formula, str, int, int]] = field(default_factory=list)
    bound: int = 0
    quotient_size: int = 0
    pseudo_inverse: bool = True

    @property
    def within_bound(self) -> bool:
        return self.quotient_size <= self.bound

    @property
    def ok(self) -> bool:
        return not self.violations and self.within_bound and self.pseudo_inverse

    def describe(self, alg: FiniteAlgebra) -> str:
        lines = [f"filtration lemma: {'PASS' if self.ok else 'FAIL'} "
                 f"({self.checked} formula/state pairs, {self.quotient_size} classes, "
                 f"bound k^|Phi| = {self.bound})"]
        for f, s, v, w in self.violations:
            lines.append(f"  {to_text(f)} at {s}: model {alg.format_value(v)}, quotient {alg.format_value(w)}")
        if not self.pseudo_inverse:
            lines.append("  q . r is not the identity on classes")
        return "\n".join(lines)


def _closed_phi(model: TModel, phi: Iterable[Formula]) -> tuple[Formula, ...]:
    fs = tuple(sorted(set(phi), key=canonical_key))
    if not is_closed(fs, model.algebra, Flavor.BASIC):
        missing = set(closure(fs, Flavor.BASIC, model.algebra)) - set(fs)
        example = min(missing, key=canonical_key)
        raise NotClosed(f"formula set is not closed: it lacks {to_text(example)} "
                        f"(and {len(missing) - 1} more); use closure() first")
    return fs


def profiles(model: TModel, phi: Sequence[Formula], policy: ProbPolicy | None = None) -> list[tuple]:
    exts = evaluate_many(model, phi, policy)
    return [tuple(e[s] for e in exts) for s in range(model.n)]


def equiv_classes(model: TModel, phi: Iterable[Formula],
                  policy: ProbPolicy | None = None) -> tuple[tuple[int, ...], ...]:
    """Partition of the state indices by their value profile on ``phi``.

    ``phi`` must be closed.  Classes are ordered by their least member.
    """
    fs = _closed_phi(model, phi)
    groups: dict[tuple, list[int]] = {}
    for s, prof in enumerate(profiles(model, fs, policy)):
        groups.setdefault(prof, []).append(s)
    return tuple(sorted((tuple(g) for g in groups.values()), key=lambda g: g[0]))


def filtrate(model: TModel, phi: Iterable[Formula], r_choice: Sequence | None = None,
             policy: ProbPolicy | None = None, cap: int = DEFAULT_TABLE_CAP) -> FiltrationResult:
    """The ``phi``-filtration of ``model``.

    ``r_choice`` optionally picks one representative per class (state
    indices or names, in class order); the default is the least member.
    """
    fs = _closed_phi(model, phi)
    classes = equiv_classes(model, fs, policy)
    nc = len(classes)
    q = [0] * model.n
    for c, members in enumerate(classes):
        for s in members:
            q[s] = c
    if r_choice is None:
        r = tuple(members[0] for members in classes)
    else:
        if len(r_choice) != nc:
            raise InvalidParameter(f"r_choice needs one representative per class ({nc}), got {len(r_choice)}")
        r = tuple(model.index(x) if isinstance(x, str) else x for x in r_choice)
        for c, s in enumerate(r):
            if s not in classes[c]:
                raise InvalidParameter(f"representative {s} is not a member of class {c}")
    q = tuple(q)
    alg, kind = model.algebra, model.kind
    sigma = tuple(materialize(kind, functor_map(kind, q, nc, model.sigma[s], alg), nc, alg, cap)
                  for s in r)
    valuation = {p: tuple(v[s] for s in r) for p, v in model.valuation.items()}
    quotient = TModel(alg, kind, tuple(f"q{c}" for c in range(nc)), sigma, valuation)
    return FiltrationResult(fs, classes, q, r, quotient)


def check_filtration_lemma(model: TModel, phi: Iterable[Formula], result: FiltrationResult,
                           policy: ProbPolicy | None = None) -> FiltrationReport:
    """Compare every formula of ``phi`` at every state with its value at the class."""
    fs = tuple(sorted(set(phi), key=canonical_key))
    report = FiltrationReport(bound=model.algebra.k ** len(fs), quotient_size=result.quotient.n)
    report.pseudo_inverse = all(result.q[s] == c for c, s in enumerate(result.r))
    original = evaluate_many(model, fs, policy)
    quotient = evaluate_many(result.quotient, fs, policy)
    for f, ext, qext in zip(fs, original, quotient):
        for s in range(model.n):
            report.checked += 1
            v, w = ext[s], qext[result.q[s]]
            if v != w:
                report.violations.append((f, model.states[s], v, w))
    return report


@dataclass(frozen=True)
class FmpBound:
    bound: int
    k: int
    closure_size: int
    formula_size: int
    convention: str = SIZE_CONVENTION


def fmp_bound(phi: Formula, algebra: FiniteAlgebra, flavor=Flavor.BASIC) -> FmpBound:
    """Model-size bound ``k ** |closure({phi})|`` as an exact integer."""
    n = len(closure([phi], flavor, algebra))
    return FmpBound(algebra.k ** n, algebra.k, n, size(phi))
