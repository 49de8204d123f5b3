"""Built-in predicate liftings and their application to one structure element."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable, Sequence

from ..algebra import FiniteAlgebra
from ..errors import ArityError, DomainMismatch, KindMismatch, OutOfDomain, UnknownLifting
from .functors import DISTRIBUTION, FUZZY, NEIGHBORHOOD, POWERSET, SELECTION

STRICT = "strict"
FLOOR = "floor"


@dataclass
class ProbPolicy:
    """How ``prob`` treats exact sums that are not elements of a finite chain.

    ``strict`` raises :class:`OutOfDomain`; ``floor`` rounds down to the
    largest element below the sum and records the exact sum in ``floored``.
    """

    mode: str = STRICT
    floored: list | None = None

    def __post_init__(self):
        if self.mode not in (STRICT, FLOOR):
            raise ValueError(f"unknown prob mode {self.mode!r}")


_DEFAULT_POLICY = ProbPolicy()


@dataclass(frozen=True)
class Lifting:
    """An n-ary predicate lifting for one functor kind.

    ``fn(alg, args, element, param, policy)`` receives the argument
    predicates as value tuples indexed by state and returns a value index.
    """

    name: str
    arity: int
    kind: str
    fn: Callable
    monotone: bool = False
    parametric: bool = False

    def __call__(self, alg, args, element, param=None, policy=None):
        return self.fn(alg, args, element, param, policy or _DEFAULT_POLICY)


def _box(alg, args, X, param, policy):
    f = args[0]
    return alg.big_meet(f[x] for x in X)


def _dia(alg, args, X, param, policy):
    f = args[0]
    return alg.big_join(f[x] for x in X)


def _fbox(alg, args, g, param, policy):
    f = args[0]
    I = alg.impl
    return alg.big_meet(I[gx][fx] for gx, fx in zip(g, f))


def _fdia(alg, args, g, param, policy):
    f = args[0]
    P = alg.prod
    return alg.big_join(P[gx][fx] for gx, fx in zip(g, f))


def _nbox(alg, args, N, param, policy):
    return N[args[0]]


def _cond(alg, args, s, param, policy):
    f, g = args
    selected = s[f]
    I = alg.impl
    # degree of inclusion selected ⊆ g
    return alg.big_meet(I[a][b] for a, b in zip(selected, g))


def rational_to_value(alg: FiniteAlgebra, q: Fraction, policy: ProbPolicy) -> int:
    m = q * (alg.n - 1)
    if m.denominator == 1:
        return int(m)
    if policy.mode == STRICT:
        raise OutOfDomain(q, f"prob produced {q}, which is not an element of Ł{alg.n} "
                             f"(use the floor mode to round down)")
    if policy.floored is not None:
        policy.floored.append(q)
    return floor(m)


def _require_rationals(alg, name):
    if alg.rationals is None:
        raise DomainMismatch(f"lifting {name} needs a Łukasiewicz algebra (values embedded in [0,1])")


def _prob(alg, args, mu, param, policy):
    _require_rationals(alg, "prob")
    f = args[0]
    R = alg.rationals
    total = sum((R[v] * p for v, p in zip(f, mu)), Fraction(0))
    return rational_to_value(alg, total, policy)


def _m_r(alg, args, mu, param, policy):
    if param is None:
        raise ArityError("lifting M needs its threshold parameter r")
    f = args[0]
    le = alg.le
    best = alg.zero
    J = alg.join
    for a in alg.elements:
        mass = sum((p for v, p in zip(f, mu) if le[a][v]), Fraction(0))
        if mass > param:
            best = J[best][a]
    return best


BUILTIN: dict[str, Lifting] = {
    lift.name: lift for lift in (
        Lifting("box", 1, POWERSET, _box, monotone=True),
        Lifting("dia", 1, POWERSET, _dia, monotone=True),
        Lifting("fbox", 1, FUZZY, _fbox, monotone=True),
        Lifting("fdia", 1, FUZZY, _fdia, monotone=True),
        Lifting("nbox", 1, NEIGHBORHOOD, _nbox),
        Lifting("cond", 2, SELECTION, _cond),
        Lifting("prob", 1, DISTRIBUTION, _prob, monotone=True),
        Lifting("M", 1, DISTRIBUTION, _m_r, monotone=True, parametric=True),
    )
}


def get_lifting(name: str, registry: dict | None = None) -> Lifting:
    reg = BUILTIN if registry is None else registry
    try:
        return reg[name]
    except KeyError:
        raise UnknownLifting(f"unknown lifting {name!r}") from None


def lifting_apply(lifting: Lifting | str, args: Sequence[Sequence[int]], element, alg: FiniteAlgebra,
                  param=None, kind: str | None = None, policy: ProbPolicy | None = None) -> int:
    """Value of ``lifting`` at one structure element for the given argument predicates."""
    lift = get_lifting(lifting) if isinstance(lifting, str) else lifting
    if len(args) != lift.arity:
        raise ArityError(f"lifting {lift.name} has arity {lift.arity}, got {len(args)} arguments")
    if kind is not None and kind != lift.kind:
        raise KindMismatch(f"lifting {lift.name} is defined for {lift.kind} structures, not {kind}")
    return lift(alg, [tuple(a) for a in args], element, param, policy)
