"""One-step frames and models: 0-step and 1-step interpretation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from ..algebra import FiniteAlgebra
from ..errors import KindMismatch, RankError, UndeclaredAtom
from ..syntax import Formula, Rank, atoms, is_rank0, modal_atoms, rank, to_text
from .functors import check_kind, validate_element
from .liftings import BUILTIN, Lifting, ProbPolicy, get_lifting
from .model import Extension, evaluate_prop

Marking = Sequence[Mapping[str, int]]  # state index -> (atom -> value)


def coloring(marking: Marking) -> dict[str, tuple[int, ...]]:
    """The dual view ``p -> (s -> m(s)(p))`` of a marking."""
    atoms = set()
    for row in marking:
        atoms |= set(row)
    return {p: tuple(row[p] if p in row else None for row in marking) for p in sorted(atoms)}


def eval0(marking: Marking, pi: Formula, algebra: FiniteAlgebra) -> Extension:
    """0-step interpretation of a modality-free formula over the marked set."""
    if not is_rank0(pi):
        raise RankError(f"{to_text(pi)!r} is not a rank-0 formula")
    n = len(marking)
    col = coloring(marking)

    def atom_ext(name):
        ext = col.get(name)
        if ext is None or None in ext:
            raise UndeclaredAtom(f"marking does not assign atom {name!r} at every state")
        return ext

    def modal_ext(g, ev):  # pragma: no cover - excluded by the rank check
        raise RankError("modal operator in a rank-0 formula")

    return evaluate_prop(pi, n, algebra, atom_ext, modal_ext)


def eval1(marking: Marking, alpha: Formula, algebra: FiniteAlgebra, kind: str,
          policy: ProbPolicy | None = None,
          liftings: Mapping[str, Lifting] | None = None) -> Callable[[object], int]:
    """1-step interpretation: returns ``delta -> ||alpha||^1_m(delta)`` on ``T(S)``.

    The 0-step interpretations of all modal arguments are computed once; the
    returned function only applies the liftings at ``delta``.
    """
    check_kind(kind)
    if not (rank(alpha) is Rank.RANK1 or (is_rank0(alpha) and not atoms(alpha))):
        raise RankError(f"{to_text(alpha)!r} is not a rank-1 formula")
    registry = BUILTIN if liftings is None else liftings
    prepared = []
    cache: dict[Formula, Extension] = {}
    for m in modal_atoms(alpha):
        lift = get_lifting(m.name, registry)
        if lift.kind != kind:
            raise KindMismatch(f"lifting {m.name} is for {lift.kind} structures, not {kind}")
        args = [cache.setdefault(a, eval0(marking, a, algebra)) for a in m.args]
        prepared.append((m, lift, args))

    def at(delta) -> int:
        values = {m: (lift(algebra, args, delta, m.param, policy),) for m, lift, args in prepared}

        def atom_ext(name):  # pragma: no cover - excluded by the rank check
            raise RankError(f"atom {name!r} occurs outside a modality")

        def modal_ext(g, ev):
            return values[g]

        return evaluate_prop(alpha, 1, algebra, atom_ext, modal_ext)[0]

    return at


@dataclass(frozen=True)
class OneStepModel:
    """A one-step frame ``(S, delta)`` with a marking of ``S``."""

    algebra: FiniteAlgebra
    kind: str
    states: tuple[str, ...]
    delta: object
    marking: tuple[Mapping[str, int], ...]

    def __post_init__(self):
        check_kind(self.kind)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "marking", tuple(dict(m) for m in self.marking))
        validate_element(self.kind, self.delta, len(self.states), self.algebra, where="delta")

    def eval0(self, pi: Formula) -> Extension:
        return eval0(self.marking, pi, self.algebra)

    def eval1(self, alpha: Formula, policy: ProbPolicy | None = None) -> int:
        return eval1(self.marking, alpha, self.algebra, self.kind, policy)(self.delta)
