"""Naturality testing for predicate liftings.

For every map ``f: X -> Y`` with ``|X|, |Y| <= size_bound``, every argument
tuple ``g: Y -> A^n`` and every ``delta`` in ``TX`` the check compares

    lifting_X(g . f)(delta)  ==  lifting_Y(g)(Tf(delta)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from ..algebra import FiniteAlgebra
from .functors import (DEFAULT_TS_CAP, DISTRIBUTION, NEIGHBORHOOD, TABLE_KINDS, FunctionTable,
                       all_vectors, enumerate_TS, functor_map)
from .lazy import LazyTable, complete, leaves
from .liftings import FLOOR, Lifting, ProbPolicy

DEFAULT_PARAMS = (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), Fraction(1))


@dataclass(frozen=True)
class NaturalityWitness:
    x_size: int
    y_size: int
    f: tuple[int, ...]
    args: tuple[tuple[int, ...], ...]
    delta: object
    param: Fraction | None
    lhs: int
    rhs: int

    def describe(self, alg: FiniteAlgebra) -> str:
        args = ", ".join("(" + ",".join(alg.format_value(v) for v in g) + ")" for g in self.args)
        return (f"|X|={self.x_size} |Y|={self.y_size} f={self.f} g=[{args}] delta={self.delta!r} "
                f"param={self.param}: lifting_X(g.f)(delta)={alg.format_value(self.lhs)} but "
                f"lifting_Y(g)(Tf delta)={alg.format_value(self.rhs)}")


@dataclass
class NaturalityReport:
    lifting: str
    algebra: str
    checks: int = 0
    exhaustive: bool = True
    sampled: list[str] = field(default_factory=list)
    witness: NaturalityWitness | None = None

    @property
    def ok(self) -> bool:
        return self.witness is None

    def __str__(self) -> str:
        mode = "exhaustive" if self.exhaustive else "sampled"
        status = "PASS" if self.ok else "FAIL"
        return f"{self.lifting} over {self.algebra}: {status} ({self.checks} squares, {mode})"


def _apply(lift, alg, args, element, param):
    pol = ProbPolicy(FLOOR, floored=[])
    v = lift(alg, args, element, param, pol)
    # exact sums that were rounded are part of the compared value
    return v, tuple(pol.floored)


def _deltas(kind, nx, alg, ts_cap, granularity):
    if kind != DISTRIBUTION:
        yield from enumerate_TS(kind, nx, alg, ts_cap)
        return
    seen = set()
    for d in range(1, granularity + 1):
        for mu in enumerate_TS(kind, nx, alg, ts_cap, granularity=d):
            if mu not in seen:
                seen.add(mu)
                yield mu


def naturality_check(lifting: Lifting, algebra: FiniteAlgebra, size_bound: int = 3,
                     arg_cap: int = 100_000, ts_cap: int = DEFAULT_TS_CAP, granularity: int = 4,
                     params: Sequence[Fraction] | None = None, samples: int = 2_000,
                     seed: int = 0) -> NaturalityReport:
    """Check the naturality square of ``lifting`` on all small carriers.

    Argument tuples are enumerated exhaustively when there are at most
    ``arg_cap`` of them and otherwise ``samples`` tuples are drawn with a
    ``random.Random(seed)`` generator (the report is then marked sampled).
    Neighborhood and selection structures are covered exhaustively by
    branching only on the table entries the two sides read.
    """
    alg = algebra
    kind = lifting.kind
    report = NaturalityReport(lifting.name, repr(alg))
    if lifting.parametric:
        param_list = list(DEFAULT_PARAMS if params is None else params)
    else:
        param_list = [None]
    rng = random.Random(seed)

    for nx in range(1, size_bound + 1):
        for ny in range(1, size_bound + 1):
            vectors_y = list(all_vectors(ny, alg.k))
            n_args = len(vectors_y) ** lifting.arity
            if n_args <= arg_cap:
                arg_tuples = list(product(vectors_y, repeat=lifting.arity))
            else:
                report.exhaustive = False
                report.sampled.append(f"|X|={nx} |Y|={ny}: {samples} of {n_args} argument tuples")
                arg_tuples = [tuple(rng.choice(vectors_y) for _ in range(lifting.arity))
                              for _ in range(samples)]
            for f in product(range(ny), repeat=nx):
                for param in param_list:
                    for g in arg_tuples:
                        pulled = [tuple(gi[f[x]] for x in range(nx)) for gi in g]
                        w = _check_square(lifting, alg, kind, nx, ny, f, g, pulled, param,
                                          report, ts_cap, granularity)
                        if w is not None:
                            report.witness = w
                            return report
    return report


def _check_square(lift, alg, kind, nx, ny, f, g, pulled, param, report, ts_cap, granularity):
    if kind in TABLE_KINDS:
        def run(assign):
            delta = LazyTable(0, assign)
            lhs = _apply(lift, alg, pulled, delta, param)
            rhs = _apply(lift, alg, g, functor_map(kind, f, ny, delta, alg), param)
            return lhs, rhs

        if kind == NEIGHBORHOOD:
            def domain(slot, key):
                return range(alg.k)
        else:
            outs = list(all_vectors(nx, alg.k))

            def domain(slot, key):
                return outs

        for assign, (lhs, rhs) in leaves(run, domain):
            report.checks += 1
            if lhs != rhs:
                default = alg.zero if kind == NEIGHBORHOOD else (alg.zero,) * nx
                entries = complete({key: v for (_, key), v in assign.items()},
                                   all_vectors(nx, alg.k), default)
                return NaturalityWitness(nx, ny, f, tuple(g), FunctionTable(nx, alg.k, entries),
                                         param, lhs[0], rhs[0])
        return None

    for delta in _deltas(kind, nx, alg, ts_cap, granularity):
        report.checks += 1
        lhs = _apply(lift, alg, pulled, delta, param)
        rhs = _apply(lift, alg, g, functor_map(kind, f, ny, delta, alg), param)
        if lhs != rhs:
            return NaturalityWitness(nx, ny, f, tuple(g), delta, param, lhs[0], rhs[0])
    return None
