"""Test-side oracles and random generators.

Nothing here calls the evaluator under test: the oracles recompute truth
values from the definitions with plain Python booleans and Fractions.
"""

from __future__ import annotations

import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import product

from mvmodal.semantics import (DISTRIBUTION, FUZZY, NEIGHBORHOOD, POWERSET, SELECTION,
                               FunctionTable, TModel, all_vectors)
from mvmodal.syntax import (And, Atom, Const, Delta, Fuse, Imp, Modal, Or, Tau, Upsilon)

KIND_LIFTINGS = {
    POWERSET: [("box", 1), ("dia", 1)],
    FUZZY: [("fbox", 1), ("fdia", 1)],
    NEIGHBORHOOD: [("nbox", 1)],
    SELECTION: [("cond", 2)],
    DISTRIBUTION: [("prob", 1), ("M", 1)],
}
M_PARAMS = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))

# acceptance criterion number -> (status, title, seconds)
ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


@contextmanager
def criterion(number: int, title: str):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        dt = time.perf_counter() - t0
        ACCEPTANCE[number] = ("FAIL", title, dt)
        print(f"criterion {number}: FAIL  {title} ({dt:.1f}s)")
        raise
    dt = time.perf_counter() - t0
    ACCEPTANCE[number] = ("PASS", title, dt)
    print(f"criterion {number}: PASS  {title} ({dt:.1f}s)")


# ---------------------------------------------------------------------------
# independent arithmetic


def luk_value(n: int, i: int) -> Fraction:
    return Fraction(i, n - 1)


def luk_prod(a: Fraction, b: Fraction) -> Fraction:
    return max(Fraction(0), a + b - 1)


def luk_impl(a: Fraction, b: Fraction) -> Fraction:
    return min(Fraction(1), 1 - a + b)


def classical_value(f, assignment: dict[str, bool]) -> bool:
    """Two-valued truth of a modality-free formula."""
    if isinstance(f, Atom):
        return assignment[f.name]
    if isinstance(f, Const):
        return f.label == "1"
    a = classical_value(f.left, assignment)
    b = classical_value(f.right, assignment)
    if isinstance(f, And) or isinstance(f, Fuse):
        return a and b
    if isinstance(f, Or):
        return a or b
    if isinstance(f, Imp):
        return (not a) or b
    raise TypeError(f)


def classical_consequence(gamma, phi, names) -> bool:
    for bits in product((False, True), repeat=len(names)):
        h = dict(zip(names, bits))
        if all(classical_value(g, h) for g in gamma) and not classical_value(phi, h):
            return False
    return True


# Boolean Kripke semantics on extension tuples

def kripke_box(succ, ext):
    return tuple(all(ext[t] for t in succ[s]) for s in range(len(succ)))


def kripke_dia(succ, ext):
    return tuple(any(ext[t] for t in succ[s]) for s in range(len(succ)))


KRIPKE_BINARY = {
    "&": lambda a, b: a and b,
    "*": lambda a, b: a and b,
    "|": lambda a, b: a or b,
    "->": lambda a, b: (not a) or b,
}


# ---------------------------------------------------------------------------
# random formulas and models


def random_formula(rng: random.Random, alg, depth: int, atoms=("p", "q"), liftings=(),
                   flavor: str = "basic", rank0: bool = False):
    """A random AST of the given flavor with nesting depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.75:
            return Atom(rng.choice(atoms))
        if flavor == "delta":
            i = rng.randrange(alg.k)
        else:
            i = rng.choice((alg.zero, alg.one))
        return Const(i, alg.format_value(i))
    choices = ["bin"] * 4
    if liftings and not rank0:
        choices += ["modal"] * 2
    if flavor == "delta":
        choices.append("delta")
    if flavor == "tau-upsilon":
        choices += ["tau", "up"]
    c = rng.choice(choices)
    sub = lambda: random_formula(rng, alg, depth - 1, atoms, liftings, flavor, rank0)  # noqa: E731
    if c == "bin":
        return rng.choice((And, Or, Fuse, Imp))(sub(), sub())
    if c == "delta":
        return Delta(sub())
    if c in ("tau", "up"):
        i = rng.randrange(alg.k)
        level = Const(i, alg.format_value(i))
        return (Tau if c == "tau" else Upsilon)(level, sub())
    name, arity = rng.choice(list(liftings))
    param = rng.choice(M_PARAMS) if name == "M" else None
    return Modal(name, tuple(sub() for _ in range(arity)), param)


def random_distribution(rng: random.Random, n: int, d: int | None = None) -> tuple[Fraction, ...]:
    d = d or rng.randint(1, 4)
    cuts = sorted(rng.randint(0, d) for _ in range(n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
    return tuple(Fraction(x, d) for x in parts)


def random_element(rng: random.Random, kind: str, n: int, alg):
    k = alg.k
    if kind == POWERSET:
        return frozenset(s for s in range(n) if rng.random() < 0.5)
    if kind == FUZZY:
        return tuple(rng.randrange(k) for _ in range(n))
    if kind == NEIGHBORHOOD:
        return FunctionTable(n, k, {g: rng.randrange(k) for g in all_vectors(n, k)})
    if kind == SELECTION:
        return FunctionTable(n, k, {g: tuple(rng.randrange(k) for _ in range(n)) for g in all_vectors(n, k)})
    if kind == DISTRIBUTION:
        return random_distribution(rng, n)
    raise ValueError(kind)


def random_model(rng: random.Random, kind: str, n: int, alg, atoms=("p", "q"), spread: int | None = None):
    """Random T-model; ``spread`` limits valuations to that many values (more collisions)."""
    values = list(range(alg.k)) if spread is None else rng.sample(range(alg.k), min(spread, alg.k))
    sigma = tuple(random_element(rng, kind, n, alg) for _ in range(n))
    valuation = {p: tuple(rng.choice(values) for _ in range(n)) for p in atoms}
    return TModel(alg, kind, tuple(f"s{i}" for i in range(n)), sigma, valuation)
