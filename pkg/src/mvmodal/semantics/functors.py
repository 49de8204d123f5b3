"""The five functor kinds: element representations, action on maps, enumeration.

Carriers are ``range(n)``; an element of ``TS`` is represented as

* powerset      -- ``frozenset`` of state indices
* fuzzy         -- tuple of ``n`` value indices (an A-valued relation row)
* neighborhood  -- mapping from value vectors (``S -> A``) to a value index
* selection     -- mapping from value vectors to value vectors
* distribution  -- tuple of ``n`` Fractions summing to exactly 1
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Iterator, Mapping, Sequence

from ..algebra import FiniteAlgebra
from ..errors import BlowUp, InvalidParameter, ModelError

POWERSET = "powerset"
FUZZY = "fuzzy"
NEIGHBORHOOD = "neighborhood"
SELECTION = "selection"
DISTRIBUTION = "distribution"

KINDS = (POWERSET, FUZZY, NEIGHBORHOOD, SELECTION, DISTRIBUTION)
TABLE_KINDS = (NEIGHBORHOOD, SELECTION)

DEFAULT_TABLE_CAP = 10_000
DEFAULT_TS_CAP = 5_000_000


def check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise InvalidParameter(f"unknown functor kind {kind!r}; expected one of {', '.join(KINDS)}")
    return kind


def all_vectors(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Every function ``range(n) -> range(k)`` as a tuple, in lexicographic order."""
    return product(range(k), repeat=n)


class FunctionTable(Mapping):
    """A total table keyed by all value vectors of length ``n`` over ``k`` values.

    Used for neighborhood functions (values are ints) and selection functions
    (values are vectors).
    """

    def __init__(self, n: int, k: int, entries: Mapping):
        self.n = n
        self.k = k
        self._entries = dict(entries)

    @classmethod
    def build(cls, n: int, k: int, fn, cap: int = DEFAULT_TABLE_CAP) -> "FunctionTable":
        keys = k ** n
        if keys > cap:
            raise BlowUp("table keys (|A|^|S|)", keys, cap)
        return cls(n, k, {key: fn(key) for key in all_vectors(n, k)})

    def __getitem__(self, key):
        return self._entries[tuple(key)]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        if isinstance(other, FunctionTable):
            return self.n == other.n and self._entries == other._entries
        return NotImplemented

    def __hash__(self):
        return hash((self.n, tuple(sorted(self._entries.items()))))

    def __repr__(self):
        return f"FunctionTable(n={self.n}, k={self.k}, {len(self._entries)} entries)"


class _PushedNeighborhood:
    """Lazy ``(Tq N)(g) = N(g . q)``; entries are computed on demand."""

    def __init__(self, base, q: Sequence[int]):
        self.base = base
        self.q = tuple(q)

    def __getitem__(self, g):
        return self.base[tuple(g[y] for y in self.q)]


class _PushedSelection:
    """Lazy ``(Tq s)(g)(y) = join_{q(x)=y} s(g . q)(x)``."""

    def __init__(self, base, q: Sequence[int], n_target: int, alg: FiniteAlgebra):
        self.base = base
        self.q = tuple(q)
        self.n_target = n_target
        self.alg = alg

    def __getitem__(self, g):
        inner = self.base[tuple(g[y] for y in self.q)]
        out = [self.alg.zero] * self.n_target
        J = self.alg.join
        for x, y in enumerate(self.q):
            out[y] = J[out[y]][inner[x]]
        return tuple(out)


def functor_map(kind: str, q: Sequence[int], n_target: int, element, alg: FiniteAlgebra):
    """Apply ``Tq`` for ``q: range(len(q)) -> range(n_target)`` to an element of ``TS``.

    Table kinds return lazy views; pass the result through :func:`materialize`
    to obtain a stored table.
    """
    if kind == POWERSET:
        return frozenset(q[x] for x in element)
    if kind == FUZZY:
        out = [alg.zero] * n_target
        J = alg.join
        for x, v in enumerate(element):
            out[q[x]] = J[out[q[x]]][v]
        return tuple(out)
    if kind == NEIGHBORHOOD:
        return _PushedNeighborhood(element, q)
    if kind == SELECTION:
        return _PushedSelection(element, q, n_target, alg)
    if kind == DISTRIBUTION:
        out = [Fraction(0)] * n_target
        for x, p in enumerate(element):
            out[q[x]] += p
        return tuple(out)
    raise InvalidParameter(f"unknown functor kind {kind!r}")


def materialize(kind: str, element, n: int, alg: FiniteAlgebra, cap: int = DEFAULT_TABLE_CAP):
    """Turn a (possibly lazy or partial) table element into a stored total table."""
    if kind in TABLE_KINDS and not isinstance(element, FunctionTable):
        return FunctionTable.build(n, alg.k, lambda key: element[key], cap)
    return element


def count_TS(kind: str, n: int, k: int, granularity: int = 2) -> int:
    if kind == POWERSET:
        return 2 ** n
    if kind == FUZZY:
        return k ** n
    if kind == NEIGHBORHOOD:
        return k ** (k ** n)
    if kind == SELECTION:
        return (k ** n) ** (k ** n)
    if kind == DISTRIBUTION:
        return comb(granularity + n - 1, n - 1)
    raise InvalidParameter(f"unknown functor kind {kind!r}")


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_TS(kind: str, n: int, alg: FiniteAlgebra, cap: int = DEFAULT_TS_CAP,
                 granularity: int = 2) -> Iterator:
    """Every element of ``T(range(n))``, without duplicates, in a fixed order.

    Distributions are restricted to values in ``{0, 1/d, ..., 1}`` for
    ``d = granularity``.  Raises :class:`BlowUp` before yielding anything if
    the count exceeds ``cap``.
    """
    check_kind(kind)
    if kind == DISTRIBUTION and granularity < 1:
        raise InvalidParameter("distribution granularity must be >= 1")
    total = count_TS(kind, n, alg.k, granularity)
    if total > cap:
        raise BlowUp(f"{kind} structures over {n} states", total, cap)
    return _enumerate(kind, n, alg, granularity)


def _enumerate(kind, n, alg, granularity):
    k = alg.k
    if kind == POWERSET:
        for r in range(n + 1):
            for c in combinations(range(n), r):
                yield frozenset(c)
    elif kind == FUZZY:
        yield from all_vectors(n, k)
    elif kind == NEIGHBORHOOD:
        keys = list(all_vectors(n, k))
        for vals in product(range(k), repeat=len(keys)):
            yield FunctionTable(n, k, zip(keys, vals))
    elif kind == SELECTION:
        keys = list(all_vectors(n, k))
        outs = list(all_vectors(n, k))
        for vals in product(outs, repeat=len(keys)):
            yield FunctionTable(n, k, zip(keys, vals))
    elif kind == DISTRIBUTION:
        for c in _compositions(granularity, n):
            yield tuple(Fraction(x, granularity) for x in c)


def validate_element(kind: str, element, n: int, alg: FiniteAlgebra, where: str = "") -> None:
    """Raise :class:`ModelError` unless ``element`` is a well-formed member of ``T(range(n))``."""
    loc = f" {where}" if where else ""
    if kind == POWERSET:
        if not isinstance(element, frozenset) or any(not (isinstance(x, int) and 0 <= x < n) for x in element):
            raise ModelError(f"powerset element{loc} must be a set of state indices")
    elif kind == FUZZY:
        if len(element) != n or any(not 0 <= v < alg.k for v in element):
            raise ModelError(f"fuzzy row{loc} must give a value for each of {n} states")
    elif kind in TABLE_KINDS:
        if not isinstance(element, FunctionTable) or element.n != n:
            raise ModelError(f"{kind} structure{loc} must be a table over {n} states")
        keys = set(all_vectors(n, alg.k))
        if set(element) != keys:
            raise ModelError(f"{kind} table{loc} is not total over Hom(S,A)")
        for key in keys:
            v = element[key]
            if kind == NEIGHBORHOOD:
                ok = isinstance(v, int) and 0 <= v < alg.k
            else:
                ok = len(v) == n and all(0 <= x < alg.k for x in v)
            if not ok:
                raise ModelError(f"{kind} table{loc} has an invalid entry at {key}")
    elif kind == DISTRIBUTION:
        if len(element) != n or any(not isinstance(p, Fraction) or p < 0 for p in element):
            raise ModelError(f"distribution{loc} must give a non-negative rational per state")
        if sum(element) != 1:
            raise ModelError(f"distribution{loc} sums to {sum(element)}, not 1")
    else:
        check_kind(kind)
