"""Finite FL_ew algebras (commutative integral residuated lattices).

Elements are handled as plain integer indices ``0 .. k-1`` throughout the
package; :class:`TruthValue` is the decorated view used for display and for
catching values that belong to a different algebra.  Łukasiewicz chains
additionally know the exact rational ``m/(n-1)`` behind every index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import AlgebraLawError, DomainMismatch, InvalidParameter

Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class TruthValue:
    """An element of a specific finite algebra."""

    index: int
    label: str
    rational: Fraction | None = None
    owner: tuple = field(default=(), repr=False, compare=True)

    def __str__(self) -> str:
        return self.label


class FiniteAlgebra:
    """A finite FL_ew algebra given by total operation tables.

    Do not call the constructor directly; use :func:`lukasiewicz` or
    :func:`from_tables`, which validate the laws first.
    """

    def __init__(self, k: int, meet: Table, join: Table, prod: Table, impl: Table,
                 zero: int, one: int, kind: str = "table", n: int | None = None):
        self.k = k
        self.meet = meet
        self.join = join
        self.prod = prod
        self.impl = impl
        self.zero = zero
        self.one = one
        self.kind = kind
        self.n = n
        self.label: str | None = None  # display name only; not part of identity
        self.key = (k, meet, join, prod, impl, zero, one)
        # a <= b  iff  a ∧ b = a
        self.le = tuple(tuple(meet[a][b] == a for b in range(k)) for a in range(k))
        self.rationals: tuple[Fraction, ...] | None = (
            tuple(Fraction(i, n - 1) for i in range(n)) if kind == "lukasiewicz" else None
        )

    # -- identity -----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteAlgebra) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        if self.kind == "lukasiewicz":
            return f"lukasiewicz({self.n})"
        if self.label:
            return self.label
        return f"FiniteAlgebra(k={self.k}, zero={self.zero}, one={self.one})"

    @property
    def elements(self) -> range:
        return range(self.k)

    @property
    def is_lukasiewicz(self) -> bool:
        return self.kind == "lukasiewicz"

    # -- elements -----------------------------------------------------------
    def index_of(self, value) -> int:
        """Normalise an int or :class:`TruthValue` to an index of this algebra."""
        if isinstance(value, TruthValue):
            if value.owner != self.key:
                raise DomainMismatch(f"truth value {value} belongs to a different algebra")
            return value.index
        if isinstance(value, bool) or not isinstance(value, int):
            raise DomainMismatch(f"{value!r} is not an element index")
        if not 0 <= value < self.k:
            raise DomainMismatch(f"index {value} outside domain of size {self.k}")
        return value

    def element(self, index: int) -> TruthValue:
        i = self.index_of(index)
        rat = self.rationals[i] if self.rationals else None
        return TruthValue(i, self.format_value(i), rat, self.key)

    def format_value(self, index: int) -> str:
        if self.rationals is not None:
            return str(self.rationals[index])
        return str(index)

    def json_value(self, index: int):
        """Value as written in JSON files: a rational string for Łn, else the index."""
        return self.format_value(index) if self.rationals is not None else index

    def parse_value(self, text) -> int:
        """Read a value written as in model files: ``"1/2"`` for Łn, an index otherwise."""
        if isinstance(text, TruthValue):
            return self.index_of(text)
        if self.rationals is not None:
            try:
                q = Fraction(str(text).strip())
            except (ValueError, ZeroDivisionError):
                raise DomainMismatch(f"{text!r} is not a rational") from None
            return self.index_of_rational(q)
        try:
            i = int(str(text).strip())
        except ValueError:
            raise DomainMismatch(f"{text!r} is not an element index") from None
        return self.index_of(i)

    def index_of_rational(self, q: Fraction) -> int:
        if self.rationals is None:
            raise DomainMismatch("algebra has no rational embedding")
        m = q * (self.n - 1)
        if m.denominator != 1 or not 0 <= m <= self.n - 1:
            raise DomainMismatch(f"{q} is not an element of Ł{self.n}")
        return int(m)

    def rational(self, index: int) -> Fraction:
        if self.rationals is None:
            raise DomainMismatch("algebra has no rational embedding")
        return self.rationals[index]

    # -- operations on indices ----------------------------------------------
    def leq(self, a: int, b: int) -> bool:
        return self.le[a][b]

    def big_meet(self, values: Iterable[int]) -> int:
        acc = self.one
        m = self.meet
        for v in values:
            acc = m[acc][v]
        return acc

    def big_join(self, values: Iterable[int]) -> int:
        acc = self.zero
        j = self.join
        for v in values:
            acc = j[acc][v]
        return acc

    def neg(self, a: int) -> int:
        return self.impl[a][self.zero]

    def iff(self, a: int, b: int) -> int:
        return self.prod[self.impl[a][b]][self.impl[b][a]]

    def delta(self, a: int) -> int:
        return self.one if a == self.one else self.zero

    def tau(self, c: int, a: int) -> int:
        return self.one if a == c else self.zero

    def upsilon(self, c: int, a: int) -> int:
        return self.one if self.le[c][a] else self.zero

    def to_json(self) -> dict:
        if self.kind == "lukasiewicz":
            return {"kind": "lukasiewicz", "n": self.n}
        return {
            "kind": "table", "k": self.k,
            "meet": [list(r) for r in self.meet], "join": [list(r) for r in self.join],
            "prod": [list(r) for r in self.prod], "impl": [list(r) for r in self.impl],
            "zero": self.zero, "one": self.one,
        }


# ---------------------------------------------------------------------------
# construction


def lukasiewicz(n: int) -> FiniteAlgebra:
    """The n-valued Łukasiewicz chain on {0, 1/(n-1), ..., 1}."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise InvalidParameter(f"Łukasiewicz chain needs n >= 2, got {n!r}")
    vals = [Fraction(i, n - 1) for i in range(n)]
    idx = {v: i for i, v in enumerate(vals)}

    def tab(op):
        return tuple(tuple(idx[op(a, b)] for b in vals) for a in vals)

    alg = FiniteAlgebra(
        n,
        meet=tab(min),
        join=tab(max),
        prod=tab(lambda a, b: max(Fraction(0), a + b - 1)),
        impl=tab(lambda a, b: min(Fraction(1), 1 - a + b)),
        zero=0, one=n - 1, kind="lukasiewicz", n=n,
    )
    report = validate_algebra(alg)
    if not report.ok:  # pragma: no cover - would be a bug in the formulas above
        f = report.first_failure
        raise AlgebraLawError(f.law, f.witness)
    return alg


def _as_table(k: int, rows, name: str) -> Table:
    try:
        t = tuple(tuple(int(x) for x in row) for row in rows)
    except (TypeError, ValueError):
        raise AlgebraLawError("totality", (name,), f"{name} table is not an integer matrix") from None
    if len(t) != k or any(len(r) != k for r in t):
        raise AlgebraLawError("totality", (name,), f"{name} table is not {k}x{k}")
    for a, row in enumerate(t):
        for b, v in enumerate(row):
            if not 0 <= v < k:
                raise AlgebraLawError("totality", (name, a, b), f"{name}[{a}][{b}] = {v} outside domain")
    return t


def from_tables(k: int, meet, join, prod, impl, zero: int, one: int) -> FiniteAlgebra:
    """Build a general finite algebra, refusing tables that break a law.

    Raises :class:`AlgebraLawError` naming the first violated law and its
    witnessing element tuple.
    """
    alg = unchecked_from_tables(k, meet, join, prod, impl, zero, one)
    report = validate_algebra(alg)
    if not report.ok:
        f = report.first_failure
        raise AlgebraLawError(f.law, f.witness)
    return alg


def unchecked_from_tables(k: int, meet, join, prod, impl, zero: int, one: int) -> FiniteAlgebra:
    """Shape-checked but otherwise unvalidated algebra, for reporting on bad tables."""
    if isinstance(k, bool) or not isinstance(k, int) or k < 2:
        raise InvalidParameter(f"domain size must be an integer >= 2, got {k!r}")
    tabs = [_as_table(k, t, name) for t, name in
            ((meet, "meet"), (join, "join"), (prod, "prod"), (impl, "impl"))]
    for name, v in (("zero", zero), ("one", one)):
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < k:
            raise AlgebraLawError("totality", (name,), f"{name} = {v!r} outside domain")
    return FiniteAlgebra(k, *tabs, zero=zero, one=one)


def algebra_from_json(obj: dict) -> FiniteAlgebra:
    kind = obj.get("kind")
    if kind == "lukasiewicz":
        return lukasiewicz(obj.get("n"))
    if kind == "table":
        try:
            fields = [obj[f] for f in ("k", "meet", "join", "prod", "impl", "zero", "one")]
        except KeyError as e:
            raise InvalidParameter(f"table algebra is missing field {e}") from None
        return from_tables(*fields)
    raise InvalidParameter(f"unknown algebra kind {kind!r}")


def check_algebra_json(obj: dict) -> AlgebraReport:
    """Law report for an algebra file without rejecting failing tables."""
    if obj.get("kind") == "table":
        try:
            fields = [obj[f] for f in ("k", "meet", "join", "prod", "impl", "zero", "one")]
        except KeyError as e:
            raise InvalidParameter(f"table algebra is missing field {e}") from None
        try:
            alg = unchecked_from_tables(*fields)
        except AlgebraLawError as e:
            return AlgebraReport((LawCheck(e.law, False, e.witness),))
        return validate_algebra(alg)
    return validate_algebra(algebra_from_json(obj))


def godel_chain(k: int) -> FiniteAlgebra:
    """k-element Gödel chain: ⊙ = min with the Gödel residuum."""
    rng = range(k)
    meet = [[min(a, b) for b in rng] for a in rng]
    join = [[max(a, b) for b in rng] for a in rng]
    impl = [[k - 1 if a <= b else b for b in rng] for a in rng]
    alg = from_tables(k, meet, join, meet, impl, 0, k - 1)
    alg.label = f"godel({k})"
    return alg


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class LawCheck:
    law: str
    passed: bool
    witness: tuple | None = None


@dataclass(frozen=True)
class AlgebraReport:
    checks: tuple[LawCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> LawCheck | None:
        return next((c for c in self.checks if not c.passed), None)

    def __str__(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else f"FAIL at {c.witness}"
            lines.append(f"{c.law}: {status}")
        return "\n".join(lines)


def _first(it) -> tuple | None:
    return next(iter(it), None)


def validate_algebra(alg: FiniteAlgebra) -> AlgebraReport:
    """Check every FL_ew law by exhaustive enumeration (O(k^3)).

    Witnesses are the lexicographically least failing tuple.
    """
    k, M, J, P, I = alg.k, alg.meet, alg.join, alg.prod, alg.impl
    z, o = alg.zero, alg.one
    E = range(k)
    pairs = list(product(E, E))
    triples = list(product(E, E, E))
    le = lambda a, b: M[a][b] == a  # noqa: E731

    laws: list[tuple[str, tuple | None]] = [
        ("meet idempotent", _first((a,) for a in E if M[a][a] != a)),
        ("meet commutative", _first((a, b) for a, b in pairs if M[a][b] != M[b][a])),
        ("meet associative", _first(t for t in triples if M[M[t[0]][t[1]]][t[2]] != M[t[0]][M[t[1]][t[2]]])),
        ("join idempotent", _first((a,) for a in E if J[a][a] != a)),
        ("join commutative", _first((a, b) for a, b in pairs if J[a][b] != J[b][a])),
        ("join associative", _first(t for t in triples if J[J[t[0]][t[1]]][t[2]] != J[t[0]][J[t[1]][t[2]]])),
        ("absorption", _first((a, b) for a, b in pairs if M[a][J[a][b]] != a or J[a][M[a][b]] != a)),
        ("order consistency", _first((a, b) for a, b in pairs if (M[a][b] == a) != (J[a][b] == b))),
        ("bounds", _first((a,) for a in E if not (le(z, a) and le(a, o)))),
        ("prod commutative", _first((a, b) for a, b in pairs if P[a][b] != P[b][a])),
        ("prod associative", _first(t for t in triples if P[P[t[0]][t[1]]][t[2]] != P[t[0]][P[t[1]][t[2]]])),
        ("prod unit", _first((a,) for a in E if P[a][o] != a or P[o][a] != a)),
        ("residuation", _first((a, b, c) for a, b, c in triples if le(P[a][b], c) != le(b, I[a][c]))),
    ]
    return AlgebraReport(tuple(LawCheck(name, w is None, w) for name, w in laws))


# ---------------------------------------------------------------------------
# module-level convenience wrappers accepting ints or TruthValues


def leq(alg: FiniteAlgebra, a, b) -> bool:
    return alg.leq(alg.index_of(a), alg.index_of(b))


def big_meet(alg: FiniteAlgebra, values: Iterable) -> int:
    return alg.big_meet(alg.index_of(v) for v in values)


def big_join(alg: FiniteAlgebra, values: Iterable) -> int:
    return alg.big_join(alg.index_of(v) for v in values)


def delta(alg: FiniteAlgebra, a) -> int:
    return alg.delta(alg.index_of(a))


def tau(alg: FiniteAlgebra, c, a) -> int:
    return alg.tau(alg.index_of(c), alg.index_of(a))


def upsilon(alg: FiniteAlgebra, c, a) -> int:
    return alg.upsilon(alg.index_of(c), alg.index_of(a))


def neg(alg: FiniteAlgebra, a) -> int:
    return alg.neg(alg.index_of(a))


def iff_val(alg: FiniteAlgebra, a, b) -> int:
    return alg.iff(alg.index_of(a), alg.index_of(b))


def values_of(alg: FiniteAlgebra, labels: Sequence) -> list[int]:
    return [alg.parse_value(x) for x in labels]
