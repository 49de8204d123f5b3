"""Formula ASTs, concrete syntax, and syntactic operations.

Concrete grammar, loosest binding first::

    formula := imp ('<->' imp)*              # φ<->ψ is (φ->ψ)*(ψ->φ)
    imp     := or ('->' imp)?                # right associative
    or      := and ('|' and)*
    and     := fuse ('&' fuse)*
    fuse    := unary ('*' unary)*            # strong conjunction ⊙
    unary   := '!' unary | 'D' unary | 'tau[' v ']' unary | 'up[' v ']' unary | primary
    primary := '(' formula ')' | 'c(' v ')' | '0' | '1' | atom
             | '<' name ['[' v ']'] '>' '(' formula (',' formula)* ')'

``!φ`` is sugar for ``φ -> c(0)``.  Bare ``0``/``1`` denote the bottom and
top elements of the algebra.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import FiniteAlgebra
from .errors import (ArityError, DomainMismatch, FlavorError, ParseError,
                     UnknownLifting)


class Flavor(str, enum.Enum):
    BASIC = "basic"
    DELTA = "delta"
    TAU_UPSILON = "tau-upsilon"

    @classmethod
    def parse(cls, value) -> "Flavor":
        if isinstance(value, Flavor):
            return value
        try:
            return cls(str(value))
        except ValueError:
            raise FlavorError(f"unknown flavor {value!r}; expected basic, delta or tau-upsilon") from None


class Rank(str, enum.Enum):
    RANK0 = "rank0"
    RANK1 = "rank1"
    OTHER = "other"


# ---------------------------------------------------------------------------
# AST


class Formula:
    """Base class of all formula nodes.  Nodes are immutable and hash by structure."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def rebuild(self, children: tuple["Formula", ...]) -> "Formula":
        return self

    def __str__(self) -> str:
        return to_text(self)


def _cached_hash(self) -> int:
    h = self._h
    if h is None:
        h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self._fields))
        object.__setattr__(self, "_h", h)
    return h


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    name: str
    _h: int | None = field(default=None, init=False, repr=False, compare=False)
    _fields = ("name",)
    __hash__ = _cached_hash


@dataclass(frozen=True, eq=True)
class Const(Formula):
    """Canonical constant; ``label`` is the algebra's printed form of ``index``."""

    index: int
    label: str
    _h: int | None = field(default=None, init=False, repr=False, compare=False)
    _fields = ("index", "label")
    __hash__ = _cached_hash


@dataclass(frozen=True, eq=True)
class Binary(Formula):
    left: Formula
    right: Formula
    _h: int | None = field(default=None, init=False, repr=False, compare=False)
    _fields = ("left", "right")
    __hash__ = _cached_hash
    symbol = "?"

    def children(self):
        return (self.left, self.right)

    def rebuild(self, children):
        return type(self)(*children)


class And(Binary):
    symbol = "&"
    __hash__ = _cached_hash


class Or(Binary):
    symbol = "|"
    __hash__ = _cached_hash


class Fuse(Binary):
    symbol = "*"
    __hash__ = _cached_hash


class Imp(Binary):
    symbol = "->"
    __hash__ = _cached_hash


@dataclass(frozen=True, eq=True)
class Delta(Formula):
    arg: Formula
    _h: int | None = field(default=None, init=False, repr=False, compare=False)
    _fields = ("arg",)
    __hash__ = _cached_hash

    def children(self):
        return (self.arg,)

    def rebuild(self, children):
        return Delta(children[0])


@dataclass(frozen=True, eq=True)
class Tau(Formula):
    level: Const
    arg: Formula
    _h: int | None = field(default=None, init=False, repr=False, compare=False)
    _fields = ("level", "arg")
    __hash__ = _cached_hash

    def children(self):
        return (self.arg,)

    def rebuild(self, children):
        return Tau(self.level, children[0])


@dataclass(frozen=True, eq=True)
class Upsilon(Formula):
    level: Const
    arg: Formula
    _h: int | None = field(default=None, init=False, repr=False, compare=False)
    _fields = ("level", "arg")
    __hash__ = _cached_hash

    def children(self):
        return (self.arg,)

    def rebuild(self, children):
        return Upsilon(self.level, children[0])


@dataclass(frozen=True, eq=True)
class Modal(Formula):
    name: str
    args: tuple[Formula, ...]
    param: Fraction | None = None
    _h: int | None = field(default=None, init=False, repr=False, compare=False)
    _fields = ("name", "args", "param")
    __hash__ = _cached_hash

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    def children(self):
        return self.args

    def rebuild(self, children):
        return Modal(self.name, tuple(children), self.param)


BINARY_TYPES = {"&": And, "|": Or, "*": Fuse, "->": Imp}


def const(alg: FiniteAlgebra, value) -> Const:
    """Canonical constant for a value given as index, TruthValue or label text."""
    if isinstance(value, (str, Fraction)):
        i = alg.parse_value(value)
    else:
        i = alg.index_of(value)
    return Const(i, alg.format_value(i))


def top(alg: FiniteAlgebra) -> Const:
    return Const(alg.one, alg.format_value(alg.one))


def bottom(alg: FiniteAlgebra) -> Const:
    return Const(alg.zero, alg.format_value(alg.zero))


def neg(phi: Formula, alg: FiniteAlgebra) -> Formula:
    return Imp(phi, bottom(alg))


def iff(a: Formula, b: Formula) -> Formula:
    return Fuse(Imp(a, b), Imp(b, a))


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class LiftingDecl:
    name: str
    arity: int
    kind: str
    parametric: bool = False

    def __post_init__(self):
        if self.arity < 1:
            raise ArityError(f"lifting {self.name} must have arity >= 1")


class Signature(Mapping[str, LiftingDecl]):
    """Modal signature: lifting name -> declaration."""

    def __init__(self, decls: Iterable[LiftingDecl]):
        self._decls: dict[str, LiftingDecl] = {}
        for d in decls:
            if d.name in self._decls:
                raise ValueError(f"duplicate lifting name {d.name}")
            self._decls[d.name] = d

    def __getitem__(self, name: str) -> LiftingDecl:
        try:
            return self._decls[name]
        except KeyError:
            raise UnknownLifting(f"unknown lifting {name!r}") from None

    def __iter__(self):
        return iter(self._decls)

    def __len__(self):
        return len(self._decls)

    def for_kind(self, kind: str) -> "Signature":
        return Signature(d for d in self._decls.values() if d.kind == kind)

    def __repr__(self):
        return f"Signature({sorted(self._decls)})"


BUILTIN_DECLS = (
    LiftingDecl("box", 1, "powerset"),
    LiftingDecl("dia", 1, "powerset"),
    LiftingDecl("fbox", 1, "fuzzy"),
    LiftingDecl("fdia", 1, "fuzzy"),
    LiftingDecl("nbox", 1, "neighborhood"),
    LiftingDecl("cond", 2, "selection"),
    LiftingDecl("prob", 1, "distribution"),
    LiftingDecl("M", 1, "distribution", parametric=True),
)


def builtin_signature() -> Signature:
    return Signature(BUILTIN_DECLS)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[()\[\],&|*!<>])
""", re.VERBOSE)

RESERVED = {"D", "tau", "up", "c"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            out.append((val if kind in ("sym", "iff", "imp") else kind, val, pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, signature, flavor, alg):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = signature
        self.flavor = flavor
        self.alg = alg

    def peek(self, offset=0):
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            what = t[1] or "end of input"
            raise ParseError(f"expected {kind!r}, found {what!r}", t[2])
        return t

    def parse(self):
        f = self.formula()
        t = self.peek()
        if t[0] != "eof":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return f

    def formula(self):
        left = self.imp()
        while self.peek()[0] == "<->":
            self.next()
            right = self.imp()
            left = iff(left, right)
        return left

    def imp(self):
        left = self.disj()
        if self.peek()[0] == "->":
            self.next()
            return Imp(left, self.imp())
        return left

    def _left_assoc(self, sym, sub, cls):
        left = sub()
        while self.peek()[0] == sym:
            self.next()
            left = cls(left, sub())
        return left

    def disj(self):
        return self._left_assoc("|", self.conj, Or)

    def conj(self):
        return self._left_assoc("&", self.fuse, And)

    def fuse(self):
        return self._left_assoc("*", self.unary, Fuse)

    def value(self):
        tok = self.expect("num")
        try:
            return const(self.alg, tok[1])
        except DomainMismatch as e:
            raise ParseError(f"constant {tok[1]} outside the algebra: {e}", tok[2]) from None

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "!":
            self.next()
            return Imp(self.unary(), bottom(self.alg))
        if kind == "name" and val == "D":
            self.next()
            return Delta(self.unary())
        if kind == "name" and val in ("tau", "up"):
            self.next()
            self.expect("[")
            level = self.value()
            self.expect("]")
            arg = self.unary()
            return Tau(level, arg) if val == "tau" else Upsilon(level, arg)
        return self.primary()

    def primary(self):
        kind, val, pos = self.peek()
        if kind == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if kind == "num":
            self.next()
            if val == "0":
                return bottom(self.alg)
            if val == "1":
                return top(self.alg)
            raise ParseError(f"bare number {val!r}; write constants as c({val})", pos)
        if kind == "name" and val == "c" and self.peek(1)[0] == "(":
            self.next()
            self.next()
            c = self.value()
            self.expect(")")
            return c
        if kind == "name":
            if val in RESERVED:
                raise ParseError(f"{val!r} is reserved", pos)
            self.next()
            return Atom(val)
        if kind == "<":
            return self.modal()
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)

    def modal(self):
        self.expect("<")
        name_tok = self.expect("name")
        name = name_tok[1]
        try:
            decl = self.sig[name]
        except UnknownLifting:
            raise UnknownLifting(f"unknown lifting {name!r} at position {name_tok[2]}") from None
        param = None
        if self.peek()[0] == "[":
            self.next()
            tok = self.expect("num")
            param = Fraction(tok[1])
            self.expect("]")
            if not decl.parametric:
                raise ParseError(f"lifting {name} takes no parameter", tok[2])
            if not 0 <= param <= 1:
                raise ParseError(f"parameter {param} outside [0,1]", tok[2])
        elif decl.parametric:
            raise ParseError(f"lifting {name} needs a parameter, e.g. <{name}[1/2]>", name_tok[2])
        self.expect(">")
        self.expect("(")
        args = [self.formula()]
        while self.peek()[0] == ",":
            self.next()
            args.append(self.formula())
        self.expect(")")
        if len(args) != decl.arity:
            raise ArityError(f"lifting {name} has arity {decl.arity}, got {len(args)} arguments "
                             f"at position {name_tok[2]}")
        return Modal(name, tuple(args), param)


def parse(text: str, signature: Signature | None = None, flavor=Flavor.BASIC,
          algebra: FiniteAlgebra | None = None) -> Formula:
    """Parse concrete syntax into a formula and check it against ``flavor``."""
    if algebra is None:
        raise ValueError("parse needs the algebra that interprets constants")
    signature = builtin_signature() if signature is None else signature
    flavor = Flavor.parse(flavor)
    f = _Parser(text, signature, flavor, algebra).parse()
    bad = first_flavor_violation(f, flavor, algebra)
    if bad is not None:
        raise FlavorError(f"{to_text(bad)!r} is not allowed in the {flavor.value} language")
    return f


# ---------------------------------------------------------------------------
# printing

_PREC = {Imp: 1, Or: 2, And: 3, Fuse: 4}
_ATOMIC = 9


def _iff_parts(f: Formula) -> tuple[Formula, Formula] | None:
    """``(a, b)`` when ``f`` is ``(a->b)*(b->a)``, the expansion of ``a <-> b``."""
    if (type(f) is Fuse and type(f.left) is Imp and type(f.right) is Imp
            and f.left.left == f.right.right and f.left.right == f.right.left):
        return f.left.left, f.left.right
    return None


def _prec(f: Formula) -> int:
    if _iff_parts(f) is not None:
        return 0
    return _PREC.get(type(f), _ATOMIC if not isinstance(f, (Delta, Tau, Upsilon)) else 5)


def to_text(f: Formula) -> str:
    """Render ``f`` so that ``parse(to_text(f))`` rebuilds the same AST."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return f"c({f.label})"
    parts = _iff_parts(f)
    if parts is not None:
        return f"{_wrap(parts[0], 0)} <-> {_wrap(parts[1], 1)}"
    if isinstance(f, Binary):
        p = _PREC[type(f)]
        if isinstance(f, Imp):
            lmin, rmin = p + 1, p
        else:
            lmin, rmin = p, p + 1
        return f"{_wrap(f.left, lmin)} {f.symbol} {_wrap(f.right, rmin)}"
    if isinstance(f, Delta):
        return f"D {_wrap(f.arg, 5)}"
    if isinstance(f, Tau):
        return f"tau[{f.level.label}] {_wrap(f.arg, 5)}"
    if isinstance(f, Upsilon):
        return f"up[{f.level.label}] {_wrap(f.arg, 5)}"
    if isinstance(f, Modal):
        head = f.name if f.param is None else f"{f.name}[{f.param}]"
        return f"<{head}>(" + ", ".join(to_text(a) for a in f.args) + ")"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, min_prec: int) -> str:
    s = to_text(f)
    return s if _prec(f) >= min_prec else f"({s})"


# ---------------------------------------------------------------------------
# structural operations


def iter_nodes(f: Formula):
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children()))


def subformulas(f: Formula) -> frozenset[Formula]:
    return frozenset(iter_nodes(f))


def size(f: Formula) -> int:
    """Number of AST nodes (the size convention used for FMP bounds)."""
    return sum(1 for _ in iter_nodes(f))


def depth(f: Formula) -> int:
    ch = f.children()
    return 0 if not ch else 1 + max(depth(c) for c in ch)


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in iter_nodes(f) if isinstance(g, Atom))


def canonical_key(f: Formula):
    return (size(f), to_text(f))


def closure(formulas: Iterable[Formula], flavor=Flavor.BASIC,
            algebra: FiniteAlgebra | None = None) -> tuple[Formula, ...]:
    """Smallest subformula-closed superset containing top, bottom and, for the
    delta language, every canonical constant.  Ordered by (size, text)."""
    if algebra is None:
        raise ValueError("closure needs the algebra")
    flavor = Flavor.parse(flavor)
    out: set[Formula] = set()
    for f in formulas:
        out |= subformulas(f)
    out.add(top(algebra))
    out.add(bottom(algebra))
    if flavor is Flavor.DELTA:
        out.update(Const(i, algebra.format_value(i)) for i in algebra.elements)
    return tuple(sorted(out, key=canonical_key))


def is_closed(formulas: Iterable[Formula], algebra: FiniteAlgebra, flavor=Flavor.BASIC) -> bool:
    fs = set(formulas)
    return set(closure(fs, flavor, algebra)) == fs


def substitute(f: Formula, rho: Mapping[str, Formula], flavor=None,
               algebra: FiniteAlgebra | None = None) -> Formula:
    """Simultaneously replace atoms by formulas.

    With ``flavor`` (and ``algebra``) given, a result outside that language
    raises :class:`FlavorError`.
    """
    out = _subst(f, rho) if rho else f
    if flavor is not None:
        bad = first_flavor_violation(out, Flavor.parse(flavor), algebra)
        if bad is not None:
            raise FlavorError(f"substitution produced {to_text(bad)!r}, illegal in {Flavor.parse(flavor).value}")
    return out


def _subst(f: Formula, rho: Mapping[str, Formula]) -> Formula:
    if isinstance(f, Atom):
        return rho.get(f.name, f)
    ch = f.children()
    if not ch:
        return f
    new = tuple(_subst(c, rho) for c in ch)
    return f if new == ch else f.rebuild(new)


def is_rank0(f: Formula) -> bool:
    return not any(isinstance(g, Modal) for g in iter_nodes(f))


def rank(f: Formula, signature: Signature | None = None) -> Rank:
    if is_rank0(f):
        return Rank.RANK0
    return Rank.RANK1 if _rank1(f) else Rank.OTHER


def _rank1(f: Formula) -> bool:
    if isinstance(f, Modal):
        return all(is_rank0(a) for a in f.args)
    if isinstance(f, Atom):
        return False
    return all(_rank1(c) for c in f.children())


def modal_atoms(f: Formula) -> list[Modal]:
    """Outermost modal subformulas in left-to-right order (duplicates kept once)."""
    seen: dict[Modal, None] = {}

    def walk(g):
        if isinstance(g, Modal):
            seen.setdefault(g)
        else:
            for c in g.children():
                walk(c)
    walk(f)
    return list(seen)


def first_flavor_violation(f: Formula, flavor, algebra: FiniteAlgebra | None) -> Formula | None:
    flavor = Flavor.parse(flavor)
    ends = None if algebra is None else (algebra.zero, algebra.one)
    for g in iter_nodes(f):
        if isinstance(g, Const):
            if algebra is not None and not _const_ok(g, algebra):
                return g
            if flavor is not Flavor.DELTA and ends is not None and g.index not in ends:
                return g
        elif isinstance(g, Delta):
            if flavor is not Flavor.DELTA:
                return g
        elif isinstance(g, (Tau, Upsilon)):
            if flavor is not Flavor.TAU_UPSILON:
                return g
            if algebra is not None and not _const_ok(g.level, algebra):
                return g
    return None


def _const_ok(c: Const, alg: FiniteAlgebra) -> bool:
    return 0 <= c.index < alg.k and alg.format_value(c.index) == c.label


def flavor_check(f: Formula, flavor, algebra: FiniteAlgebra | None = None) -> bool:
    return first_flavor_violation(f, flavor, algebra) is None


# ---------------------------------------------------------------------------
# JSON AST

_OP_NAMES = {And: "and", Or: "or", Fuse: "fuse", Imp: "imp"}
_OP_TYPES = {v: k for k, v in _OP_NAMES.items()}


def to_json(f: Formula) -> dict:
    if isinstance(f, Atom):
        return {"atom": f.name}
    if isinstance(f, Const):
        return {"const": f.label}
    if isinstance(f, Binary):
        return {"op": _OP_NAMES[type(f)], "args": [to_json(f.left), to_json(f.right)]}
    if isinstance(f, Delta):
        return {"op": "delta", "args": [to_json(f.arg)]}
    if isinstance(f, (Tau, Upsilon)):
        return {"op": "tau" if isinstance(f, Tau) else "upsilon", "c": f.level.label,
                "args": [to_json(f.arg)]}
    if isinstance(f, Modal):
        out = {"modal": f.name, "args": [to_json(a) for a in f.args]}
        if f.param is not None:
            out["param"] = str(f.param)
        return out
    raise TypeError(f"not a formula: {f!r}")


def from_json(obj, algebra: FiniteAlgebra, signature: Signature | None = None) -> Formula:
    signature = builtin_signature() if signature is None else signature
    if isinstance(obj, str):
        return _parse_any(obj, signature, algebra)
    if "atom" in obj:
        return Atom(obj["atom"])
    if "const" in obj:
        return const(algebra, str(obj["const"]))
    if "modal" in obj:
        decl = signature[obj["modal"]]
        args = tuple(from_json(a, algebra, signature) for a in obj["args"])
        if len(args) != decl.arity:
            raise ArityError(f"lifting {decl.name} has arity {decl.arity}, got {len(args)}")
        param = Fraction(obj["param"]) if "param" in obj else None
        if decl.parametric != (param is not None):
            raise ParseError(f"parameter mismatch for lifting {decl.name}")
        return Modal(decl.name, args, param)
    op = obj.get("op")
    args = [from_json(a, algebra, signature) for a in obj.get("args", [])]
    if op in _OP_TYPES and len(args) == 2:
        return _OP_TYPES[op](*args)
    if op == "delta" and len(args) == 1:
        return Delta(args[0])
    if op in ("tau", "upsilon") and len(args) == 1:
        level = const(algebra, str(obj["c"]))
        return Tau(level, args[0]) if op == "tau" else Upsilon(level, args[0])
    raise ParseError(f"malformed formula JSON: {obj!r}")


def _parse_any(text: str, signature: Signature, algebra: FiniteAlgebra) -> Formula:
    """Parse without a flavor restriction (every connective allowed)."""
    f = _Parser(text, signature, Flavor.DELTA, algebra).parse()
    bad = next((g for g in iter_nodes(f) if isinstance(g, Const) and not _const_ok(g, algebra)), None)
    if bad is not None:
        raise DomainMismatch(f"constant {to_text(bad)} outside the algebra")
    return f


def parse_any(text: str, algebra: FiniteAlgebra, signature: Signature | None = None) -> Formula:
    """Parse accepting the union of all three languages."""
    return _parse_any(text, builtin_signature() if signature is None else signature, algebra)
