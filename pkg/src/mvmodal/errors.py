"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ModalLogicError(Exception):
    """Base class for all errors raised by mvmodal."""


class InvalidParameter(ModalLogicError, ValueError):
    pass


class DomainMismatch(ModalLogicError, ValueError):
    """A truth value does not belong to the algebra it is used with."""


class AlgebraLawError(ModalLogicError, ValueError):
    """Operation tables violate an FL_ew law.

    ``law`` names the violated law and ``witness`` holds the offending
    element tuple (indices).
    """

    def __init__(self, law: str, witness: tuple, message: str | None = None):
        self.law = law
        self.witness = witness
        super().__init__(message or f"{law} violated at {witness}")


class ParseError(ModalLogicError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class FlavorError(ModalLogicError, ValueError):
    """A connective or constant is not legal in the requested language."""


class UnknownLifting(ModalLogicError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class ArityError(ModalLogicError, ValueError):
    pass


class KindMismatch(ModalLogicError, ValueError):
    """A lifting is applied to a structure of the wrong functor kind."""


class UndeclaredAtom(ModalLogicError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class RankError(ModalLogicError, ValueError):
    pass


class OutOfDomain(ModalLogicError, ArithmeticError):
    """An exact computation produced a rational outside the finite algebra."""

    def __init__(self, value, message: str | None = None):
        self.value = value
        super().__init__(message or f"value {value} is not an element of the algebra")


class BlowUp(ModalLogicError, RuntimeError):
    """A search or table would exceed a configured cap."""

    def __init__(self, cap_name: str, projected: int, cap: int):
        self.cap_name = cap_name
        self.projected = projected
        self.cap = cap
        super().__init__(f"{cap_name}: projected count {projected} exceeds cap {cap}")


class NotClosed(ModalLogicError, ValueError):
    pass


class ModelError(ModalLogicError, ValueError):
    """Malformed model or structure (non-total table, bad distribution...)."""
