"""Exhaustive enumeration of table-valued structures by reading only what is used.

Neighborhood and selection structures over ``n`` states are tables with
``k**n`` keys, so the full space ``k**(k**n)`` is out of reach even at tiny
sizes.  A computation that reads such a table only depends on the entries it
actually reads.  :func:`leaves` re-runs the computation against partially
assigned tables and branches on every entry the first time it is read; the
leaves of the resulting decision tree partition the full space, so checking
every leaf is equivalent to checking every total table.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Iterator


class Undetermined(Exception):
    """Raised by a :class:`LazyTable` read of an unassigned entry."""

    def __init__(self, slot: Hashable, key: tuple):
        self.slot = slot
        self.key = key


class LazyTable:
    """Read-only view of one table inside a partial assignment."""

    __slots__ = ("slot", "assignment")

    def __init__(self, slot: Hashable, assignment: dict):
        self.slot = slot
        self.assignment = assignment

    def __getitem__(self, key):
        key = tuple(key)
        try:
            return self.assignment[(self.slot, key)]
        except KeyError:
            raise Undetermined(self.slot, key) from None

    def entries(self) -> dict:
        return {key: v for (slot, key), v in self.assignment.items() if slot == self.slot}


def leaves(run: Callable[[dict], object],
           domain: Callable[[Hashable, tuple], Iterable]) -> Iterator[tuple[dict, object]]:
    """Yield ``(assignment, run(assignment))`` for every leaf of the read tree.

    ``domain(slot, key)`` lists the candidate values of an entry, in the order
    they should be explored.  Leaves come out in depth-first order, which is
    deterministic for a deterministic ``run``.
    """
    stack: list[dict] = [{}]
    while stack:
        assign = stack.pop()
        try:
            result = run(assign)
        except Undetermined as u:
            branch = [{**assign, (u.slot, u.key): v} for v in domain(u.slot, u.key)]
            stack.extend(reversed(branch))
            continue
        yield assign, result


def complete(partial: dict, keys: Iterable[tuple], default) -> dict:
    """Fill unread entries with ``default`` to obtain a total table."""
    return {key: partial.get(key, default) for key in keys}
