"""Domain store: preference variables over discrete time slots plus an undo trail.

Time is a dense integer grid of slots (0, 1, 2, ...); one slot is one
teaching period.  A preference variable holds a finite set of candidate
slots, and every live slot carries a natural-number penalty.  Penalty 0
means the slot is fully preferred; larger penalties mean the slot is
discouraged, either by an initial cost supplied at construction or by
weights pushed onto it during propagation.

All mutation goes through a :class:`Trail` so that search can restore the
exact prior state on backtrack.
"""

from __future__ import annotations

from typing import Callable, Iterator, List, Optional, Tuple


class SchedulingError(Exception):
    """Base class for solver errors."""


class DomainWipeout(SchedulingError):
    """A propagation step emptied a variable's domain; the caller must backtrack."""

    def __init__(self, var_id: int):
        super().__init__(f"domain of variable {var_id} wiped out")
        self.var_id = var_id


class Trail:
    """Reversible log of store mutations.

    Records value removals, penalty increments, assignments and occupancy
    bumps.  Undoing a suffix of entries restores the touched objects
    bit-for-bit.
    """

    __slots__ = ("_entries",)

    _REMOVE = 0
    _PENALTY = 1
    _ASSIGN = 2
    _OCCUPANCY = 3

    def __init__(self):
        self._entries: List[tuple] = []

    def __len__(self) -> int:
        return len(self._entries)

    def mark(self) -> int:
        """Current position; pass to :meth:`undo_to` to rewind."""
        return len(self._entries)

    def push_remove(self, var: "PreferenceVariable", slot: int) -> None:
        self._entries.append((Trail._REMOVE, var, slot))

    def push_penalty(self, var: "PreferenceVariable", slot: int, delta: int) -> None:
        self._entries.append((Trail._PENALTY, var, slot, delta))

    def push_assign(self, var: "PreferenceVariable") -> None:
        self._entries.append((Trail._ASSIGN, var))

    def push_occupancy(self, counts: List[int], index: int, delta: int) -> None:
        self._entries.append((Trail._OCCUPANCY, counts, index, delta))

    def undo_to(self, mark: int) -> None:
        """Rewind to a previous :meth:`mark`, newest entries first."""
        entries = self._entries
        while len(entries) > mark:
            entry = entries.pop()
            tag = entry[0]
            if tag == Trail._REMOVE:
                _, var, slot = entry
                var._restore_value(slot)
            elif tag == Trail._PENALTY:
                _, var, slot, delta = entry
                var._penalty[slot] -= delta
            elif tag == Trail._ASSIGN:
                entry[1].assignment = None
            else:
                _, counts, index, delta = entry
                counts[index] -= delta


class PreferenceVariable:
    """Finite-domain start-time variable whose values carry penalties.

    The domain is stored as a liveness bitmap over the slot grid with a
    parallel penalty array, giving ordered iteration and O(1) membership.
    The initial costs passed at construction are kept frozen alongside the
    current penalties, so the share added by constraint propagation is
    always recoverable as ``penalty - initial_cost``.
    """

    __slots__ = ("id", "assignment", "watchers", "_live", "_penalty", "_initial", "_count")

    def __init__(self, var_id: int, pairs: List[Tuple[int, int]]):
        if not pairs:
            raise ValueError(f"variable {var_id}: domain must not be empty")
        grid = max(slot for slot, _ in pairs) + 1
        live = [False] * grid
        penalty = [0] * grid
        for slot, cost in pairs:
            if slot < 0:
                raise ValueError(f"variable {var_id}: negative slot {slot}")
            if cost < 0:
                raise ValueError(f"variable {var_id}: negative penalty for slot {slot}")
            if live[slot]:
                raise ValueError(f"variable {var_id}: duplicate slot {slot}")
            live[slot] = True
            penalty[slot] = cost
        self.id = var_id
        self.assignment: Optional[int] = None
        self.watchers: List[Callable[[Trail], None]] = []
        self._live = live
        self._penalty = penalty
        self._initial = list(penalty)
        self._count = len(pairs)

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return self._count

    def __repr__(self) -> str:
        dom = ", ".join(f"{s}:{p}" for s, p in self.items())
        return f"PreferenceVariable({self.id}, {{{dom}}}, assigned={self.assignment})"

    @property
    def is_assigned(self) -> bool:
        return self.assignment is not None

    def contains(self, slot: int) -> bool:
        return 0 <= slot < len(self._live) and self._live[slot]

    def values(self) -> Iterator[int]:
        """Live slots in ascending order."""
        for slot, alive in enumerate(self._live):
            if alive:
                yield slot

    def items(self) -> Iterator[Tuple[int, int]]:
        """(slot, penalty) pairs for live slots, ascending."""
        for slot, alive in enumerate(self._live):
            if alive:
                yield slot, self._penalty[slot]

    def penalty(self, slot: int) -> int:
        if not self.contains(slot):
            raise KeyError(f"slot {slot} not in domain of variable {self.id}")
        return self._penalty[slot]

    def initial_cost(self, slot: int) -> int:
        return self._initial[slot]

    def violation_share(self, slot: int) -> int:
        """Propagated weight accumulated on a slot, excluding its initial cost."""
        return self._penalty[slot] - self._initial[slot]

    def min_penalty(self) -> Tuple[int, int]:
        """(slot, penalty) with the smallest penalty; ties go to the smallest slot."""
        best_slot = -1
        best = None
        for slot, pen in self.items():
            if best is None or pen < best:
                best_slot, best = slot, pen
        if best is None:
            raise ValueError(f"variable {self.id} has an empty domain")
        return best_slot, best

    # -- trailed mutation --------------------------------------------------

    def remove_value(self, slot: int, trail: Trail) -> None:
        """Drop a live slot; raises :class:`DomainWipeout` if the domain empties."""
        if not self.contains(slot):
            raise ValueError(f"slot {slot} not in domain of variable {self.id}")
        self._live[slot] = False
        self._count -= 1
        trail.push_remove(self, slot)
        if self._count == 0:
            raise DomainWipeout(self.id)

    def add_penalty(self, slot: int, delta: int, trail: Trail) -> None:
        """Increase a live slot's penalty.

        A slot no longer in the domain is silently ignored (the candidate
        was already eliminated, nothing to discourage).  A zero delta is a
        no-op and leaves no trail record.
        """
        if delta < 0:
            raise ValueError("penalty delta must be >= 0")
        if delta == 0 or not self.contains(slot):
            return
        self._penalty[slot] += delta
        trail.push_penalty(self, slot, delta)

    def assign(self, slot: int, trail: Trail) -> None:
        """Bind the variable to one slot and notify suspended constraints.

        All other values are removed (trailed), then every watcher runs in
        registration order before control returns.  Watchers may raise
        :class:`DomainWipeout`; the trail still covers everything done so far.
        """
        if self.assignment is not None:
            raise ValueError(f"variable {self.id} is already assigned")
        if not self.contains(slot):
            raise ValueError(f"slot {slot} not in domain of variable {self.id}")
        for other in list(self.values()):
            if other != slot:
                self._live[other] = False
                self._count -= 1
                trail.push_remove(self, other)
        self.assignment = slot
        trail.push_assign(self)
        for watcher in self.watchers:
            watcher(trail)

    # -- trail internals ---------------------------------------------------

    def _restore_value(self, slot: int) -> None:
        self._live[slot] = True
        self._count += 1


def new_pref_var(pairs: List[Tuple[int, int]], var_id: int = 0) -> PreferenceVariable:
    """Create an unassigned preference variable from (slot, initial cost) pairs."""
    return PreferenceVariable(var_id, pairs)
