"""Soft non-overlap constraints and assignment-quality evaluators.

A soft disjunctive constraint records, for a pair of activities, a weighted
preference that their execution intervals not intersect.  The constraint is
event-driven: it stays suspended on a start variable and fires exactly when
that variable is instantiated, pushing the arc weight onto every live value
of each not-yet-instantiated neighbor that would overlap the chosen
interval.  Charging violations only toward uninstantiated neighbors counts
every violated pair exactly once — on the endpoint instantiated later — so
the penalties sitting at the assigned values of a complete assignment sum to
the initial costs plus the total weighted violation, regardless of
instantiation order.

The evaluators at the bottom are pure functions over (instance, complete
assignment) and back both solver bookkeeping and reporting.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .core import PreferenceVariable, Trail
from .instance import Instance


def overlaps(s1: int, d1: int, s2: int, d2: int) -> bool:
    """True iff the half-open intervals [s1, s1+d1) and [s2, s2+d2) intersect."""
    return s1 < s2 + d2 and s2 < s1 + d1


class SoftDisjunctive:
    """Weighted non-overlap preference suspended on one start variable.

    ``arcs`` holds (neighbor variable, neighbor duration, weight) triples.
    With a violation limit set, any neighbor value whose accumulated
    violation share (initial cost excluded) exceeds the limit is removed
    immediately after the increment that pushed it over.
    """

    __slots__ = ("var", "duration", "arcs", "limit")

    def __init__(self, var: PreferenceVariable, duration: int,
                 arcs: List[Tuple[PreferenceVariable, int, int]],
                 limit: Optional[int]):
        self.var = var
        self.duration = duration
        self.arcs = arcs
        self.limit = limit

    def propagate(self, trail: Trail) -> None:
        """Charge this activity's chosen interval to overlapping neighbor values."""
        start = self.var.assignment
        d = self.duration
        limit = self.limit
        for other, d_other, weight in self.arcs:
            if other.is_assigned:
                continue  # pair already charged when the neighbor fired
            for slot in list(other.values()):
                if overlaps(start, d, slot, d_other):
                    other.add_penalty(slot, weight, trail)
                    if limit is not None and other.violation_share(slot) > limit:
                        other.remove_value(slot, trail)


def post_soft_disjunctive(
    var: PreferenceVariable,
    duration: int,
    neighbors: Sequence[Tuple[PreferenceVariable, int, int]],
    limit: Optional[int] = None,
) -> SoftDisjunctive:
    """Suspend a soft non-overlap constraint on ``var`` and return the handle.

    ``neighbors`` lists (variable, duration, weight) arcs.  An empty arc
    list is allowed; the handle is then inert.  Every unordered pair must be
    posted at both endpoints so that either instantiation order propagates.
    """
    seen = set()
    for other, _d, weight in neighbors:
        if other is var:
            raise ValueError(f"variable {var.id} listed as its own neighbor")
        if other.id in seen:
            raise ValueError(f"duplicate neighbor {other.id} on variable {var.id}")
        if weight < 1:
            raise ValueError("arc weights must be >= 1")
        seen.add(other.id)
    constraint = SoftDisjunctive(var, duration, list(neighbors), limit)
    var.watchers.append(constraint.propagate)
    return constraint


def post_network(
    instance: Instance,
    variables: Mapping[int, PreferenceVariable],
    limit: Optional[int] = None,
) -> Dict[int, SoftDisjunctive]:
    """Post one constraint per activity carrying all its soft arcs.

    Registers both directions of every pair, keyed by activity id.
    Activities without soft arcs get no handle.
    """
    handles: Dict[int, SoftDisjunctive] = {}
    for act in instance.activities:
        arcs = [(variables[other], instance.activity(other).duration, weight)
                for other, weight in instance.incident[act.id]]
        if arcs:
            handles[act.id] = post_soft_disjunctive(
                variables[act.id], act.duration, arcs, limit)
    return handles


# ---------------------------------------------------------------------------
# evaluators over complete assignments


def weighted_violation(instance: Instance, assignment: Mapping[int, int]) -> int:
    """Total weight of overlapping soft pairs; each unordered pair counts once."""
    total = 0
    by_id = instance.by_id
    for p in instance.pairs:
        if overlaps(assignment[p.a], by_id[p.a].duration,
                    assignment[p.b], by_id[p.b].duration):
            total += p.weight
    return total


def activity_violation(instance: Instance, assignment: Mapping[int, int],
                       aid: int) -> int:
    """Weighted violations incident to one activity."""
    act = instance.activity(aid)
    start = assignment[aid]
    total = 0
    for other, weight in instance.incident[aid]:
        o = instance.activity(other)
        if overlaps(start, act.duration, assignment[other], o.duration):
            total += weight
    return total


def violation_profile(instance: Instance,
                      assignment: Mapping[int, int]) -> Dict[int, int]:
    """Incident violation for every activity, in one pass over the pairs."""
    u: Dict[int, int] = {a.id: 0 for a in instance.activities}
    by_id = instance.by_id
    for p in instance.pairs:
        if overlaps(assignment[p.a], by_id[p.a].duration,
                    assignment[p.b], by_id[p.b].duration):
            u[p.a] += p.weight
            u[p.b] += p.weight
    return u


def worst_case_satisfaction(instance: Instance,
                            assignment: Mapping[int, int]) -> Fraction:
    """Worst per-activity normalized preference, an exact rational in [0, 1].

    Each activity's incident violation u is normalized against m*(n-1),
    where n is the activity count and m the total requirement weight over
    all pairs (a pair of weight w stands for w individual requirements).
    Returns min over activities of 1 - u/(m*(n-1)); maximizing it favors
    assignments whose most-violated activity is as satisfied as possible.
    """
    n = len(instance.activities)
    m = instance.total_weight
    if n < 2 or m == 0:
        raise ValueError(
            "worst-case satisfaction needs >= 2 activities and >= 1 weighted pair")
    worst_u = max(violation_profile(instance, assignment).values())
    return 1 - Fraction(worst_u, m * (n - 1))


def violation_ratio(instance: Instance, assignment: Mapping[int, int],
                    aid: int) -> Fraction:
    """Incident violation relative to the activity's enrollment count."""
    act = instance.activity(aid)
    if act.enrollment == 0:
        raise ValueError(f"activity {aid} has no enrollment; ratio undefined")
    return Fraction(activity_violation(instance, assignment, aid), act.enrollment)
