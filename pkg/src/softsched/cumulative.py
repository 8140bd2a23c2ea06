"""Discrete-capacity resources: hard occupancy checks and penalty lower bounds.

A resource is a pool (think classrooms) over an inclusive slot window with
per-slot minimal, maximal and expected occupancy by its member activities.
The hard side is plain counting: occupancy may never exceed ``cap_max`` and,
once every member is placed, must reach ``cap_min``.

The soft side turns the same windows into a lower bound on penalty.  If at
least ``c`` members must execute at slot t, each of them pays at least its
cheapest start covering t; summing the ``c`` smallest such excesses (scaled
by 1/duration, since an activity spans several slots) over all slots yields
a bound no feasible completion can beat.  MIN mode uses ``cap_min`` as the
per-slot count; EXP mode uses ``cap_exp`` and is the stronger bound — but it
is only valid when ``cap_exp`` genuinely understates the occupancy of every
feasible schedule, which is the caller's modelling obligation.

Selected excesses feed back into the per-activity minimal-weight table so
that several resources sharing activities do not double-count the same
penalty.
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .core import PreferenceVariable, SchedulingError
from .instance import Activity, Instance, Resource


class BoundMode(Enum):
    NONE = "none"
    MIN = "min"
    EXP = "exp"


class ResourceInfeasible(SchedulingError):
    """A slot demands more runnable members than currently exist."""

    def __init__(self, resource: str, slot: int, needed: int, runnable: int):
        super().__init__(
            f"resource {resource!r} needs {needed} activities at slot {slot}, "
            f"only {runnable} can run there")
        self.resource = resource
        self.slot = slot
        self.needed = needed
        self.runnable = runnable


class _NotRunnable:
    __slots__ = ()

    def __repr__(self):
        return "NOT_RUNNABLE"


#: Sentinel returned by :func:`slot_excess` when no live start covers the slot.
NOT_RUNNABLE = _NotRunnable()


# ---------------------------------------------------------------------------
# hard checks (pure counting over an assignment mapping)


def _occupancy(resource: Resource, instance: Instance,
               assignment: Mapping[int, int], complete: bool) -> List[int]:
    width = resource.t_max - resource.t_min + 1
    occ = [0] * width
    for aid in resource.members:
        if not complete and aid not in assignment:
            continue
        start = assignment[aid]
        dur = instance.activity(aid).duration
        lo = max(start, resource.t_min)
        hi = min(start + dur - 1, resource.t_max)
        for t in range(lo, hi + 1):
            occ[t - resource.t_min] += 1
    return occ


def check_cumulative_max(resource: Resource, instance: Instance,
                         assignment: Mapping[int, int]) -> Optional[int]:
    """First slot where assigned members exceed cap_max, or None if within caps.

    Partial assignments are fine; unassigned members simply do not count.
    A member id repeated in ``resource.members`` occupies one unit per copy.
    """
    occ = _occupancy(resource, instance, assignment, complete=False)
    for idx, count in enumerate(occ):
        if count > resource.cap_max[idx]:
            return resource.t_min + idx
    return None


def check_atleast(resource: Resource, instance: Instance,
                  assignment: Mapping[int, int]) -> Optional[int]:
    """First slot whose occupancy falls short of cap_min, or None.

    The assignment must cover every member (KeyError otherwise).
    """
    occ = _occupancy(resource, instance, assignment, complete=True)
    for idx, count in enumerate(occ):
        if count < resource.cap_min[idx]:
            return resource.t_min + idx
    return None


def unit_capacity_expand(activity: Activity, required_capacity: int) -> List[Activity]:
    """Views of one activity for a demand of several capacity units.

    Occupancy counting treats each entry of a member list independently, so
    listing the returned views (all sharing the activity's start and
    duration) makes the activity consume ``required_capacity`` units per
    executed slot.  The JSON instance format itself is unit-demand; this
    helper is for models built in process.
    """
    if required_capacity < 1:
        raise ValueError("required capacity must be >= 1")
    return [activity] * required_capacity


# ---------------------------------------------------------------------------
# lower bound


def base_lower_bound(table: Mapping[int, int], scope: Iterable[int]) -> int:
    """Sum of the minimal expected weights over the scope activities."""
    return sum(table[aid] for aid in scope)


def slot_excess(t: int, window_start: int, var: PreferenceVariable,
                duration: int, floor: int):
    """Extra penalty the activity must pay, beyond ``floor``, to execute at t.

    Considers the live starts s with max(window_start, t-duration+1) <= s <= t
    — exactly those putting the activity in execution at t, clamped at the
    window start.  Returns :data:`NOT_RUNNABLE` when no such start is live,
    otherwise max(0, cheapest covering penalty - floor).
    """
    lo = max(window_start, t - duration + 1)
    best = None
    for s in range(lo, t + 1):
        if var.contains(s):
            p = var.penalty(s)
            if best is None or p < best:
                best = p
    if best is None:
        return NOT_RUNNABLE
    return best - floor if best > floor else 0


def contribution_with_quota(
    resource: Resource,
    instance: Instance,
    variables: Mapping[int, PreferenceVariable],
    table: Mapping[int, int],
    quota: Sequence[int],
    members: Optional[Iterable[int]] = None,
) -> Tuple[Fraction, Dict[int, Fraction]]:
    """Per-slot smallest-excess selection over an explicit quota.

    ``quota`` gives, per window slot, how many members must execute there.
    For every slot with positive quota the runnable members' excess/duration
    ratios are sorted ascending (ties by activity id) and the first
    ``quota[t]`` are summed.  Returns the exact rational total plus each
    activity's selected share.  Raises :class:`ResourceInfeasible` when a
    slot has fewer runnable members than its quota.
    """
    if members is None:
        members = resource.members
    info = [(aid, variables[aid], instance.activity(aid).duration)
            for aid in members]
    total = Fraction(0)
    selected: Dict[int, Fraction] = {}
    for offset, need in enumerate(quota):
        if need <= 0:
            continue
        t = resource.t_min + offset
        ratios = []
        for aid, var, dur in info:
            excess = slot_excess(t, resource.t_min, var, dur, table[aid])
            if excess is not NOT_RUNNABLE:
                ratios.append((Fraction(excess, dur), aid))
        if len(ratios) < need:
            raise ResourceInfeasible(resource.name, t, need, len(ratios))
        ratios.sort()
        for ratio, aid in ratios[:need]:
            if ratio:
                total += ratio
                selected[aid] = selected.get(aid, Fraction(0)) + ratio
    return total, selected


def _quota(resource: Resource, mode: BoundMode) -> Sequence[int]:
    if mode is BoundMode.MIN:
        return resource.cap_min
    if mode is BoundMode.EXP:
        return resource.cap_exp
    raise ValueError(f"no quota for bound mode {mode}")


def resource_contribution(
    resource: Resource,
    instance: Instance,
    variables: Mapping[int, PreferenceVariable],
    table: Mapping[int, int],
    mode: BoundMode,
) -> Fraction:
    """The resource's whole-window lower-bound contribution in the given mode."""
    total, _ = contribution_with_quota(
        resource, instance, variables, table, _quota(resource, mode))
    return total


def update_min_weights(
    resource: Resource,
    instance: Instance,
    variables: Mapping[int, PreferenceVariable],
    table: Dict[int, int],
    mode: BoundMode,
) -> Dict[int, int]:
    """Fold a resource's selected shares back into the minimal-weight table.

    Each selected activity's share is rounded down so the table stays
    integral; the mutated table is returned and must be handed to the next
    resource so shared activities are not double-counted.
    """
    _, selected = contribution_with_quota(
        resource, instance, variables, table, _quota(resource, mode))
    for aid, share in selected.items():
        table[aid] += math.floor(share)
    return table


def combined_lower_bound(
    instance: Instance,
    variables: Mapping[int, PreferenceVariable],
    mode: BoundMode,
) -> Fraction:
    """Minimal penalties of all activities plus sequential resource contributions.

    Resources are processed in declaration order, sharing one minimal-weight
    table initialized from each variable's current cheapest value.
    """
    table = {a.id: variables[a.id].min_penalty()[1] for a in instance.activities}
    bound = Fraction(base_lower_bound(table, table))
    if mode is BoundMode.NONE:
        return bound
    for resource in instance.resources:
        total, selected = contribution_with_quota(
            resource, instance, variables, table, _quota(resource, mode))
        bound += total
        for aid, share in selected.items():
            table[aid] += math.floor(share)
    return bound
