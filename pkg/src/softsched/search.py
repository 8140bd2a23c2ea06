"""Anytime branch-and-bound over preference variables.

Depth-first search assigns variables most-constrained-first and values
cheapest-first, propagating soft non-overlap weights and hard occupancy
caps after every assignment.  Every complete assignment that beats the
incumbent is emitted to a progress sink immediately, so the search can be
stopped at any moment — by time limit, node limit, or a cancellation
callback checked at node boundaries — and still hand back the best
solution seen.

Pruning combines the cost already committed (the penalties at assigned
values), the cheapest-value sum over unassigned variables, and optionally
the per-resource excess bound from :mod:`softsched.cumulative`, recomputed
at every search depth that is a multiple of ``lb_period``.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from math import floor
from typing import Callable, Dict, List, Mapping, Optional

from .core import PreferenceVariable, SchedulingError, Trail
from .cumulative import BoundMode, ResourceInfeasible, contribution_with_quota
from .disjunctive import post_network, violation_profile
from .instance import Instance, Resource


class Status(Enum):
    OPTIMAL = "optimal"        # search exhausted; best incumbent is proven optimal
    FEASIBLE = "feasible"      # stopped early; best incumbent not proven optimal
    INFEASIBLE = "infeasible"  # search exhausted without any complete assignment
    UNKNOWN = "unknown"        # stopped early before finding any assignment


@dataclass(frozen=True)
class SearchConfig:
    time_limit: Optional[float] = None      # wall-clock seconds
    node_limit: Optional[int] = None
    violation_limit: Optional[int] = None   # cap on any activity's incident violation
    lb_mode: BoundMode = BoundMode.NONE
    lb_period: int = 1
    constrainedness: str = "count"          # "count" of arcs or their "weight" sum
    seed: int = 0                           # reserved for randomized strategies

    def __post_init__(self):
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node limit must be positive")
        if self.violation_limit is not None and self.violation_limit < 0:
            raise ValueError("violation limit must be >= 0")
        if self.lb_period < 1:
            raise ValueError("lb period must be >= 1")
        if self.constrainedness not in ("count", "weight"):
            raise ValueError("constrainedness must be 'count' or 'weight'")


@dataclass(frozen=True)
class Incumbent:
    assignment: Dict[int, int]
    cost: int
    elapsed: float
    nodes: int


@dataclass(frozen=True)
class SolveResult:
    status: Status
    best: Optional[Incumbent]
    nodes: int
    elapsed: float
    incumbents: int


ProgressSink = Callable[[Incumbent], None]
CancelCheck = Callable[[], bool]


class _Stop(Exception):
    """Internal: a limit or cancellation fired; unwind and report the best."""


class _CapacityOverflow(SchedulingError):
    """Internal: an assignment pushed a resource past cap_max."""


def select_variable(variables: Mapping[int, PreferenceVariable],
                    metric: Mapping[int, int]) -> Optional[PreferenceVariable]:
    """Most constrained uninstantiated variable, or None when all are set.

    ``metric`` holds the static constrainedness score per variable (arc
    count or summed arc weight).  Ties go to the variable whose cheapest
    live value has the smaller penalty, then to the smaller identifier.
    """
    best_var = None
    best_key = None
    for aid in sorted(variables):
        var = variables[aid]
        if var.is_assigned:
            continue
        key = (-metric[aid], var.min_penalty()[1], aid)
        if best_key is None or key < best_key:
            best_key = key
            best_var = var
    return best_var


def order_values(var: PreferenceVariable) -> List[int]:
    """Live slots, cheapest penalty first, ties by earlier slot."""
    return sorted(var.values(), key=lambda slot: (var.penalty(slot), slot))


class _LiveResource:
    """Occupancy counters for one resource, maintained incrementally."""

    __slots__ = ("resource", "occ")

    def __init__(self, resource: Resource):
        self.resource = resource
        self.occ = [0] * (resource.t_max - resource.t_min + 1)

    def indices(self, start: int, duration: int) -> range:
        r = self.resource
        lo = max(start, r.t_min) - r.t_min
        hi = min(start + duration - 1, r.t_max) - r.t_min
        return range(lo, hi + 1)

    def place(self, start: int, duration: int, trail: Trail) -> None:
        cap_max = self.resource.cap_max
        for i in self.indices(start, duration):
            self.occ[i] += 1
            trail.push_occupancy(self.occ, i, 1)
            if self.occ[i] > cap_max[i]:
                raise _CapacityOverflow(
                    f"resource {self.resource.name!r} over capacity "
                    f"at slot {self.resource.t_min + i}")

    def deficit_slot(self) -> Optional[int]:
        cap_min = self.resource.cap_min
        for i, count in enumerate(self.occ):
            if count < cap_min[i]:
                return self.resource.t_min + i
        return None


def _constrainedness(instance: Instance, mode: str) -> Dict[int, int]:
    if mode == "weight":
        return {aid: sum(w for _o, w in arcs)
                for aid, arcs in instance.incident.items()}
    return {aid: len(arcs) for aid, arcs in instance.incident.items()}


def solve(instance: Instance, config: SearchConfig = SearchConfig(),
          sink: Optional[ProgressSink] = None,
          cancel: Optional[CancelCheck] = None) -> SolveResult:
    """Run the branch and bound to exhaustion or to a limit.

    Emits each improving incumbent to ``sink`` as it is found; the emitted
    costs are strictly decreasing.  With identical instance and config the
    node sequence and incumbents are reproducible exactly; only the elapsed
    times vary.
    """
    started = time.monotonic()
    deadline = None if config.time_limit is None else started + config.time_limit

    variables = {a.id: PreferenceVariable(a.id, list(a.domain))
                 for a in instance.activities}
    trail = Trail()
    post_network(instance, variables, limit=config.violation_limit)
    live_resources = [_LiveResource(r) for r in instance.resources]
    holds: Dict[int, List[_LiveResource]] = {aid: [] for aid in variables}
    for live in live_resources:
        for aid in live.resource.members:
            holds[aid].append(live)
    metric = _constrainedness(instance, config.constrainedness)
    durations = {a.id: a.duration for a in instance.activities}

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10 * len(variables) + 1000))

    best: Optional[Incumbent] = None
    nodes = 0
    emitted = 0
    use_lb = config.lb_mode is not BoundMode.NONE

    def lower_bound(depth: int) -> Fraction:
        """Cheapest-completion bound over the unassigned variables.

        Raises :class:`ResourceInfeasible` when some slot can no longer
        reach its required occupancy.
        """
        table = {aid: var.min_penalty()[1]
                 for aid, var in variables.items() if not var.is_assigned}
        bound = Fraction(sum(table.values()))
        if not use_lb or depth % config.lb_period != 0:
            return bound
        for live in live_resources:
            r = live.resource
            declared = r.cap_min if config.lb_mode is BoundMode.MIN else r.cap_exp
            quota = [max(0, declared[i] - live.occ[i]) for i in range(len(declared))]
            if not any(quota):
                continue
            members = [aid for aid in r.members if not variables[aid].is_assigned]
            total, selected = contribution_with_quota(
                r, instance, variables, table, quota, members)
            bound += total
            for aid, share in selected.items():
                table[aid] += floor(share)
        return bound

    def at_boundary() -> None:
        if deadline is not None and time.monotonic() >= deadline:
            raise _Stop
        if config.node_limit is not None and nodes >= config.node_limit:
            raise _Stop
        if cancel is not None and cancel():
            raise _Stop

    def descend(depth: int, cost: int) -> None:
        nonlocal best, nodes, emitted
        if best is not None or use_lb:
            try:
                bound = lower_bound(depth)
            except ResourceInfeasible:
                return
            if best is not None and cost + bound >= best.cost:
                return
        var = select_variable(variables, metric)
        if var is None:
            for live in live_resources:
                if live.deficit_slot() is not None:
                    return
            assignment = {aid: v.assignment for aid, v in variables.items()}
            if config.violation_limit is not None and instance.pairs:
                worst = max(violation_profile(instance, assignment).values())
                if worst > config.violation_limit:
                    return
            best = Incumbent(assignment, cost,
                             time.monotonic() - started, nodes)
            emitted += 1
            if sink is not None:
                sink(best)
            return
        duration = durations[var.id]
        for slot in order_values(var):
            at_boundary()
            nodes += 1
            mark = trail.mark()
            try:
                var.assign(slot, trail)
                for live in holds[var.id]:
                    live.place(slot, duration, trail)
            except SchedulingError:
                trail.undo_to(mark)
                continue
            descend(depth + 1, cost + var.penalty(slot))
            trail.undo_to(mark)

    exhausted = True
    try:
        descend(0, 0)
    except _Stop:
        exhausted = False

    elapsed = time.monotonic() - started
    if best is not None:
        status = Status.OPTIMAL if exhausted else Status.FEASIBLE
    else:
        status = Status.INFEASIBLE if exhausted else Status.UNKNOWN
    return SolveResult(status, best, nodes, elapsed, emitted)


def restart_tightening(instance: Instance, previous: Incumbent,
                       config: SearchConfig) -> Optional[SearchConfig]:
    """Cap the next run's per-activity violation just below the last one.

    Computes the worst incident violation in the previous incumbent and
    returns the config with the violation limit set one below it.  Returns
    None when that worst violation is already zero — nothing can improve.
    """
    if instance.pairs:
        worst = max(violation_profile(instance, previous.assignment).values())
    else:
        worst = 0
    if worst == 0:
        return None
    return replace(config, violation_limit=worst - 1)


def solve_min_worst_violation(
    instance: Instance, config: SearchConfig = SearchConfig(),
    sink: Optional[ProgressSink] = None,
    cancel: Optional[CancelCheck] = None,
) -> SolveResult:
    """Drive repeated solves toward the assignment whose worst-hit activity
    is as lightly violated as possible.

    Each round keeps only assignments strictly better in the worst-case
    sense than the previous incumbent; when a round proves infeasible (or
    the incumbent reaches zero violation) the last incumbent maximizes the
    worst-case satisfaction, and the result is flagged optimal.  Time and
    node budgets span the whole sequence of rounds.
    """
    started = time.monotonic()
    deadline = None if config.time_limit is None else started + config.time_limit
    total_nodes = 0
    total_emitted = 0
    best: Optional[Incumbent] = None
    proven = False
    cfg = config

    while True:
        if deadline is not None:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                break
            cfg = replace(cfg, time_limit=remaining)
        if config.node_limit is not None:
            remaining_nodes = config.node_limit - total_nodes
            if remaining_nodes <= 0:
                break
            cfg = replace(cfg, node_limit=remaining_nodes)
        result = solve(instance, cfg, sink, cancel)
        total_nodes += result.nodes
        total_emitted += result.incumbents
        if result.best is not None:
            best = result.best
            if result.status is not Status.OPTIMAL:
                break  # round was interrupted; the shared budget is spent
            tightened = restart_tightening(instance, best, cfg)
            if tightened is None:
                proven = True
                break
            cfg = tightened
        else:
            if result.status is Status.INFEASIBLE:
                proven = True
            break

    elapsed = time.monotonic() - started
    if best is not None:
        status = Status.OPTIMAL if proven else Status.FEASIBLE
    elif proven:
        status = Status.INFEASIBLE
    else:
        status = Status.UNKNOWN
    return SolveResult(status, best, total_nodes, elapsed, total_emitted)
