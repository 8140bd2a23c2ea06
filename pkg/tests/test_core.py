"""Domain store: liveness, penalties, and exact trail restoration."""

import pytest
import hypothesis.strategies as st
from hypothesis import given, settings

from softsched import DomainWipeout, Trail, new_pref_var


def snapshot(var):
    return (dict(var.items()), var.assignment, len(var))


def test_construction_and_queries():
    v = new_pref_var([(3, 2), (0, 0), (7, 1)], var_id=9)
    assert v.id == 9
    assert len(v) == 3
    assert list(v.values()) == [0, 3, 7]
    assert list(v.items()) == [(0, 0), (3, 2), (7, 1)]
    assert v.contains(3) and not v.contains(4)
    assert not v.contains(-1) and not v.contains(99)
    assert v.penalty(7) == 1
    assert not v.is_assigned


def test_bad_construction():
    with pytest.raises(ValueError):
        new_pref_var([])
    with pytest.raises(ValueError):
        new_pref_var([(0, 0), (0, 3)])
    with pytest.raises(ValueError):
        new_pref_var([(-1, 0)])
    with pytest.raises(ValueError):
        new_pref_var([(2, -5)])


def test_penalty_of_dead_slot_raises():
    v = new_pref_var([(0, 0), (1, 0)])
    trail = Trail()
    v.remove_value(1, trail)
    with pytest.raises(KeyError):
        v.penalty(1)


def test_min_penalty_tie_prefers_smaller_slot():
    v = new_pref_var([(5, 1), (2, 1), (8, 0), (9, 0)])
    assert v.min_penalty() == (8, 0)
    trail = Trail()
    v.remove_value(8, trail)
    v.remove_value(9, trail)
    assert v.min_penalty() == (2, 1)


def test_add_penalty_accumulates_and_tracks_share():
    v = new_pref_var([(0, 2), (1, 0)])
    trail = Trail()
    v.add_penalty(0, 3, trail)
    v.add_penalty(0, 4, trail)
    assert v.penalty(0) == 9
    assert v.initial_cost(0) == 2
    assert v.violation_share(0) == 7
    assert v.violation_share(1) == 0


def test_add_penalty_edge_cases():
    v = new_pref_var([(0, 0), (1, 0)])
    trail = Trail()
    with pytest.raises(ValueError):
        v.add_penalty(0, -1, trail)
    # zero delta and dead-slot deltas leave no trail record
    v.add_penalty(0, 0, trail)
    assert len(trail) == 0
    v.remove_value(1, trail)
    before = len(trail)
    v.add_penalty(1, 5, trail)
    assert len(trail) == before
    assert v.violation_share(1) == 0


def test_remove_to_wipeout():
    v = new_pref_var([(0, 0), (1, 0)], var_id=4)
    trail = Trail()
    v.remove_value(0, trail)
    with pytest.raises(DomainWipeout) as exc:
        v.remove_value(1, trail)
    assert exc.value.var_id == 4
    # the wiping removal is still on the trail
    trail.undo_to(0)
    assert list(v.values()) == [0, 1]


def test_assign_removes_rest_and_fires_watchers_in_order():
    v = new_pref_var([(0, 1), (1, 0), (2, 3)])
    calls = []
    v.watchers.append(lambda tr: calls.append("a"))
    v.watchers.append(lambda tr: calls.append("b"))
    trail = Trail()
    v.assign(1, trail)
    assert v.assignment == 1
    assert list(v.values()) == [1]
    assert calls == ["a", "b"]
    with pytest.raises(ValueError):
        v.assign(1, trail)


def test_assign_to_dead_slot_rejected():
    v = new_pref_var([(0, 0), (1, 0)])
    trail = Trail()
    v.remove_value(0, trail)
    with pytest.raises(ValueError):
        v.assign(0, trail)


def test_undo_restores_assignment_and_penalties():
    v = new_pref_var([(0, 1), (1, 0), (2, 3)])
    trail = Trail()
    mark = trail.mark()
    v.add_penalty(2, 6, trail)
    v.assign(2, trail)
    assert v.assignment == 2 and len(v) == 1
    trail.undo_to(mark)
    assert snapshot(v) == ({0: 1, 1: 0, 2: 3}, None, 3)


def test_nested_marks_unwind_independently():
    v = new_pref_var([(0, 0), (1, 0), (2, 0)])
    trail = Trail()
    outer = trail.mark()
    v.remove_value(0, trail)
    inner = trail.mark()
    v.add_penalty(1, 2, trail)
    v.remove_value(2, trail)
    trail.undo_to(inner)
    assert list(v.items()) == [(1, 0), (2, 0)]
    trail.undo_to(outer)
    assert list(v.items()) == [(0, 0), (1, 0), (2, 0)]


def test_occupancy_records_roll_back():
    counts = [0, 0, 0]
    trail = Trail()
    mark = trail.mark()
    for i in (0, 1, 1):
        counts[i] += 1
        trail.push_occupancy(counts, i, 1)
    assert counts == [1, 2, 0]
    trail.undo_to(mark)
    assert counts == [0, 0, 0]


@st.composite
def op_sequences(draw):
    size = draw(st.integers(min_value=1, max_value=6))
    pairs = [(s, draw(st.integers(min_value=0, max_value=4))) for s in range(size)]
    ops = draw(st.lists(st.tuples(st.sampled_from(["remove", "penalty", "assign"]),
                                  st.integers(min_value=0, max_value=size - 1),
                                  st.integers(min_value=0, max_value=3)),
                        min_size=0, max_size=10))
    return pairs, ops


@given(op_sequences())
@settings(max_examples=50)
def test_trail_round_trip(data):
    """Any mutation sequence is undone exactly, including mid-sequence marks."""
    pairs, ops = data
    v = new_pref_var(pairs)
    trail = Trail()
    base = snapshot(v)
    mark = trail.mark()
    mid = None
    mid_state = None
    for k, (kind, slot, delta) in enumerate(ops):
        if mid is None and k == len(ops) // 2:
            mid = trail.mark()
            mid_state = snapshot(v)
        try:
            if kind == "remove":
                v.remove_value(slot, trail)
            elif kind == "penalty":
                v.add_penalty(slot, delta, trail)
            elif v.assignment is None and v.contains(slot):
                v.assign(slot, trail)
        except (ValueError, DomainWipeout):
            pass
    if mid is not None:
        trail.undo_to(mid)
        assert snapshot(v) == mid_state
    trail.undo_to(mark)
    assert snapshot(v) == base
    assert len(trail) == 0
