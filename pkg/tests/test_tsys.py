"""Transition-system container: admission rules, adjacency, serialization."""

import numpy as np
import pytest

from ltlplan.workspace import RadiusSchedule
from ltlplan.tsys import TransitionSystem


def _loose_schedule():
    # scale tiny enough that the sparsity floor never bites in these tests
    return RadiusSchedule(dimension=2, scale=1e-9, ratio=2.0)


def _tsys():
    return TransitionSystem([0.0, 0.0], frozenset({"home"}), _loose_schedule())


def test_root_state():
    tsys = _tsys()
    assert len(tsys) == 1
    assert tsys.initial == 0
    assert tsys.dimension == 2
    assert np.allclose(tsys.point(0), [0.0, 0.0])
    assert tsys.label(0) == frozenset({"home"})
    assert tsys.admitted_at(0) == 1  # the root counts as a system of one
    assert tsys.num_transitions == 0


def test_root_validation():
    with pytest.raises(ValueError):
        TransitionSystem([[0.0, 0.0]], frozenset(), _loose_schedule())
    with pytest.raises(ValueError):
        TransitionSystem([0.0, 0.0, 0.0], frozenset(), _loose_schedule())


def test_add_state_assigns_sequential_ids():
    tsys = _tsys()
    assert tsys.add_state([0.5, 0.0], frozenset()) == 1
    assert tsys.add_state([0.5, 0.5], frozenset({"a"})) == 2
    assert len(tsys) == 3
    assert tsys.label(2) == frozenset({"a"})
    assert tsys.admitted_at(1) == 1
    assert tsys.admitted_at(2) == 2


def test_add_state_rejects_bad_points():
    tsys = _tsys()
    with pytest.raises(ValueError, match="dimension"):
        tsys.add_state([0.5], frozenset())
    with pytest.raises(ValueError, match="duplicate"):
        tsys.add_state([0.0, 0.0], frozenset())


def test_add_state_enforces_sparsity_floor():
    schedule = RadiusSchedule(dimension=2, scale=0.4, ratio=2.0)
    tsys = TransitionSystem([0.0, 0.0], frozenset(), schedule)
    floor = schedule.inner(1)  # 0.4
    with pytest.raises(ValueError, match="sparsity"):
        tsys.add_state([floor * 0.99, 0.0], frozenset())
    tsys.add_state([floor * 1.01, 0.0], frozenset())
    assert len(tsys) == 2
    # the floor shrinks as the system grows
    assert schedule.inner(2) < floor


def test_transitions_and_adjacency_order():
    tsys = _tsys()
    tsys.add_state([0.5, 0.0], frozenset())
    tsys.add_state([0.0, 0.5], frozenset())
    assert tsys.add_transition(0, 2)
    assert tsys.add_transition(0, 1)
    assert tsys.add_transition(1, 2)
    assert not tsys.add_transition(0, 2)  # duplicate is a quiet no-op
    assert tsys.num_transitions == 3
    assert tsys.successors(0) == (2, 1)  # insertion order preserved
    assert tsys.successors(2) == ()
    assert tsys.has_transition(0, 1)
    assert not tsys.has_transition(1, 0)
    assert tsys.transitions() == [(0, 2), (0, 1), (1, 2)]


def test_transition_validation():
    tsys = _tsys()
    tsys.add_state([0.5, 0.0], frozenset())
    with pytest.raises(ValueError, match="self-loop"):
        tsys.add_transition(1, 1)
    with pytest.raises(KeyError):
        tsys.add_transition(0, 7)
    with pytest.raises(KeyError):
        tsys.point(9)


def test_distance_queries():
    tsys = _tsys()
    tsys.add_state([3.0, 4.0], frozenset())
    distances = tsys.distances_to([0.0, 0.0])
    assert np.allclose(distances, [0.0, 5.0])
    assert tsys.min_pairwise_distance() == 5.0
    tsys.add_state([3.0, 4.5], frozenset())
    assert tsys.min_pairwise_distance() == 0.5


def test_min_pairwise_distance_single_state():
    assert _tsys().min_pairwise_distance() == float("inf")


def test_coords_view_reflects_growth():
    tsys = _tsys()
    for i in range(1, 40):
        tsys.add_state([float(i), 0.0], frozenset())
    view = tsys.coords()
    assert view.shape == (40, 2)
    assert np.allclose(view[:, 0], np.arange(40.0))


def test_to_json_schema():
    tsys = _tsys()
    tsys.add_state([0.25, 0.75], frozenset({"b", "a"}))
    tsys.add_transition(0, 1)
    blob = tsys.to_json()
    assert blob == {
        "states": [
            {"id": 0, "coords": [0.0, 0.0], "labels": ["home"]},
            {"id": 1, "coords": [0.25, 0.75], "labels": ["a", "b"]},
        ],
        "transitions": [[0, 1]],
        "initial": 0,
    }
