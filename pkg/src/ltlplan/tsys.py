"""Geometric transition system: labeled states at workspace points, directed
transitions along admitted segments. States keep a minimum separation that
shrinks as the system grows (enforced on admission)."""

from __future__ import annotations

from typing import FrozenSet, List, Sequence, Set, Tuple

import numpy as np

from .workspace import RadiusSchedule


class TransitionSystem:
    def __init__(self, root, root_labels, schedule: RadiusSchedule):
        root = np.asarray(root, dtype=float)
        if root.ndim != 1:
            raise ValueError("root point must be a vector")
        if root.shape[0] != schedule.dimension:
            raise ValueError("root point dimension does not match the schedule")
        self.schedule = schedule
        self._coords = np.empty((16, root.shape[0]), dtype=float)
        self._coords[0] = root
        self._size = 1
        self._labels: List[FrozenSet[str]] = [frozenset(root_labels)]
        self._adjacency: List[List[int]] = [[]]
        self._edges: Set[Tuple[int, int]] = set()
        # size of the system at the moment each state was admitted; the root
        # counts as admitted into a system of one
        self._admitted_at: List[int] = [1]
        self.initial = 0

    def __len__(self) -> int:
        return self._size

    @property
    def dimension(self) -> int:
        return self._coords.shape[1]

    @property
    def num_transitions(self) -> int:
        return len(self._edges)

    def _check_id(self, state: int) -> None:
        if not (0 <= state < self._size):
            raise KeyError(f"unknown state id {state}")

    def point(self, state: int) -> np.ndarray:
        self._check_id(state)
        return self._coords[state].copy()

    def label(self, state: int) -> FrozenSet[str]:
        self._check_id(state)
        return self._labels[state]

    def coords(self) -> np.ndarray:
        """Read-only view of all state coordinates, one row per state."""
        view = self._coords[: self._size]
        view.flags.writeable = False
        return view

    def distances_to(self, point) -> np.ndarray:
        x = np.asarray(point, dtype=float)
        return np.linalg.norm(self._coords[: self._size] - x, axis=1)

    def admitted_at(self, state: int) -> int:
        self._check_id(state)
        return self._admitted_at[state]

    def add_state(self, point, labels) -> int:
        """Admit a state; rejects coordinates closer than inner(len(self))
        to any existing state (duplicates are distance zero)."""
        x = np.asarray(point, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError("state point has wrong dimension")
        count = self._size
        distances = self.distances_to(x)
        nearest = float(distances.min())
        if nearest == 0.0:
            raise ValueError("duplicate state coordinates")
        floor = self.schedule.inner(count)
        if nearest < floor:
            raise ValueError(
                f"sparsity violation: nearest state at {nearest:.6g} < {floor:.6g}"
            )
        if count == self._coords.shape[0]:
            grown = np.empty((2 * count, self.dimension), dtype=float)
            grown[:count] = self._coords
            self._coords = grown
        self._coords[count] = x
        self._size += 1
        self._labels.append(frozenset(labels))
        self._adjacency.append([])
        self._admitted_at.append(count)
        return count

    def add_transition(self, source: int, target: int) -> bool:
        """Record a directed transition; returns False when already present."""
        self._check_id(source)
        self._check_id(target)
        if source == target:
            raise ValueError("self-loop transitions are not allowed")
        if (source, target) in self._edges:
            return False
        self._edges.add((source, target))
        self._adjacency[source].append(target)
        return True

    def has_transition(self, source: int, target: int) -> bool:
        return (source, target) in self._edges

    def successors(self, state: int) -> Tuple[int, ...]:
        self._check_id(state)
        return tuple(self._adjacency[state])

    def transitions(self) -> List[Tuple[int, int]]:
        """All transitions in deterministic (source, insertion) order."""
        out = []
        for src in range(self._size):
            out.extend((src, dst) for dst in self._adjacency[src])
        return out

    def min_pairwise_distance(self) -> float:
        if self._size < 2:
            return float("inf")
        pts = self._coords[: self._size]
        best = float("inf")
        for i in range(self._size - 1):
            gaps = np.linalg.norm(pts[i + 1 :] - pts[i], axis=1)
            best = min(best, float(gaps.min()))
        return best

    def to_json(self) -> dict:
        states = [
            {
                "id": i,
                "coords": [float(c) for c in self._coords[i]],
                "labels": sorted(self._labels[i]),
            }
            for i in range(self._size)
        ]
        return {
            "states": states,
            "transitions": [[s, t] for s, t in self.transitions()],
            "initial": self.initial,
        }
