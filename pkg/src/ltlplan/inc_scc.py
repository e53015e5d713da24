"""Incremental strongly connected components under edge insertion.

Maintains a partition of the vertices into components plus a weak
topological level for each component: every arc goes from a component to
one of equal or higher level. Inserting an arc that lands strictly upward
is constant work. An arc that ties or inverts the order triggers a
bounded repair round:

* a backward search from the tail's component over registered same-level
  in-arcs, cut off after a budget of about sqrt(m) arc scans. Meeting the
  head's component certifies a cycle, and the discovery chain back to the
  tail is itself a set of components lying on that cycle, so the chain is
  contracted on the spot. Completing the search without meeting the head
  proves the head may sit at the tail's level.
* if the search was cut off, the head instead moves one level above the
  tail, which is what keeps later searches shallow. A forward pass then
  raises every component reachable below its new level. Scanning an arc
  into the backward-visited set again certifies a cycle (tail and head of
  that arc both lie on a loop through the new edge), and the pair is
  contracted once the pass quiesces.

After a contraction the repair repeats from the merged component, now
searching for a cycle through the component itself, until a complete
search comes back empty. Each extra round contracts at least two
components into one, so over the life of the index the rounds beyond the
first are paid for by the at most n-1 contractions that can ever happen,
and no step of the repair scans more than the budget plus the arcs whose
level actually rose.

Adjacency is kept per component; stale and duplicate entries are dropped
lazily whenever a list is scanned, and contraction concatenates smaller
lists into the largest. `steps` counts elementary work (arc entries
scanned plus level writes) so callers can measure the sub-m^(3/2) growth
empirically.
"""

from __future__ import annotations

import math
import random
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple


class SccIndex:
    def __init__(self):
        self._parent: Dict = {}
        self._members: Dict = {}
        self._level: Dict = {}
        self._out: Dict = {}  # root -> [head vertex, ...]
        self._in_same: Dict = {}  # root -> tails believed to sit on this level
        self._edges: Set = set()
        self._loops: Set = set()
        self.steps = 0

    def __len__(self) -> int:
        return len(self._parent)

    def __contains__(self, vertex) -> bool:
        return vertex in self._parent

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def insert_vertex(self, vertex) -> None:
        if vertex in self._parent:
            raise ValueError(f"vertex {vertex!r} already present")
        self._parent[vertex] = vertex
        self._members[vertex] = {vertex}
        self._level[vertex] = 1
        self._out[vertex] = []
        self._in_same[vertex] = []

    def _find(self, vertex):
        root = vertex
        parent = self._parent
        while parent[root] != root:
            root = parent[root]
        while parent[vertex] != root:
            parent[vertex], vertex = root, parent[vertex]
        return root

    def component_id(self, vertex):
        """Canonical id of the vertex's component: its smallest member."""
        if vertex not in self._parent:
            raise KeyError(f"unknown vertex {vertex!r}")
        return self._find(vertex)

    def members(self, vertex) -> FrozenSet:
        return frozenset(self._members[self.component_id(vertex)])

    def scc_size(self, vertex) -> int:
        return len(self._members[self.component_id(vertex)])

    def has_self_loop(self, vertex) -> bool:
        if vertex not in self._parent:
            raise KeyError(f"unknown vertex {vertex!r}")
        return vertex in self._loops

    def has_cycle(self, vertex) -> bool:
        """True when the vertex lies on any cycle (component of size > 1, or
        a self-loop directly at the vertex)."""
        return self.scc_size(vertex) > 1 or vertex in self._loops

    def components(self) -> List[FrozenSet]:
        return [frozenset(group) for group in self._members.values()]

    def insert_edge(self, source, target) -> Optional[FrozenSet]:
        """Insert a directed edge.

        Returns the member vertices of the enlarged component when the
        edge merged components, or None when no merge happened. Duplicate
        edges are ignored.
        """
        for vertex in (source, target):
            if vertex not in self._parent:
                raise KeyError(f"unknown vertex {vertex!r}")
        if (source, target) in self._edges:
            return None
        self._edges.add((source, target))
        if source == target:
            self._loops.add(source)
            return None
        src_root = self._find(source)
        dst_root = self._find(target)
        if src_root == dst_root:
            return None
        self._out[src_root].append(target)
        if self._level[src_root] == self._level[dst_root]:
            self._in_same[dst_root].append(source)
        if self._level[src_root] < self._level[dst_root]:
            return None  # levels already witness that no cycle closed
        return self._repair(source, target)

    def _repair(self, source, target) -> Optional[FrozenSet]:
        """Restore level monotonicity for the arc (source, target) and
        contract every component a new cycle runs through.

        Loops because a contraction can expose a further cycle through the
        merged component; each pass either contracts again or ends the
        insert, so the looping is paid for by the merges it performs.
        """
        merged = False
        while True:
            src_root = self._find(source)
            dst_root = self._find(target)
            if src_root == dst_root:
                start = goal = src_root
            elif self._level[src_root] < self._level[dst_root]:
                break
            else:
                start, goal = src_root, dst_root
            budget = math.isqrt(len(self._edges)) + 1
            chain, complete, seen_back = self._search(start, goal, budget)
            if chain is not None:
                self._contract(set(chain))
                merged = True
                continue
            if start == goal:
                if complete:
                    break
                self._raise_to(start, self._level[start] + 1, None)
                evidence = self._propagate([start], seen_back)
            else:
                src_level = self._level[src_root]
                if complete and self._level[dst_root] == src_level:
                    break
                wanted = src_level if complete else src_level + 1
                self._raise_to(dst_root, wanted, source)
                evidence = self._propagate([dst_root], seen_back)
            if evidence is None:
                break
            self._contract({evidence[0], evidence[1]})
            merged = True
        if merged:
            return frozenset(self._members[self._find(source)])
        return None

    def _search(self, start, goal, budget: int) -> tuple:
        """Walk the same-level ancestors of `start` looking for an arc out
        of `goal`, spending at most `budget` entry scans.

        Returns (chain, complete, seen). `chain` is a list of component
        roots on a goal-to-start path (a certified cycle once the arc from
        start to goal is counted) or None; `complete` reports whether the
        walk exhausted the ancestors before hitting the budget. Scanned
        lists are compacted: entries whose tail left the level, moved
        inside the component, or repeat an earlier entry are dropped (a
        tail rising back to the level re-registers itself during the raise
        pass).
        """
        level = self._level[start]
        seen = {start}
        dparent: Dict = {}
        stack = [start]
        spent = 0
        while stack:
            root = stack.pop()
            kept = []
            dedup = set()
            entries = self._in_same[root]
            for position, vertex in enumerate(entries):
                if spent >= budget:
                    kept.extend(entries[position:])
                    self._in_same[root] = kept
                    return None, False, seen
                spent += 1
                self.steps += 1
                other = self._find(vertex)
                if other == root or other in dedup:
                    continue
                if self._level[other] != level:
                    continue
                if other == goal:
                    # Arc goal -> root, and root already reaches start.
                    kept.append(vertex)
                    kept.extend(entries[position + 1 :])
                    self._in_same[root] = kept
                    chain = [goal, root]
                    node = root
                    while node != start:
                        node = dparent[node]
                        chain.append(node)
                    return chain, True, seen
                dedup.add(other)
                kept.append(vertex)
                if other not in seen:
                    seen.add(other)
                    dparent[other] = root
                    stack.append(other)
            self._in_same[root] = kept
        return None, True, seen

    def _raise_to(self, root, level: int, cause_vertex) -> None:
        self._level[root] = level
        self.steps += 1
        # Entries from below the new level are stale; the only candidate
        # same-level arc is the one that caused the raise, when there is one.
        if cause_vertex is not None and self._level[self._find(cause_vertex)] == level:
            self._in_same[root] = [cause_vertex]
        else:
            self._in_same[root] = []

    def _propagate(self, queue: List, seen_back: Set) -> Optional[Tuple]:
        """Push levels forward until every arc is level-respecting again.

        Returns the first scanned arc (as a root pair) that re-entered the
        backward-visited set, the witness that the inserted arc closed a
        cycle, or None when no such arc turned up.
        """
        evidence = None
        while queue:
            root = queue.pop()
            level = self._level[root]
            kept = []
            dedup = set()
            for vertex in self._out[root]:
                self.steps += 1
                other = self._find(vertex)
                if other == root or other in dedup:
                    continue
                dedup.add(other)
                kept.append(vertex)
                if other in seen_back and evidence is None:
                    evidence = (root, other)
                other_level = self._level[other]
                if other_level < level:
                    self._raise_to(other, level, root)
                    queue.append(other)
                elif other_level == level:
                    self._in_same[other].append(root)
            self._out[root] = kept
        return evidence

    def _contract(self, roots: Set):
        new_root = min(roots)
        ordered = sorted(roots)  # deterministic tie-breaks below
        top = max(self._level[r] for r in ordered)
        base = max(ordered, key=lambda r: len(self._members[r]))
        members = self._members[base]
        for root in ordered:
            if root != base:
                members |= self._members[root]
                del self._members[root]
        del self._members[base]
        self._members[new_root] = members
        for root in ordered:
            self._parent[root] = new_root
            del self._level[root]
        self._parent[new_root] = new_root
        self._level[new_root] = top
        for lists in (self._out, self._in_same):
            bulk = max(ordered, key=lambda r: len(lists[r]))
            joined = lists[bulk]
            for root in ordered:
                if root == bulk:
                    continue
                for vertex in lists[root]:
                    self.steps += 1
                    if self._find(vertex) != new_root:
                        joined.append(vertex)
                del lists[root]
            del lists[bulk]
            lists[new_root] = joined
        return new_root

    def check_levels(self) -> bool:
        """Every inter-component edge goes from a lower-or-equal level, and
        every same-level edge is registered for the backward search."""
        for source, target in self._edges:
            src_root = self._find(source)
            dst_root = self._find(target)
            if src_root == dst_root:
                continue
            if self._level[src_root] > self._level[dst_root]:
                return False
            if self._level[src_root] == self._level[dst_root]:
                if not any(
                    self._find(v) == src_root for v in self._in_same[dst_root]
                ):
                    return False
        return True

    def to_debug_json(self) -> dict:
        groups = []
        for root in sorted(self._members, key=lambda r: (self._level[r], _key(r))):
            groups.append(
                {
                    "id": _jsonable(root),
                    "level": self._level[root],
                    "members": sorted(_jsonable(v) for v in self._members[root]),
                    "self_loops": sorted(
                        _jsonable(v) for v in self._members[root] if v in self._loops
                    ),
                }
            )
        edges = sorted([_jsonable(u), _jsonable(v)] for u, v in self._edges)
        return {"components": groups, "edges": edges}


def _jsonable(vertex):
    if isinstance(vertex, tuple):
        return list(vertex)
    return vertex


def _key(vertex):
    return (0, vertex) if not isinstance(vertex, tuple) else (1, vertex)


def insertion_work_ladder(sizes: Sequence[int], seed: int = 0) -> List[dict]:
    """Measure incremental work on growing random graphs, one row per size.

    Mirrors how a planner feeds the index: vertices arrive over time (one
    per inserted edge) and each edge connects two existing vertices chosen
    uniformly. Each row reports the elementary-step count for m insertions
    and its ratio to m^(3/2).
    """
    rows = []
    for m in sizes:
        rng = random.Random(seed)
        index = SccIndex()
        index.insert_vertex(0)
        index.insert_vertex(1)
        count = 2
        inserted = 0
        while inserted < m:
            index.insert_vertex(count)
            count += 1
            u = rng.randrange(count)
            v = rng.randrange(count)
            if u == v:
                continue
            index.insert_edge(u, v)
            inserted += 1
        rows.append(
            {
                "edges": m,
                "vertices": count,
                "steps": index.steps,
                "ratio": index.steps / (m**1.5),
            }
        )
    return rows
