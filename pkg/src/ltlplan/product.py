"""Product of a transition system with a Buchi automaton.

The product pairs each transition-system state with the automaton states
it can occupy, restricted to pairs reachable from (initial state, initial
automaton states). It is grown one candidate transition at a time: the
update either admits the candidate, adding every product state and edge
that becomes reachable through it, or reports that the candidate cannot
contribute to any accepting run and leaves the product untouched. A
strongly-connected-component index over the product states is fed every
admitted edge, so asking whether an accepting pair lies on a cycle stays
cheap; a plan (lasso over transition-system states) is read off the
product once such a pair exists.

Automaton moves are driven by the label of the move's source state, and
pairs whose automaton state has no outgoing transition are never admitted:
they cannot start an infinite run, so dropping them changes no accepted
behavior while keeping the product small.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .buchi import BuchiAutomaton
from .inc_scc import SccIndex
from .ltl import LassoWord
from .tsys import TransitionSystem


class UnsatisfiableError(Exception):
    """Raised when no initial product state can start an infinite run."""


Pair = Tuple[int, int]


@dataclass(frozen=True)
class Plan:
    """A lasso over transition-system states: prefix once, suffix forever.

    The suffix ends at the state the prefix ends at, so both the jump from
    prefix into suffix and the wrap-around of the suffix follow transitions
    of the system.
    """

    prefix: Tuple[int, ...]
    suffix: Tuple[int, ...]

    def __post_init__(self):
        if not self.prefix:
            raise ValueError("plan prefix must be non-empty")
        if not self.suffix:
            raise ValueError("plan suffix must be non-empty")


def induced_word(plan: Plan, tsys: TransitionSystem) -> LassoWord:
    """The label sequence a plan produces, as a lasso word."""
    return LassoWord(
        tuple(tsys.label(x) for x in plan.prefix),
        tuple(tsys.label(x) for x in plan.suffix),
    )


class ProductAutomaton:
    """Reachable product states, their edges, and the cycle index.

    Mutated only through init_product/update_pa (single writer); everything
    else is a read-only query. `buchi_sets[x]` is the set of automaton
    states paired with transition-system state x.
    """

    def __init__(self, buchi: BuchiAutomaton, defer_scc: bool = False):
        self.buchi = buchi
        self.states: Set[Pair] = set()
        self.initial: Set[Pair] = set()
        self.accepting: Set[Pair] = set()
        self.adjacency: Dict[Pair, List[Pair]] = {}
        self.edges: Set[Tuple[Pair, Pair]] = set()
        self.buchi_sets: Dict[int, Set[int]] = {}
        self.labels: Dict[int, FrozenSet[str]] = {}
        self.scc = SccIndex()
        # With deferral on, component bookkeeping starts only once an
        # accepting pair exists; edges arriving before that are replayed in
        # arrival order, so the index ends up identical either way.
        self._defer_active = bool(defer_scc)
        self._held_edges: List[Tuple[Pair, Pair]] = []

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def _admit_state(self, pair: Pair) -> None:
        self.states.add(pair)
        self.adjacency[pair] = []
        self.buchi_sets.setdefault(pair[0], set()).add(pair[1])
        self.scc.insert_vertex(pair)
        if pair[1] in self.buchi.accepting:
            self.accepting.add(pair)
            if self._defer_active:
                self._defer_active = False
                for held in self._held_edges:
                    self.scc.insert_edge(*held)
                self._held_edges.clear()

    def _admit_edge(self, p1: Pair, p2: Pair) -> None:
        self.edges.add((p1, p2))
        self.adjacency[p1].append(p2)
        if self._defer_active:
            self._held_edges.append((p1, p2))
        else:
            self.scc.insert_edge(p1, p2)

    def accepting_cycle_pairs(self) -> List[Pair]:
        """Accepting pairs lying on a cycle, smallest ids first."""
        if self._defer_active:
            return []
        return sorted(p for p in self.accepting if self.scc.has_cycle(p))

    def to_debug_json(self) -> dict:
        return {
            "states": [list(p) for p in sorted(self.states)],
            "initial": [list(p) for p in sorted(self.initial)],
            "accepting": [list(p) for p in sorted(self.accepting)],
            "edges": [
                [list(p1), list(p2)] for p1, p2 in sorted(self.edges)
            ],
        }


def init_product(
    buchi: BuchiAutomaton, x0: int, x0_labels, defer_scc: bool = False
) -> ProductAutomaton:
    """Product holding the initial pairs {x0} x (initial automaton states).

    Automaton states with no outgoing transition are skipped. When that
    removes every pair there is no run at all, which is reported as
    UnsatisfiableError rather than an empty product.
    """
    product = ProductAutomaton(buchi, defer_scc=defer_scc)
    product.labels[x0] = frozenset(x0_labels)
    for s in sorted(buchi.initial):
        if not buchi.is_nonblocking(s):
            continue
        pair = (x0, s)
        product._admit_state(pair)
        product.initial.add(pair)
    if not product.states:
        raise UnsatisfiableError(
            "every initial automaton state blocks; the specification admits no run"
        )
    return product


def update_pa(
    product: ProductAutomaton,
    tsys: TransitionSystem,
    candidate: Tuple[int, int],
    target_label=None,
) -> bool:
    """Try to admit the candidate transition (x, x') into the product.

    x must already carry product states. x' is either a state of the
    system or a pending one (its id the next to be assigned), in which
    case target_label supplies its labels. Computes the product states the
    candidate induces at x'; if none survive the blocking filter the
    product is left untouched and False comes back. Otherwise the new
    states, the edges into them, and everything reachable from them
    through the system plus the candidate edge are added, every fresh edge
    is handed to the component index, and the result is True.
    """
    x, x_new = candidate
    if x not in product.buchi_sets:
        raise KeyError(f"source state {x!r} has no product states")
    buchi = product.buchi
    size = len(tsys)
    cached_x = product.labels.get(x)
    if cached_x is not None and 0 <= x < size and tsys.label(x) != cached_x:
        raise ValueError(
            f"label mismatch for state {x}: the product grew with "
            f"{sorted(cached_x)}, the system now says {sorted(tsys.label(x))}"
        )
    pending = not (0 <= x_new < size)
    if pending:
        if target_label is None:
            raise KeyError(
                f"target state {x_new!r} is not in the transition system and no label was given"
            )
        label_new = frozenset(target_label)
    else:
        label_new = tsys.label(x_new)
        if target_label is not None and frozenset(target_label) != label_new:
            raise ValueError(
                f"label mismatch for state {x_new}: the system says "
                f"{sorted(label_new)}, the candidate came with "
                f"{sorted(frozenset(target_label))}"
            )

    def label_of(x1: int) -> FrozenSet[str]:
        if pending and x1 == x_new:
            return label_new
        return tsys.label(x1)

    def moves_from(x1: int) -> List[int]:
        succ = list(tsys.successors(x1)) if 0 <= x1 < size else []
        if x1 == x and x_new not in succ:
            succ.append(x_new)
        return succ

    label_x = label_of(x)
    seeds: List[Pair] = []
    seed_edges: List[Tuple[Pair, Pair]] = []
    seen_seeds: Set[Pair] = set()
    for s in sorted(product.buchi_sets[x]):
        for s2 in sorted(buchi.successors(s, label_x)):
            if not buchi.is_nonblocking(s2):
                continue
            pair = (x_new, s2)
            seed_edges.append(((x, s), pair))
            if pair not in seen_seeds:
                seen_seeds.add(pair)
                seeds.append(pair)
    if not seeds:
        return False

    product.labels[x_new] = label_new
    for pair in seeds:
        if pair not in product.states:
            product._admit_state(pair)
    for p1, p2 in seed_edges:
        if (p1, p2) not in product.edges:
            product._admit_edge(p1, p2)

    stack = list(reversed(seeds))
    while stack:
        x1, s1 = stack.pop()
        letter = label_of(x1)
        for x2 in moves_from(x1):
            for s2 in sorted(buchi.successors(s1, letter)):
                if not buchi.is_nonblocking(s2):
                    continue
                p2 = (x2, s2)
                if p2 not in product.states:
                    product._admit_state(p2)
                    product._admit_edge((x1, s1), p2)
                    stack.append(p2)
                elif ((x1, s1), p2) not in product.edges:
                    product._admit_edge((x1, s1), p2)
    return True


def batch_product(tsys: TransitionSystem, buchi: BuchiAutomaton) -> ProductAutomaton:
    """Build the product of the whole system from scratch (the test oracle
    for the incremental update): breadth-first from the initial pairs,
    admitting only non-blocking automaton states."""
    x0 = tsys.initial
    product = init_product(buchi, x0, tsys.label(x0))
    queue = deque(sorted(product.initial))
    while queue:
        x1, s1 = queue.popleft()
        letter = tsys.label(x1)
        for x2 in tsys.successors(x1):
            for s2 in sorted(buchi.successors(s1, letter)):
                if not buchi.is_nonblocking(s2):
                    continue
                p2 = (x2, s2)
                if p2 not in product.states:
                    product._admit_state(p2)
                    product._admit_edge((x1, s1), p2)
                    queue.append(p2)
                elif ((x1, s1), p2) not in product.edges:
                    product._admit_edge((x1, s1), p2)
    return product


def extract_plan(product: ProductAutomaton, tsys: TransitionSystem) -> Plan:
    """Read a prefix/suffix plan off the product.

    Takes the smallest accepting pair lying on a cycle, the shortest path
    to it from an initial pair, and the shortest cycle through it inside
    its component (a self-loop gives a one-state suffix). Neighbor order
    is sorted everywhere, so the result is a pure function of the product.
    """
    candidates = product.accepting_cycle_pairs()
    if not candidates:
        raise ValueError("no accepting pair lies on a cycle yet")
    goal = candidates[0]

    path = _bfs_path(product, sorted(product.initial), goal, None)
    if path is None:
        raise ValueError("accepting pair unreachable; product invariant broken")

    allowed = product.scc.members(goal)
    first_hops = [
        q for q in sorted(product.adjacency[goal]) if q == goal or q in allowed
    ]
    cycle = _bfs_path(product, first_hops, goal, allowed)
    if cycle is None:
        raise ValueError("no cycle through the accepting pair; index out of sync")

    prefix = tuple(p[0] for p in path)
    suffix = tuple(p[0] for p in cycle)
    return Plan(prefix=prefix, suffix=suffix)


def _bfs_path(
    product: ProductAutomaton,
    sources: List[Pair],
    goal: Pair,
    allowed: Optional[FrozenSet],
) -> Optional[List[Pair]]:
    """Shortest path from any source to the goal, or None.

    `allowed` restricts the search to a state set (the goal's component
    when hunting for a cycle); sources are tried in the given order and
    neighbors in sorted order, which fixes all ties.
    """
    parent: Dict[Pair, Optional[Pair]] = {}
    queue = deque()
    for p in sources:
        if p in parent:
            continue
        parent[p] = None
        queue.append(p)
        if p == goal:
            return _walk_back(parent, p)
    while queue:
        p = queue.popleft()
        for q in sorted(product.adjacency[p]):
            if q in parent:
                continue
            if allowed is not None and q != goal and q not in allowed:
                continue
            parent[q] = p
            if q == goal:
                return _walk_back(parent, q)
            queue.append(q)
    return None


def _walk_back(parent: Dict[Pair, Optional[Pair]], end: Pair) -> List[Pair]:
    path = [end]
    node = end
    while parent[node] is not None:
        node = parent[node]
        path.append(node)
    path.reverse()
    return path
