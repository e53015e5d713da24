"""Buchi automata over proposition-set alphabets, plus LTL translation.

Guards are conjunctions of literals: a letter (set of proposition names)
satisfies a guard when it contains every positive literal and no negative
one. Translation runs a node-set tableau on the negation normal form,
collects one generalized acceptance set per until subformula, degeneralizes
with a counter, and then shrinks the result (reachability, dead-state
removal, duplicate merging, guard subsumption).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

from .ltl import (
    And,
    Atom,
    FalseBool,
    Formula,
    LassoWord,
    Next,
    Not,
    Or,
    Release,
    TrueBool,
    Until,
    atoms,
    format_formula,
    to_nnf,
)


@dataclass(frozen=True)
class Guard:
    """Conjunction of positive and negated propositions."""

    positive: FrozenSet[str]
    negative: FrozenSet[str]

    def __post_init__(self):
        clash = self.positive & self.negative
        if clash:
            raise ValueError(f"guard requires and forbids {sorted(clash)}")

    def satisfied_by(self, label: FrozenSet[str]) -> bool:
        return self.positive <= label and not (self.negative & label)

    def subsumes(self, other: "Guard") -> bool:
        """True when every letter satisfying `other` satisfies self."""
        return self.positive <= other.positive and self.negative <= other.negative


class BuchiAutomaton:
    """Nondeterministic Buchi automaton with states 0..num_states-1."""

    def __init__(
        self,
        num_states: int,
        initial: Iterable[int],
        accepting: Iterable[int],
        transitions: Sequence[Sequence[Tuple[Guard, int]]],
        propositions: Iterable[str] = (),
    ):
        self.num_states = int(num_states)
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        self.propositions = frozenset(propositions)
        if len(transitions) != self.num_states:
            raise ValueError("transition table size does not match state count")
        for group in (self.initial, self.accepting):
            for s in group:
                self._check_state(s)
        table = []
        for src, row in enumerate(transitions):
            for guard, dst in row:
                self._check_state(dst)
                if not isinstance(guard, Guard):
                    raise ValueError(f"transition from {src} lacks a guard")
            table.append(tuple(row))
        self._transitions = tuple(table)

    def _check_state(self, s: int) -> None:
        if not (0 <= s < self.num_states):
            raise ValueError(f"state {s} out of range 0..{self.num_states - 1}")

    def transitions_from(self, s: int) -> Tuple[Tuple[Guard, int], ...]:
        self._check_state(s)
        return self._transitions[s]

    @property
    def num_transitions(self) -> int:
        return sum(len(row) for row in self._transitions)

    def successors(self, s: int, label: FrozenSet[str]) -> Set[int]:
        """States reachable from s in one step reading the given letter."""
        return {dst for guard, dst in self.transitions_from(s) if guard.satisfied_by(label)}

    def is_nonblocking(self, s: int) -> bool:
        """True when s has at least one outgoing transition.

        Guard construction forbids contradictory literal sets, so every
        stored guard is satisfiable and one transition suffices.
        """
        return bool(self.transitions_from(s))

    def accepts_lasso(self, word: LassoWord) -> bool:
        """Simulate the automaton over prefix . suffix^omega.

        The suffix induces a finite graph over (state, suffix position)
        vertices; the word is accepted iff a reachable strongly connected
        component contains an accepting state and carries a cycle.
        """
        frontier: Set[int] = set(self.initial)
        for letter in word.prefix:
            step: Set[int] = set()
            for s in frontier:
                step |= self.successors(s, letter)
            frontier = step
            if not frontier:
                return False
        loop_len = len(word.suffix)
        starts = {(s, 0) for s in frontier}
        adjacency: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
        queue = deque(sorted(starts))
        seen = set(starts)
        while queue:
            s, i = queue.popleft()
            nxt = (i + 1) % loop_len
            targets = [(t, nxt) for t in sorted(self.successors(s, word.suffix[i]))]
            adjacency[(s, i)] = targets
            for v in targets:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        for component in strongly_connected_components(adjacency):
            if not any(s in self.accepting for s, _ in component):
                continue
            if len(component) > 1:
                return True
            (vertex,) = component
            if vertex in adjacency[vertex]:
                return True
        return False

    def to_json(self) -> dict:
        """Stable dict form: {states, initial, accepting, propositions, transitions}."""
        rows = []
        for src in range(self.num_states):
            for guard, dst in self._transitions[src]:
                rows.append(
                    {
                        "from": src,
                        "pos": sorted(guard.positive),
                        "neg": sorted(guard.negative),
                        "to": dst,
                    }
                )
        rows.sort(key=lambda r: (r["from"], r["to"], r["pos"], r["neg"]))
        return {
            "states": self.num_states,
            "initial": sorted(self.initial),
            "accepting": sorted(self.accepting),
            "propositions": sorted(self.propositions),
            "transitions": rows,
        }

    @classmethod
    def from_json(cls, data: dict) -> "BuchiAutomaton":
        try:
            count = int(data["states"])
            initial = [int(s) for s in data["initial"]]
            accepting = [int(s) for s in data["accepting"]]
            raw = data["transitions"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed automaton JSON: {exc}") from exc
        table: List[List[Tuple[Guard, int]]] = [[] for _ in range(count)]
        for row in raw:
            try:
                src, dst = int(row["from"]), int(row["to"])
                guard = Guard(frozenset(row["pos"]), frozenset(row["neg"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed automaton transition {row!r}: {exc}") from exc
            if not (0 <= src < count):
                raise ValueError(f"transition source {src} out of range")
            table[src].append((guard, dst))
        return cls(count, initial, accepting, table, data.get("propositions", ()))


def strongly_connected_components(adjacency: Dict) -> List[Set]:
    """Iterative Tarjan over a dict-of-iterables adjacency. Keys may be any
    hashable vertices; vertices appearing only as targets are included."""
    vertices = set(adjacency)
    for targets in adjacency.values():
        vertices.update(targets)
    index: Dict = {}
    low: Dict = {}
    on_stack: Set = set()
    stack: List = []
    components: List[Set] = []
    counter = [0]

    def visit(root) -> None:
        work = [(root, iter(adjacency.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            vertex, edges = work[-1]
            advanced = False
            for target in edges:
                if target not in index:
                    index[target] = low[target] = counter[0]
                    counter[0] += 1
                    stack.append(target)
                    on_stack.add(target)
                    work.append((target, iter(adjacency.get(target, ()))))
                    advanced = True
                    break
                if target in on_stack:
                    low[vertex] = min(low[vertex], index[target])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[vertex])
            if low[vertex] == index[vertex]:
                component = set()
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.add(member)
                    if member == vertex:
                        break
                components.append(component)

    for vertex in sorted(vertices):
        if vertex not in index:
            visit(vertex)
    return components


# ---------------------------------------------------------------------------
# Translation


def _until_subformulas(f: Formula) -> Set[Until]:
    found: Set[Until] = set()
    work = [f]
    while work:
        g = work.pop()
        if isinstance(g, Until):
            found.add(g)
            work.extend((g.left, g.right))
        elif isinstance(g, (And, Or, Release)):
            work.extend((g.left, g.right))
        elif isinstance(g, (Not, Next)):
            work.append(g.operand)
    return found


def _negation(literal: Formula) -> Formula:
    if isinstance(literal, Not):
        return literal.operand
    return Not(literal)


def _tableau(phi: Formula):
    """Node-set construction on an NNF formula.

    Returns (node_keys, incoming): node id -> (old, next) frozensets and
    node id -> set of predecessor ids, with 0 denoting the virtual start.
    Node ids are assigned in a deterministic depth-first order (formulas are
    processed smallest-printed-form first), so repeated runs agree even
    under hash randomization.
    """
    node_keys: Dict[int, Tuple[FrozenSet[Formula], FrozenSet[Formula]]] = {}
    incoming: Dict[int, Set[int]] = {}
    by_key: Dict[Tuple[FrozenSet[Formula], FrozenSet[Formula]], int] = {}
    next_id = 1
    work: List[Tuple[FrozenSet[Formula], FrozenSet[Formula], FrozenSet[Formula], FrozenSet[int]]]
    work = [(frozenset([phi]), frozenset(), frozenset(), frozenset([0]))]
    while work:
        new, old, nxt, sources = work.pop()
        if not new:
            key = (old, nxt)
            known = by_key.get(key)
            if known is not None:
                incoming[known] |= sources
                continue
            nid = next_id
            next_id += 1
            by_key[key] = nid
            node_keys[nid] = key
            incoming[nid] = set(sources)
            work.append((nxt, frozenset(), frozenset(), frozenset([nid])))
            continue
        g = min(new, key=format_formula)
        rest = new - {g}
        if isinstance(g, FalseBool):
            continue  # contradictory branch
        if isinstance(g, TrueBool):
            work.append((rest, old | {g}, nxt, sources))
        elif isinstance(g, Atom) or (isinstance(g, Not) and isinstance(g.operand, Atom)):
            if _negation(g) in old:
                continue
            work.append((rest, old | {g}, nxt, sources))
        elif isinstance(g, And):
            work.append((rest | ({g.left, g.right} - old), old | {g}, nxt, sources))
        elif isinstance(g, Or):
            # push in reverse so the left branch is expanded first
            work.append((rest | ({g.right} - old), old | {g}, nxt, sources))
            work.append((rest | ({g.left} - old), old | {g}, nxt, sources))
        elif isinstance(g, Next):
            work.append((rest, old | {g}, nxt | {g.operand}, sources))
        elif isinstance(g, Until):
            work.append((rest | ({g.right} - old), old | {g}, nxt, sources))
            work.append((rest | ({g.left} - old), old | {g}, nxt | {g}, sources))
        elif isinstance(g, Release):
            work.append((rest | ({g.left, g.right} - old), old | {g}, nxt, sources))
            work.append((rest | ({g.right} - old), old | {g}, nxt | {g}, sources))
        else:
            raise ValueError(f"formula not in negation normal form: {format_formula(g)}")
    return node_keys, incoming


def translate(f: Formula) -> BuchiAutomaton:
    """Compile a formula into a Buchi automaton accepting exactly its models.

    Every returned state is reachable from the initial state; states from
    which no accepting cycle is reachable are removed (initial states are
    kept so that an empty language shows up as a blocking initial state).
    """
    phi = to_nnf(f)
    props = atoms(phi)
    node_keys, incoming = _tableau(phi)
    node_ids = sorted(node_keys)

    guard_of: Dict[int, Guard] = {}
    for nid in node_ids:
        old, _ = node_keys[nid]
        pos = frozenset(g.name for g in old if isinstance(g, Atom))
        neg = frozenset(g.operand.name for g in old if isinstance(g, Not))
        guard_of[nid] = Guard(pos, neg)

    lgba_edges: Dict[int, List[Tuple[Guard, int]]] = {nid: [] for nid in [0] + node_ids}
    for dst in node_ids:
        for src in sorted(incoming[dst]):
            lgba_edges[src].append((guard_of[dst], dst))

    untils = sorted(_until_subformulas(phi), key=format_formula)
    accept_sets: List[Set[int]] = []
    for u in untils:
        hits = set()
        for nid in node_ids:
            old, _ = node_keys[nid]
            if u not in old or u.right in old:
                hits.add(nid)
        accept_sets.append(hits)

    if not accept_sets:
        raw_initial = [0]
        raw_states = [0] + node_ids
        raw_edges = {s: list(lgba_edges[s]) for s in raw_states}
        raw_accepting = set(raw_states)
        return _assemble(raw_states, raw_initial, raw_accepting, raw_edges, props)

    # Counter degeneralization: track which acceptance set is owed next.
    count = len(accept_sets)

    def advance(nid: int, i: int) -> int:
        return (i + 1) % count if nid in accept_sets[i] else i

    start = (0, 0)
    raw_edges_deg: Dict[Tuple[int, int], List[Tuple[Guard, Tuple[int, int]]]] = {}
    order: List[Tuple[int, int]] = []
    queue = deque([start])
    seen = {start}
    while queue:
        nid, i = queue.popleft()
        order.append((nid, i))
        j = advance(nid, i)
        row = []
        for guard, dst in lgba_edges[nid]:
            target = (dst, j)
            row.append((guard, target))
            if target not in seen:
                seen.add(target)
                queue.append(target)
        raw_edges_deg[(nid, i)] = row
    number = {state: idx for idx, state in enumerate(order)}
    raw_states = list(range(len(order)))
    raw_edges = {
        number[s]: [(g, number[t]) for g, t in row] for s, row in raw_edges_deg.items()
    }
    raw_accepting = {number[(nid, i)] for nid, i in order if i == 0 and nid in accept_sets[0]}
    raw_initial = [number[start]]
    return _assemble(raw_states, raw_initial, raw_accepting, raw_edges, props)


def _assemble(
    states: List[int],
    initial: List[int],
    accepting: Set[int],
    edges: Dict[int, List[Tuple[Guard, int]]],
    props: FrozenSet[str],
) -> BuchiAutomaton:
    """Shrink and renumber: reachable -> live -> merged -> subsumed."""
    keep = _reachable(initial, edges)
    keep = _live_states(keep, initial, accepting, edges)
    edges = {
        s: [(g, t) for g, t in edges[s] if t in keep] for s in sorted(keep)
    }
    initial_set = set(initial) & keep
    accepting_set = accepting & keep

    while True:
        merged = _merge_duplicates(edges, initial_set, accepting_set)
        if merged is None:
            break
        edges, initial_set, accepting_set = merged

    edges = _subsume_guards(edges)

    order = sorted(edges)
    number = {s: idx for idx, s in enumerate(order)}
    table: List[List[Tuple[Guard, int]]] = []
    for s in order:
        row = sorted(
            ((g, number[t]) for g, t in edges[s]),
            key=lambda item: (item[1], sorted(item[0].positive), sorted(item[0].negative)),
        )
        table.append(row)
    return BuchiAutomaton(
        len(order),
        sorted(number[s] for s in initial_set),
        sorted(number[s] for s in accepting_set),
        table,
        props,
    )


def _reachable(initial: Iterable[int], edges: Dict[int, List[Tuple[Guard, int]]]) -> Set[int]:
    seen = set(initial)
    queue = deque(sorted(seen))
    while queue:
        s = queue.popleft()
        for _, t in edges.get(s, ()):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def _live_states(
    keep: Set[int],
    initial: Iterable[int],
    accepting: Set[int],
    edges: Dict[int, List[Tuple[Guard, int]]],
) -> Set[int]:
    """States that can reach an accepting cycle, plus the initial states."""
    adjacency = {s: [t for _, t in edges.get(s, ()) if t in keep] for s in keep}
    anchors: Set[int] = set()
    for component in strongly_connected_components(adjacency):
        if not (component & accepting):
            continue
        if len(component) > 1:
            anchors |= component
        else:
            (s,) = component
            if s in adjacency.get(s, ()):
                anchors.add(s)
    reverse: Dict[int, List[int]] = {s: [] for s in keep}
    for s, targets in adjacency.items():
        for t in targets:
            reverse[t].append(s)
    live = set(anchors)
    queue = deque(sorted(anchors))
    while queue:
        s = queue.popleft()
        for p in reverse[s]:
            if p not in live:
                live.add(p)
                queue.append(p)
    return (keep & live) | (set(initial) & keep)


def _merge_duplicates(
    edges: Dict[int, List[Tuple[Guard, int]]],
    initial: Set[int],
    accepting: Set[int],
):
    """Merge states with identical outgoing rows and acceptance status.

    Returns the rewritten (edges, initial, accepting) or None at fixpoint.
    """
    groups: Dict[tuple, List[int]] = {}
    for s in sorted(edges):
        signature = (
            s in accepting,
            tuple(
                sorted(
                    (tuple(sorted(g.positive)), tuple(sorted(g.negative)), t)
                    for g, t in edges[s]
                )
            ),
        )
        groups.setdefault(signature, []).append(s)
    remap = {}
    for members in groups.values():
        rep = members[0]
        for other in members[1:]:
            remap[other] = rep
    if not remap:
        return None
    new_edges: Dict[int, List[Tuple[Guard, int]]] = {}
    for s in sorted(edges):
        if s in remap:
            continue
        seen_rows = set()
        row = []
        for g, t in edges[s]:
            target = remap.get(t, t)
            key = (g, target)
            if key not in seen_rows:
                seen_rows.add(key)
                row.append((g, target))
        new_edges[s] = row
    new_initial = {remap.get(s, s) for s in initial}
    new_accepting = {remap.get(s, s) for s in accepting}
    return new_edges, new_initial, new_accepting


def _subsume_guards(edges: Dict[int, List[Tuple[Guard, int]]]):
    """Within each (src, dst) bundle drop guards implied by a weaker one."""
    out: Dict[int, List[Tuple[Guard, int]]] = {}
    for s in sorted(edges):
        bundles: Dict[int, List[Guard]] = {}
        order: List[int] = []
        for g, t in edges[s]:
            if t not in bundles:
                bundles[t] = []
                order.append(t)
            bundles[t].append(g)
        row: List[Tuple[Guard, int]] = []
        for t in order:
            kept: List[Guard] = []
            for g in bundles[t]:
                if any(other.subsumes(g) for other in kept):
                    continue
                kept = [k for k in kept if not g.subsumes(k)]
                kept.append(g)
            row.extend((g, t) for g in kept)
        out[s] = row
    return out
