"""Sampling-based growth of a sparse transition system until its Buchi
product contains a reachable accepting cycle.

The loop alternates two phases per random sample. Phase one steers every
sufficiently-isolated existing state toward the sample and admits the
steered point (state plus incoming transition) when the segment is
simple and the product search accepts it. Phase two tries to close
cycles by connecting each state admitted this iteration back to its
neighborhood. Both the neighbor list and the connection radii are fixed
at the top of the iteration; admitted states and transitions are
committed immediately, so the product stays equal to the batch
construction after every single update.
"""

import math
import time
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

import numpy as np

from .buchi import BuchiAutomaton
from .product import (
    Plan,
    ProductAutomaton,
    extract_plan,
    init_product,
    update_pa,
)
from .tsys import TransitionSystem
from .workspace import (
    Environment,
    RadiusSchedule,
    far,
    is_simple_segment,
    near,
    sample,
    steer,
)

__all__ = ["PlannerParams", "PlanReport", "plan", "success_rate"]

# A cycle-closing connection (new state back to an old one) is only kept
# when steering from the new state actually reaches the old one. Exact
# under the trivial steer; finite steps get this much slack.
STEER_MATCH_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PlannerParams:
    """Knobs for one planning run.

    bounds supplies the shrinking connection radii; leave it None to
    derive a schedule from the environment volume with the default
    ratio 2.0 and safety 0.5. step is the steering reach (math.inf
    steers all the way to the sample). self_loop_termination controls
    whether a self-looping accepting product state ends the search;
    products grown here never contain self-loops (the transition system
    refuses them), so the flag only matters for imported graphs.
    """

    bounds: Optional[RadiusSchedule] = None
    step: float = math.inf
    max_iterations: int = 100_000
    seed: int = 0
    self_loop_termination: bool = True
    defer_scc: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.step > 0.0:
            raise ValueError("step must be positive")


@dataclass(frozen=True)
class PlanReport:
    """Outcome of a planning run; plan is None when the budget ran out.

    seconds is total wall time, split into geometry_seconds (sampling,
    radius queries, steering, segment tests, bookkeeping) and
    search_seconds (product updates, termination checks, extraction).
    Timing never enters to_json so exports stay byte-stable.
    """

    plan: Optional[Plan]
    iterations: int
    tsys: TransitionSystem
    product: ProductAutomaton
    seconds: float
    geometry_seconds: float
    search_seconds: float
    counters: Dict[str, int] = field(default_factory=dict)

    @property
    def num_states(self) -> int:
        return len(self.tsys)

    @property
    def num_transitions(self) -> int:
        return self.tsys.num_transitions

    @property
    def num_product_states(self) -> int:
        return self.product.num_states

    @property
    def num_product_edges(self) -> int:
        return self.product.num_edges

    def to_json(self) -> dict:
        """Deterministic result document: plan (ids plus coordinates of
        the states it visits) and size statistics. No timing fields."""
        data: dict = {
            "plan": None,
            "stats": {
                "states": self.num_states,
                "transitions": self.num_transitions,
                "product_states": self.num_product_states,
                "product_edges": self.num_product_edges,
                "iterations": self.iterations,
                "buchi": {
                    "states": self.product.buchi.num_states,
                    "transitions": self.product.buchi.num_transitions,
                },
            },
        }
        if self.plan is not None:
            coords = self.tsys.coords()
            used = sorted(set(self.plan.prefix) | set(self.plan.suffix))
            data["plan"] = {
                "prefix": list(self.plan.prefix),
                "suffix": list(self.plan.suffix),
                "coords": {str(i): [float(v) for v in coords[i]] for i in used},
            }
        return data


def plan(
    env: Environment,
    buchi: BuchiAutomaton,
    params: PlannerParams,
    observer=None,
) -> PlanReport:
    """Grow a transition system in env until the product with buchi has
    an accepting state on a cycle, then extract the lasso plan.

    Each iteration draws a uniform sample, lists the states that are at
    least the inner radius away from it but within the outer radius
    (empty list means the whole iteration is a no-op, counted but
    otherwise free), and runs the two admission phases over that fixed
    list. Raises UnsatisfiableError when no initial product state
    survives; returns a report without a plan when max_iterations runs
    out first. Identical arguments give identical reports, timing aside.

    observer, when given, is called as observer(iteration, tsys,
    product) after each iteration's admissions; it must only inspect.
    """
    started = time.perf_counter()
    schedule = params.bounds or RadiusSchedule.for_environment(env)
    if schedule.dimension != env.dimension:
        raise ValueError("radius schedule dimension does not match the environment")
    rng = np.random.default_rng(params.seed)

    search_time = 0.0

    tsys = TransitionSystem(env.initial, env.label_of(env.initial), schedule)
    tick = time.perf_counter()
    product = init_product(
        buchi, tsys.initial, tsys.label(tsys.initial), defer_scc=params.defer_scc
    )
    search_time += time.perf_counter() - tick

    # Coordinate-byte index: lets a steered point that equals an already
    # admitted state (every phase-1 candidate steers to the same target
    # under the trivial steer) attach a plain transition instead of
    # tripping the duplicate-state check.
    index = {tsys.point(tsys.initial).tobytes(): tsys.initial}

    counters = {"far_nonempty": 0, "phase1_entries": 0, "phase2_entries": 0}
    iterations = 0

    def satisfied() -> bool:
        pairs = product.accepting_cycle_pairs()
        if params.self_loop_termination:
            return bool(pairs)
        return any(product.scc.scc_size(p) > 1 for p in pairs)

    def admit(source: int, target_id: int, target_point, label) -> bool:
        """Run the product update for one candidate transition and commit
        it (plus the target state when new) on success."""
        nonlocal search_time
        pending = target_id == len(tsys)
        tick = time.perf_counter()
        added = update_pa(
            product,
            tsys,
            (source, target_id),
            target_label=label if pending else None,
        )
        search_time += time.perf_counter() - tick
        if not added:
            return False
        if pending:
            admitted = tsys.add_state(target_point, label)
            assert admitted == target_id
            index[tsys.point(target_id).tobytes()] = target_id
        tsys.add_transition(source, target_id)
        return True

    tick = time.perf_counter()
    done = satisfied()
    search_time += time.perf_counter() - tick

    while not done and iterations < params.max_iterations:
        iterations += 1
        x_r = sample(env, rng)
        inner_radius, outer_radius = schedule.radii(len(tsys))
        neighbors = far(tsys, x_r, inner_radius, outer_radius)
        if neighbors:
            counters["far_nonempty"] += 1
            counters["phase1_entries"] += 1
        new_states: List[int] = []
        for x in neighbors:
            x_point = tsys.point(x)
            target = steer(x_point, x_r, params.step)
            existing = index.get(target.tobytes())
            if existing is not None:
                if existing == x or tsys.has_transition(x, existing):
                    continue
                if not is_simple_segment(env, x_point, target):
                    continue
                admit(x, existing, target, None)
                continue
            # add_state would refuse a point this close to the rest of
            # the system; skip before touching the product.
            if float(tsys.distances_to(target).min()) < schedule.inner(len(tsys)):
                continue
            if not is_simple_segment(env, x_point, target):
                continue
            label = env.label_of(target)
            if admit(x, len(tsys), target, label):
                new_states.append(len(tsys) - 1)
        if new_states:
            counters["phase2_entries"] += 1
        for fresh in new_states:
            fresh_point = tsys.point(fresh)
            for x in near(tsys, fresh_point, outer_radius):
                if x == fresh or tsys.has_transition(fresh, x):
                    continue
                x_point = tsys.point(x)
                back = steer(fresh_point, x_point, params.step)
                if float(np.linalg.norm(back - x_point)) > STEER_MATCH_TOLERANCE:
                    continue
                if not is_simple_segment(env, fresh_point, x_point):
                    continue
                admit(fresh, x, x_point, None)
        if observer is not None:
            observer(iterations, tsys, product)
        tick = time.perf_counter()
        done = satisfied()
        search_time += time.perf_counter() - tick

    found: Optional[Plan] = None
    if done:
        tick = time.perf_counter()
        found = extract_plan(product, tsys)
        search_time += time.perf_counter() - tick

    total = time.perf_counter() - started
    return PlanReport(
        plan=found,
        iterations=iterations,
        tsys=tsys,
        product=product,
        seconds=total,
        geometry_seconds=total - search_time,
        search_seconds=search_time,
        counters=counters,
    )


def success_rate(
    env: Environment,
    buchi: BuchiAutomaton,
    params: PlannerParams,
    trials: int,
) -> float:
    """Fraction of trials (seeds params.seed, params.seed + 1, ...) that
    find a plan within the iteration budget."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    hits = 0
    for offset in range(trials):
        report = plan(env, buchi, replace(params, seed=params.seed + offset))
        if report.plan is not None:
            hits += 1
    return hits / trials
