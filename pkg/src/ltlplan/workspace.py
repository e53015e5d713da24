"""Labeled box workspaces.

An environment is an axis-aligned box domain containing named, labeled,
pairwise-disjoint box regions. Points are labeled by the first region that
contains them; space outside every region carries the empty label set.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import FrozenSet, List, Sequence, Tuple

import numpy as np

GEOM_TOLERANCE = 1e-9

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Box:
    """Closed axis-aligned box given by lower and upper corner vectors."""

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        if self.lo.ndim != 1 or self.lo.shape != self.hi.shape:
            raise ValueError("box corners must be equal-length vectors")
        if not (np.isfinite(self.lo).all() and np.isfinite(self.hi).all()):
            raise ValueError("box corners must be finite")
        if np.any(self.hi < self.lo):
            raise ValueError("box upper corner below lower corner")

    @property
    def dimension(self) -> int:
        return self.lo.shape[0]

    @property
    def volume(self) -> float:
        return float(np.prod(self.hi - self.lo))

    def contains(self, point: np.ndarray) -> bool:
        return bool(np.all(point >= self.lo) and np.all(point <= self.hi))

    def contains_box(self, other: "Box") -> bool:
        return bool(np.all(other.lo >= self.lo) and np.all(other.hi <= self.hi))

    def separated_from(self, other: "Box", gap: float) -> bool:
        """True when some axis leaves at least `gap` between the boxes."""
        return bool(
            np.any(self.hi + gap <= other.lo) or np.any(other.hi + gap <= self.lo)
        )


@dataclass(frozen=True)
class Region:
    name: str
    box: Box
    labels: FrozenSet[str]


class Environment:
    """Domain box, labeled regions, and the fixed start point."""

    def __init__(
        self,
        domain: Box,
        regions: Sequence[Region],
        initial,
        propositions,
    ):
        self.domain = domain
        self.regions = list(regions)
        self.initial = np.asarray(initial, dtype=float)
        self.propositions = frozenset(propositions)
        self._validate()

    @property
    def dimension(self) -> int:
        return self.domain.dimension

    def _validate(self) -> None:
        if self.dimension < 1:
            raise ValueError("field 'dimension': must be at least 1")
        if np.any(self.domain.hi <= self.domain.lo):
            raise ValueError("field 'domain': degenerate (needs hi > lo on every axis)")
        if self.initial.shape != (self.dimension,):
            raise ValueError("field 'initial': wrong length")
        if not self.domain.contains(self.initial):
            raise ValueError("field 'initial': outside the domain")
        for name in sorted(self.propositions):
            if not _NAME_RE.match(name):
                raise ValueError(f"field 'propositions': invalid name {name!r}")
        seen = set()
        for region in self.regions:
            tag = f"field 'regions[{region.name}]'"
            if region.name in seen:
                raise ValueError(f"{tag}: duplicate region name")
            seen.add(region.name)
            if region.box.dimension != self.dimension:
                raise ValueError(f"{tag}: wrong dimension")
            if np.any(region.box.hi <= region.box.lo):
                raise ValueError(f"{tag}: degenerate box (needs hi > lo on every axis)")
            if not self.domain.contains_box(region.box):
                raise ValueError(f"{tag}: not contained in the domain")
            if not region.labels <= self.propositions:
                extra = sorted(region.labels - self.propositions)
                raise ValueError(f"{tag}: labels {extra} missing from 'propositions'")
        for i, first in enumerate(self.regions):
            for second in self.regions[i + 1 :]:
                if not first.box.separated_from(second.box, GEOM_TOLERANCE):
                    raise ValueError(
                        f"field 'regions': {first.name!r} and {second.name!r} overlap "
                        "or touch (regions need positive separation)"
                    )

    def label_of(self, point) -> FrozenSet[str]:
        """Labels of the first region containing the point (list order)."""
        x = np.asarray(point, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError("point has wrong dimension")
        if not self.domain.contains(x):
            raise ValueError(f"point {x.tolist()} outside the domain")
        for region in self.regions:
            if region.box.contains(x):
                return region.labels
        return frozenset()


def load_environment(source) -> Environment:
    """Build an Environment from a JSON file path, JSON text, or dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            data = json.loads(text)
        else:
            with open(text, "r", encoding="utf-8") as handle:
                data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("environment JSON must be an object")

    def need(key, container=data, where="environment"):
        if key not in container:
            raise ValueError(f"field '{key}': missing from {where}")
        return container[key]

    dimension = need("dimension")
    if not isinstance(dimension, int) or dimension < 1:
        raise ValueError("field 'dimension': must be a positive integer")
    domain_raw = need("domain")
    try:
        domain = Box(need("lo", domain_raw, "'domain'"), need("hi", domain_raw, "'domain'"))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"field 'domain': {exc}") from exc
    if domain.dimension != dimension:
        raise ValueError("field 'domain': length does not match 'dimension'")
    regions: List[Region] = []
    for idx, raw in enumerate(need("regions")):
        where = f"'regions[{idx}]'"
        name = need("name", raw, where)
        if not isinstance(name, str) or not _NAME_RE.match(name):
            raise ValueError(f"field 'regions[{idx}].name': invalid name {name!r}")
        try:
            box = Box(need("lo", raw, where), need("hi", raw, where))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"field 'regions[{idx}]': {exc}") from exc
        labels = need("labels", raw, where)
        regions.append(Region(name, box, frozenset(labels)))
    try:
        return Environment(domain, regions, need("initial"), need("propositions"))
    except (TypeError, ValueError) as exc:
        raise ValueError(str(exc)) from exc


def sample(env: Environment, rng: np.random.Generator) -> np.ndarray:
    """Draw a point uniformly from the domain."""
    return rng.uniform(env.domain.lo, env.domain.hi)


def steer(start, goal, step: float) -> np.ndarray:
    """Move from start toward goal, at most `step` far; inf reaches the goal.

    The result is clipped onto the segment's bounding box so accumulated
    rounding cannot push it outside the domain when both endpoints are inside.
    """
    a = np.asarray(start, dtype=float)
    b = np.asarray(goal, dtype=float)
    offset = b - a
    distance = float(np.linalg.norm(offset))
    if distance == 0.0:
        raise ValueError("steer requires distinct start and goal")
    if step <= 0.0:
        raise ValueError("steer step must be positive")
    if math.isinf(step) or distance <= step:
        return b.copy()
    point = a + offset * (step / distance)
    return np.clip(point, np.minimum(a, b), np.maximum(a, b))


def is_simple_segment(env: Environment, start, end, tolerance: float = GEOM_TOLERANCE) -> bool:
    """True when the segment crosses at most one region boundary in total.

    Each region contributes its slab-clipped entry/exit parameters; events in
    the open unit interval count as crossings. Segments that graze a boundary
    (touch a face, edge, or corner, run inside a face plane, or have an
    endpoint on a boundary) are rejected outright: their crossing count is
    ambiguous at floating-point precision, and rejecting keeps endpoint
    labels sound.
    """
    a = np.asarray(start, dtype=float)
    b = np.asarray(end, dtype=float)
    for point in (a, b):
        if point.shape != (env.dimension,):
            raise ValueError("segment endpoint has wrong dimension")
        if not env.domain.contains(point):
            raise ValueError(f"segment endpoint {point.tolist()} outside the domain")
    direction = b - a
    length = float(np.linalg.norm(direction))
    if length == 0.0:
        return True
    t_tol = tolerance / length
    crossings = 0
    for region in env.regions:
        lo, hi = region.box.lo, region.box.hi
        still = direction == 0.0
        if np.any(still & ((a < lo - tolerance) | (a > hi + tolerance))):
            continue  # parallel axis entirely outside this region
        runs_on_face = bool(np.any(still & ((a <= lo + tolerance) | (a >= hi - tolerance))))
        with np.errstate(divide="ignore", invalid="ignore"):
            t_lo = np.where(still, -math.inf, (lo - a) / direction)
            t_hi = np.where(still, math.inf, (hi - a) / direction)
        enter = float(np.max(np.minimum(t_lo, t_hi)))
        leave = float(np.min(np.maximum(t_lo, t_hi)))
        if enter > leave + t_tol:
            continue  # line misses the box
        if leave < -t_tol or enter > 1.0 + t_tol:
            continue  # box intersection lies beyond the segment
        if runs_on_face:
            return False
        if leave - enter <= t_tol:
            return False  # touches a corner or edge only
        for t in (enter, leave):
            if -t_tol <= t <= t_tol or 1.0 - t_tol <= t <= 1.0 + t_tol:
                return False  # boundary event at a segment endpoint
            if t_tol < t < 1.0 - t_tol:
                crossings += 1
                if crossings > 1:
                    return False
    return crossings <= 1


def near(tsys, point, radius: float) -> List[int]:
    """Ids of states within `radius` of the point, closest first."""
    distances = tsys.distances_to(point)
    ids = np.nonzero(distances <= radius)[0]
    ranked = sorted(ids.tolist(), key=lambda i: (distances[i], i))
    return ranked


def far(tsys, point, inner: float, outer: float) -> List[int]:
    """Like near(outer), but empty when any state is closer than `inner`."""
    distances = tsys.distances_to(point)
    if distances.size and float(distances.min()) < inner:
        return []
    ids = np.nonzero(distances <= outer)[0]
    return sorted(ids.tolist(), key=lambda i: (distances[i], i))


def spacing_bound(volume: float, dimension: int) -> float:
    """Scale below which a fresh sample can always keep its distance.

    Equals (1/sqrt(pi)) * (volume * Gamma(dimension/2 + 1)) ** (1/dimension);
    with k existing states the guaranteed-room radius shrinks as k**(-1/dim).
    Uses log-Gamma so high dimensions stay in range.
    """
    if volume <= 0.0:
        raise ValueError("volume must be positive")
    if dimension < 1:
        raise ValueError("dimension must be at least 1")
    log_term = (math.log(volume) + math.lgamma(dimension / 2.0 + 1.0)) / dimension
    return math.exp(log_term) / math.sqrt(math.pi)


@dataclass(frozen=True)
class RadiusSchedule:
    """Shrinking connection radii: inner(k) gates admission (sparsity),
    outer(k) = ratio * inner(k) bounds connection attempts."""

    scale: float
    ratio: float
    dimension: int

    def __post_init__(self):
        if self.scale <= 0.0:
            raise ValueError("scale must be positive")
        if self.ratio <= 1.0:
            raise ValueError("ratio must exceed 1")
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")

    @classmethod
    def for_environment(
        cls, env: Environment, ratio: float = 2.0, safety: float = 0.5
    ) -> "RadiusSchedule":
        if not (0.0 < safety <= 1.0):
            raise ValueError("safety must lie in (0, 1]")
        scale = safety * spacing_bound(env.domain.volume, env.dimension)
        return cls(scale, ratio, env.dimension)

    def inner(self, count: int) -> float:
        if count < 1:
            raise ValueError("state count must be at least 1")
        return self.scale * count ** (-1.0 / self.dimension)

    def outer(self, count: int) -> float:
        return self.ratio * self.inner(count)

    def radii(self, count: int) -> Tuple[float, float]:
        base = self.inner(count)
        return base, self.ratio * base
