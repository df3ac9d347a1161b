"""The spider graph: N legs (half-lines or segments) glued at one origin.

Points are (leg, coordinate) pairs; the origin is shared by all legs and
is canonicalized to leg 1 so that equality is structural.  Leg indices
are 1-based everywhere in the public API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "SpiderPoint",
    "SpiderGraph",
    "ORIGIN",
    "make_spider",
    "distance",
    "graph_from_json",
    "graph_to_json",
]


@dataclass(frozen=True)
class SpiderPoint:
    """A location on a spider graph: leg index and distance from the origin."""

    leg: int
    x: float

    def __post_init__(self):
        object.__setattr__(self, "leg", int(self.leg))
        object.__setattr__(self, "x", float(self.x))
        if self.leg < 1:
            raise ValueError(f"leg index must be >= 1, got {self.leg}")
        if not (self.x >= 0.0):  # also rejects NaN
            raise ValueError(f"coordinate must be >= 0, got {self.x}")
        if self.x == 0.0:
            object.__setattr__(self, "leg", 1)  # canonical origin

    @property
    def is_origin(self) -> bool:
        return self.x == 0.0


ORIGIN = SpiderPoint(1, 0.0)


@dataclass(frozen=True)
class SpiderGraph:
    """N >= 2 legs with lengths in (0, inf]; ``math.inf`` marks a full half-line."""

    n_legs: int
    lengths: tuple[float, ...]

    @property
    def all_infinite(self) -> bool:
        return all(math.isinf(length) for length in self.lengths)

    @property
    def all_finite(self) -> bool:
        return all(math.isfinite(length) for length in self.lengths)

    def leg_length(self, leg: int) -> float:
        if not 1 <= leg <= self.n_legs:
            raise ValueError(f"leg {leg} outside [1, {self.n_legs}]")
        return self.lengths[leg - 1]

    def validate_point(self, p: SpiderPoint) -> SpiderPoint:
        """Check that ``p`` lies on this graph, returning it unchanged."""
        if p.leg > self.n_legs:
            raise ValueError(f"point on leg {p.leg} but graph has {self.n_legs} legs")
        if p.x > self.leg_length(p.leg):
            raise ValueError(
                f"coordinate {p.x} exceeds length {self.leg_length(p.leg)} of leg {p.leg}"
            )
        return p


def make_spider(n_legs: int, lengths: Sequence[float]) -> SpiderGraph:
    """Build and validate a spider graph.

    ``lengths`` must hold ``n_legs`` entries, each a strictly positive
    real or ``math.inf``.
    """
    n_legs = int(n_legs)
    if n_legs < 2:
        raise ValueError(f"a spider needs at least 2 legs, got {n_legs}")
    lengths = tuple(float(length) for length in lengths)
    if len(lengths) != n_legs:
        raise ValueError(f"expected {n_legs} leg lengths, got {len(lengths)}")
    for i, length in enumerate(lengths, start=1):
        if math.isnan(length) or length <= 0.0:
            raise ValueError(f"leg {i} has invalid length {length}")
    return SpiderGraph(n_legs, lengths)


def distance(p: SpiderPoint, q: SpiderPoint) -> float:
    """Graph metric: |x - y| on a shared leg, x + y across the origin."""
    if p.leg == q.leg:
        return abs(p.x - q.x)
    return p.x + q.x


def graph_from_json(obj: dict) -> SpiderGraph:
    """Parse the JSON descriptor {"n_legs": int, "lengths": [number | "inf"]}."""
    if not isinstance(obj, dict):
        raise ValueError("graph descriptor must be a JSON object")
    unknown = set(obj) - {"n_legs", "lengths"}
    if unknown:
        raise ValueError(f"unknown graph descriptor fields: {sorted(unknown)}")
    try:
        n_legs = obj["n_legs"]
        raw = obj["lengths"]
    except KeyError as exc:
        raise ValueError(f"graph descriptor missing field {exc}") from None
    lengths = [math.inf if isinstance(v, str) and v.lower() == "inf" else v
               for v in raw]
    return make_spider(n_legs, lengths)


def graph_to_json(g: SpiderGraph) -> dict:
    return {
        "n_legs": g.n_legs,
        "lengths": ["inf" if math.isinf(length) else length for length in g.lengths],
    }
