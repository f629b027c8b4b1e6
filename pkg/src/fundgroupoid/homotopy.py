"""Homotopy-class arithmetic for polylines in a plane with punctures.

Every class is identified by its endpoints and the continuous angle swept
around each puncture. For a single puncture this is a complete invariant; for
several punctures it is the abelianised invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ClearanceError, EndpointMismatchError, NotClosedError

TWO_PI = 2.0 * math.pi
COINCIDENCE_TOL = 1e-9
SWEPT_TOL = 1e-7
ROUNDING_TOL = 1e-6

Point = tuple[float, float]


def as_point(p) -> Point:
    x, y = p
    return (float(x), float(y))


def points_coincide(p, q, tol: float = COINCIDENCE_TOL) -> bool:
    return math.hypot(p[0] - q[0], p[1] - q[1]) <= tol


@dataclass(frozen=True)
class PuncturedPlane:
    """The plane minus finitely many points.

    ``clearance`` is the smallest distance any path segment may come to a
    puncture.
    """

    punctures: tuple[Point, ...]
    clearance: float = 1e-3

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.punctures)
        object.__setattr__(self, "punctures", pts)
        if not self.clearance > 0:
            raise ValueError("clearance must be positive")
        for i, p in enumerate(pts):
            for q in pts[i + 1 :]:
                if p == q:
                    raise ValueError(f"duplicate puncture {p}")

    @classmethod
    def origin(cls, clearance: float = 1e-3) -> "PuncturedPlane":
        return cls(((0.0, 0.0),), clearance)

    def __len__(self):
        return len(self.punctures)

    def to_json(self) -> dict:
        return {"punctures": [list(p) for p in self.punctures], "clearance": self.clearance}

    @classmethod
    def from_json(cls, data: dict) -> "PuncturedPlane":
        return cls(tuple(tuple(p) for p in data["punctures"]), float(data.get("clearance", 1e-3)))


@dataclass(frozen=True, eq=False)
class Polyline:
    """A piecewise-linear path, source = first vertex, target = last."""

    vertices: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 2:
            raise ValueError("a polyline needs at least two 2-D vertices")
        if not np.isfinite(v).all():
            raise ValueError("polyline vertices must be finite")
        if (np.abs(np.diff(v, axis=0)).sum(axis=1) == 0).any():
            raise ValueError("consecutive polyline vertices must be distinct")
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)

    @property
    def source(self) -> Point:
        return as_point(self.vertices[0])

    @property
    def target(self) -> Point:
        return as_point(self.vertices[-1])

    @property
    def is_closed(self) -> bool:
        return points_coincide(self.source, self.target)

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, Polyline):
            return NotImplemented
        return np.array_equal(self.vertices, other.vertices)

    def __hash__(self):
        return hash(self.vertices.tobytes())

    def __repr__(self):
        return f"Polyline({len(self)} vertices, {self.source} -> {self.target})"

    def to_json(self) -> list:
        return self.vertices.tolist()

    @classmethod
    def from_json(cls, data) -> "Polyline":
        return cls(np.asarray(data, dtype=np.float64))


@dataclass(frozen=True)
class HomotopyClass:
    """Endpoints plus the angle swept around each puncture."""

    source: Point
    target: Point
    swept: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "source", as_point(self.source))
        object.__setattr__(self, "target", as_point(self.target))
        object.__setattr__(self, "swept", tuple(float(s) for s in self.swept))

    @classmethod
    def identity(cls, point, n_punctures: int = 1) -> "HomotopyClass":
        p = as_point(point)
        return cls(p, p, (0.0,) * n_punctures)

    @property
    def is_loop(self) -> bool:
        return points_coincide(self.source, self.target)

    def then(self, other: "HomotopyClass") -> "HomotopyClass":
        """Class of "self, then other"; defined only when endpoints meet."""
        if not points_coincide(self.target, other.source):
            raise EndpointMismatchError(f"target {self.target} != source {other.source}")
        return HomotopyClass(
            self.source, other.target, tuple(a + b for a, b in zip(self.swept, other.swept))
        )

    def inverse(self) -> "HomotopyClass":
        return HomotopyClass(self.target, self.source, tuple(-s for s in self.swept))

    def same_as(self, other: "HomotopyClass", tol: float = SWEPT_TOL) -> bool:
        return (
            points_coincide(self.source, other.source)
            and points_coincide(self.target, other.target)
            and len(self.swept) == len(other.swept)
            and all(abs(a - b) <= tol for a, b in zip(self.swept, other.swept))
        )

    def to_json(self) -> dict:
        return {"source": list(self.source), "target": list(self.target), "swept": list(self.swept)}


def _lift_one(space: PuncturedPlane, path: Polyline, k: int) -> float:
    cx, cy = space.punctures[k]
    lift, dist = kernels.segment_lift(path.vertices, cx, cy)
    if dist < space.clearance:
        raise ClearanceError(
            f"path passes within {dist:.3g} of puncture {k} at {space.punctures[k]} "
            f"(clearance {space.clearance:g})"
        )
    return lift


def angle_lift(space: PuncturedPlane, path: Polyline, puncture: int = 0) -> float:
    """Continuous angle (radians) swept by ``path`` around one puncture."""
    return _lift_one(space, path, puncture)


def lifts(space: PuncturedPlane, path: Polyline) -> tuple[float, ...]:
    return tuple(_lift_one(space, path, k) for k in range(len(space)))


def round_turns(angle: float) -> int:
    """Round an angle to whole turns; the residual must be tiny."""
    turns = angle / TWO_PI
    n = round(turns)
    if abs(turns - n) > ROUNDING_TOL:
        raise ValueError(f"angle {angle!r} is not a whole number of turns")
    return int(n)


def winding_number(space: PuncturedPlane, loop: Polyline) -> tuple[int, ...]:
    if not loop.is_closed:
        raise NotClosedError(f"loop starts at {loop.source} but ends at {loop.target}")
    return tuple(round_turns(s) for s in lifts(space, loop))


def concat(a: Polyline, b: Polyline) -> Polyline:
    if not points_coincide(a.target, b.source):
        raise EndpointMismatchError(f"target {a.target} != source {b.source}")
    return Polyline(np.vstack([a.vertices[:-1], b.vertices]))


def reverse(p: Polyline) -> Polyline:
    return Polyline(p.vertices[::-1])


def invert_point(p: Polyline, space: PuncturedPlane | None = None) -> Polyline:
    """Point-reflect every vertex through the origin.

    When ``space`` is given, the reflected path is checked against it.
    """
    q = Polyline(-p.vertices)
    if space is not None:
        lifts(space, q)
    return q


def homotopy_class(space: PuncturedPlane, path: Polyline) -> HomotopyClass:
    return HomotopyClass(path.source, path.target, lifts(space, path))


def homotopic(space: PuncturedPlane, p: Polyline, q: Polyline, tol: float = SWEPT_TOL) -> bool:
    return homotopy_class(space, p).same_as(homotopy_class(space, q), tol)


def arc(center, radius: float, start: float, sweep: float, segments: int = 64) -> Polyline:
    """Circular arc sampled at ``segments + 1`` points; positive sweep is CCW."""
    t = start + sweep * np.arange(segments + 1) / segments
    cx, cy = center
    return Polyline(np.column_stack([cx + radius * np.cos(t), cy + radius * np.sin(t)]))


def half_circle(radius: float, omega: float, center=(0.0, 0.0), segments: int = 64) -> Polyline:
    """Counter-clockwise half-circle from angle ``omega`` to ``omega + pi``."""
    return arc(center, radius, omega, math.pi, segments)


def polar_angle(point, center=(0.0, 0.0)) -> float:
    """Angle of ``point`` about ``center`` in [0, 2*pi), cut on the +x ray."""
    theta = math.atan2(point[1] - center[1], point[0] - center[0]) % TWO_PI
    return 0.0 if theta >= TWO_PI else theta
