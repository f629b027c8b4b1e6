"""One-dimensional representations of the fundamental groupoid.

A representation is assembled from a base-point, a mesh (a chosen path from
the base-point to every point), unit phases on the mesh paths, and a U(1)
representation of the fundamental group at the base-point. Any path class
``[q]`` from ``a`` to ``b`` is evaluated by closing it through the mesh::

    chi([q]) = conj(w(a)) * D(winding of mesh(a) . q . mesh(b)^-1) * w(b)

Changing the mesh weights ``w`` multiplies ``chi`` by a factor that depends
only on the endpoints, which is why such a change is unobservable in ``|K|``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ClearanceError, MeshLookupError
from .homotopy import (
    TWO_PI,
    HomotopyClass,
    Point,
    Polyline,
    PuncturedPlane,
    as_point,
    half_circle,
    homotopy_class,
    invert_point,
    lifts,
    points_coincide,
    polar_angle,
    round_turns,
)

PHASE_TOL = 1e-9
MAX_SPIRAL_SEGMENTS = 1 << 16


@dataclass(frozen=True)
class GroupRepZ:
    """U(1) representation of the integers, ``n -> exp(i * phi * n)``."""

    phi: float

    def value(self, n: int) -> complex:
        return cmath.exp(1j * self.phi * n)

    @property
    def generator(self) -> complex:
        return self.value(1)


def spiral_mesh(
    r: float,
    theta: float,
    *,
    rho0: float = 1.0,
    center=(0.0, 0.0),
    segments: int = 16,
    clearance: float = 1e-3,
) -> Polyline | None:
    """Sample the spiral ``t -> center + rho0**(1-t) r**t e^{i t theta}``.

    Runs from the base-point ``center + (rho0, 0)`` to the point with polar
    coordinates ``(r, theta)`` about ``center``. Returns ``None`` when the
    point is the base-point itself (the constant path). The segment count is
    doubled until every chord respects ``clearance`` and the polyline's angle
    lift matches ``theta`` to 1e-9.
    """
    if not 0.0 <= theta < TWO_PI:
        raise ValueError(f"theta must lie in [0, 2*pi), got {theta!r}")
    if r <= clearance or rho0 <= clearance:
        raise ClearanceError(f"radius {r:g} is inside the clearance {clearance:g}")
    if theta == 0.0 and r == rho0:
        return None
    cx, cy = center
    m = max(int(segments), 16)
    while m <= MAX_SPIRAL_SEGMENTS:
        t = np.arange(m + 1) / m
        rad = rho0 ** (1.0 - t) * r**t
        ang = t * theta
        verts = np.column_stack([cx + rad * np.cos(ang), cy + rad * np.sin(ang)])
        verts[-1] = (cx + r * math.cos(theta), cy + r * math.sin(theta))
        lift, dist = kernels.segment_lift(verts, cx, cy)
        if dist >= clearance and abs(lift - theta) <= PHASE_TOL:
            return Polyline(verts)
        m *= 2
    raise ClearanceError(f"cannot sample spiral to ({r:g}, {theta:g}) within clearance")


def _key(p, ndigits: int = 9):
    return (round(float(p[0]), ndigits), round(float(p[1]), ndigits))


@dataclass(frozen=True, eq=False)
class Mesh:
    """A choice of path from ``basepoint`` to every admissible point.

    ``kind`` is ``"spiral"`` (about ``center``; the base-point must lie on the
    +x ray from it), ``"straight"`` (segments from the base-point), ``"table"``
    (explicit polylines keyed by end point) or ``"custom"`` (``func``).
    """

    basepoint: Point
    kind: str = "spiral"
    center: Point = (0.0, 0.0)
    segments: int = 16
    clearance: float = 1e-3
    table: dict = field(default_factory=dict)
    func: Callable[[Point], Polyline | None] | None = None

    def __post_init__(self):
        object.__setattr__(self, "basepoint", as_point(self.basepoint))
        object.__setattr__(self, "center", as_point(self.center))
        if self.kind not in ("spiral", "straight", "table", "custom"):
            raise ValueError(f"unknown mesh kind {self.kind!r}")
        if self.kind == "spiral":
            dx = self.basepoint[0] - self.center[0]
            dy = self.basepoint[1] - self.center[1]
            if dx <= 0 or abs(dy) > 1e-12:
                raise ValueError("spiral mesh base-point must lie on the +x ray from its center")
        if self.kind == "table":
            object.__setattr__(
                self, "table", {_key(k): v for k, v in dict(self.table).items()}
            )
        if self.kind == "custom" and self.func is None:
            raise ValueError("custom mesh needs func")

    @classmethod
    def spiral(cls, center=(0.0, 0.0), rho0: float = 1.0, clearance: float = 1e-3, segments: int = 16):
        c = as_point(center)
        return cls((c[0] + rho0, c[1]), "spiral", c, segments, clearance)

    @classmethod
    def straight(cls, basepoint):
        return cls(basepoint, "straight")

    @classmethod
    def from_table(cls, basepoint, paths: Iterable[Polyline]):
        table = {}
        for p in paths:
            if not points_coincide(p.source, basepoint):
                raise ValueError(f"mesh path starts at {p.source}, not at the base-point")
            table[p.target] = p
        return cls(basepoint, "table", table=table)

    def path_to(self, a) -> Polyline | None:
        """Mesh path from the base-point to ``a``; ``None`` for the base-point."""
        a = as_point(a)
        if points_coincide(a, self.basepoint):
            return None
        if self.kind == "spiral":
            dx, dy = a[0] - self.center[0], a[1] - self.center[1]
            rho0 = self.basepoint[0] - self.center[0]
            return spiral_mesh(
                math.hypot(dx, dy),
                polar_angle(a, self.center),
                rho0=rho0,
                center=self.center,
                segments=self.segments,
                clearance=self.clearance,
            )
        if self.kind == "straight":
            return Polyline([self.basepoint, a])
        if self.kind == "table":
            try:
                return self.table[_key(a)]
            except KeyError:
                raise MeshLookupError(f"mesh table has no path to {a}") from None
        return self.func(a)

    def path_class(self, space: PuncturedPlane, a) -> HomotopyClass:
        p = self.path_to(a)
        if p is None:
            return HomotopyClass.identity(self.basepoint, len(space))
        return homotopy_class(space, p)

    def swept_to(self, space: PuncturedPlane, a) -> tuple[float, ...]:
        p = self.path_to(a)
        if p is None:
            return (0.0,) * len(space)
        return lifts(space, p)


@dataclass(frozen=True, eq=False)
class MeshWeights:
    """Unit phases attached to the mesh paths, equal to 1 at the base-point.

    The reversed mesh path carries the reciprocal (conjugate) phase.
    """

    kind: str = "unity"
    phi: float = 0.0
    center: Point = (0.0, 0.0)
    table: dict = field(default_factory=dict)
    func: Callable[[Point], complex] | None = None

    @classmethod
    def unity(cls):
        return cls("unity")

    @classmethod
    def from_table(cls, phases: dict):
        """``phases`` maps points to phase angles in radians."""
        return cls("table", table={_key(k): float(v) for k, v in phases.items()})

    @classmethod
    def from_function(cls, f: Callable[[Point], complex], basepoint=None):
        """Wrap ``f``; when ``basepoint`` is given, rescale so it maps to 1."""
        if basepoint is None:
            return cls("custom", func=f)
        w0 = complex(f(as_point(basepoint)))
        return cls("custom", func=lambda p: complex(f(p)) / w0)

    def weight_at(self, p) -> complex:
        if self.kind == "unity":
            return 1.0 + 0.0j
        if self.kind == "symmetric":
            return cmath.exp(1j * self.phi * polar_angle(p, self.center) / TWO_PI)
        if self.kind == "table":
            try:
                return cmath.exp(1j * self.table[_key(p)])
            except KeyError:
                raise MeshLookupError(f"weight table has no entry for {tuple(p)}") from None
        w = complex(self.func(as_point(p)))
        if abs(abs(w) - 1.0) > PHASE_TOL:
            raise ValueError(f"mesh weight at {tuple(p)} has modulus {abs(w)!r}, not 1")
        return w


def symmetric_weights(phi: float, center=(0.0, 0.0)) -> MeshWeights:
    """Weights ``exp(i * phi * theta / 2pi)`` with ``theta`` in [0, 2pi)."""
    return MeshWeights("symmetric", phi=float(phi), center=as_point(center))


@dataclass(frozen=True, eq=False)
class GroupoidRep:
    space: PuncturedPlane
    mesh: Mesh
    weights: MeshWeights
    group_rep: tuple[GroupRepZ, ...]

    def __post_init__(self):
        reps = self.group_rep
        if isinstance(reps, GroupRepZ):
            reps = (reps,)
        reps = tuple(reps)
        if len(reps) != len(self.space):
            raise ValueError("need one group representation per puncture")
        object.__setattr__(self, "group_rep", reps)
        w0 = self.weights.weight_at(self.mesh.basepoint)
        if abs(w0 - 1.0) > PHASE_TOL:
            raise ValueError(f"mesh weight at the base-point must be 1, got {w0!r}")

    @property
    def phi(self) -> float:
        return self.group_rep[0].phi

    def D(self, windings: Sequence[int]) -> complex:
        out = 1.0 + 0.0j
        for rep, n in zip(self.group_rep, windings):
            out *= rep.value(n)
        return out


def symmetric_rep(phi: float, space: PuncturedPlane | None = None, segments: int = 16) -> GroupoidRep:
    """Spiral mesh from (1, 0) with weights ``exp(i phi theta / 2pi)``.

    Every counter-clockwise half-circle about the origin evaluates to
    ``exp(i phi / 2)`` under this representation.
    """
    space = space or PuncturedPlane.origin()
    mesh = Mesh.spiral((0.0, 0.0), 1.0, clearance=space.clearance, segments=segments)
    return GroupoidRep(space, mesh, symmetric_weights(phi), GroupRepZ(phi))


def ldw_rep(phi: float, mesh: Mesh | None = None, space: PuncturedPlane | None = None) -> GroupoidRep:
    """Representation with all mesh weights equal to 1."""
    space = space or PuncturedPlane.origin()
    mesh = mesh or Mesh.spiral((0.0, 0.0), 1.0, clearance=space.clearance)
    return GroupoidRep(space, mesh, MeshWeights.unity(), tuple(GroupRepZ(phi) for _ in space.punctures))


def _as_class(rep: GroupoidRep, path) -> HomotopyClass:
    if isinstance(path, HomotopyClass):
        return path
    return homotopy_class(rep.space, path)


def loop_projection(rep: GroupoidRep, path) -> tuple[int, ...]:
    """Winding numbers of ``mesh(a) . path . mesh(b)^-1``, per puncture."""
    cls = _as_class(rep, path)
    la = rep.mesh.swept_to(rep.space, cls.source)
    lb = rep.mesh.swept_to(rep.space, cls.target)
    return tuple(round_turns(x + s - y) for x, s, y in zip(la, cls.swept, lb))


def chi(rep: GroupoidRep, path) -> complex:
    """Evaluate the representation on a polyline or a homotopy class."""
    cls = _as_class(rep, path)
    n = loop_projection(rep, cls)
    wa = rep.weights.weight_at(cls.source)
    wb = rep.weights.weight_at(cls.target)
    return wa.conjugate() * rep.D(n) * wb


def class_transport(rep: GroupoidRep, a, b, n) -> HomotopyClass:
    """The class from ``a`` to ``b`` whose mesh-closed loop winds ``n`` times."""
    if isinstance(n, (int, np.integer)):
        n = (int(n),) + (0,) * (len(rep.space) - 1)
    la = rep.mesh.swept_to(rep.space, a)
    lb = rep.mesh.swept_to(rep.space, b)
    swept = tuple(y - x + TWO_PI * k for x, y, k in zip(la, lb, n))
    return HomotopyClass(as_point(a), as_point(b), swept)


def _class_offsets(n_punctures: int, per_pair: int) -> list[tuple[int, ...]]:
    seq = [0]
    k = 1
    while len(seq) < per_pair:
        seq += [k, -k]
        k += 1
    seq = seq[:per_pair]
    out = []
    for p in range(n_punctures):
        for k in seq:
            v = [0] * n_punctures
            v[p] = k
            if tuple(v) not in out:
                out.append(tuple(v))
    return out


def endpoint_ratio(r1: GroupoidRep, r2: GroupoidRep, a, b, classes_per_pair: int = 5) -> list[complex]:
    """``chi2 / chi1`` over several distinct classes from ``a`` to ``b``."""
    return [
        chi(r2, cls) / chi(r1, cls)
        for cls in (class_transport(r1, a, b, n) for n in _class_offsets(len(r1.space), classes_per_pair))
    ]


def compatible(
    r1: GroupoidRep,
    r2: GroupoidRep,
    endpoints: Iterable[tuple],
    classes_per_pair: int = 5,
    tol: float = PHASE_TOL,
) -> bool:
    """True when ``chi2 / chi1`` depends only on the endpoints."""
    for a, b in endpoints:
        ratios = endpoint_ratio(r1, r2, a, b, classes_per_pair)
        if any(abs(r - ratios[0]) > tol for r in ratios[1:]):
            return False
    return True


def gauge_transform(rep: GroupoidRep, new_weights: MeshWeights) -> GroupoidRep:
    return replace(rep, weights=new_weights)


def rebase(rep: GroupoidRep, new_mesh: Mesh) -> GroupoidRep:
    """Move to another base-point/mesh, transporting the weights.

    The new mesh weight at ``x`` is ``chi`` of the new mesh path to ``x``
    under the old representation, so the result agrees with ``rep`` on every
    class.
    """
    space = rep.space

    def weight(x):
        return chi(rep, new_mesh.path_class(space, x))

    return GroupoidRep(space, new_mesh, MeshWeights.from_function(weight), rep.group_rep)


def inversion_defect(rep: GroupoidRep, samples: Iterable[tuple[float, float]], segments: int = 64) -> float:
    """Largest ``|chi(q) - chi(-q)|`` over CCW half-circles ``q`` at (r, omega).

    ``-q`` is the point reflection of ``q`` through the origin.
    """
    if len(rep.space) != 1 or rep.space.punctures[0] != (0.0, 0.0):
        raise ValueError("inversion defect needs a single puncture at the origin")
    worst = 0.0
    for r, omega in samples:
        q = half_circle(r, omega, segments=segments)
        worst = max(worst, abs(chi(rep, q) - chi(rep, invert_point(q, rep.space))))
    return worst


def halfcircle_phases(rep: GroupoidRep, samples: Iterable[tuple[float, float]], segments: int = 64) -> list[complex]:
    return [chi(rep, half_circle(r, omega, segments=segments)) for r, omega in samples]


# -- JSON configuration -------------------------------------------------------

def rep_from_json(data: dict) -> GroupoidRep:
    """Build a representation from ``{basepoint, mesh_kind, phi, weights}``.

    Optional keys: ``space`` ({punctures, clearance}; default one puncture at
    the origin), ``center`` (spiral center; default the first puncture),
    ``mesh_table`` (list of polylines for a table mesh). ``weights`` is
    ``"unity"``, ``"symmetric"``, ``{"symmetric": phi}`` or
    ``{"table": [[x, y, phase], ...]}``.
    """
    space = PuncturedPlane.from_json(data["space"]) if "space" in data else PuncturedPlane.origin()
    phi = data.get("phi", 0.0)
    phis = [float(p) for p in phi] if isinstance(phi, (list, tuple)) else [float(phi)] * len(space)
    center = as_point(data.get("center", space.punctures[0]))
    kind = data.get("mesh_kind", "spiral")
    basepoint = as_point(data.get("basepoint", (center[0] + 1.0, center[1])))
    if kind == "spiral":
        mesh = Mesh(basepoint, "spiral", center, int(data.get("segments", 16)), space.clearance)
    elif kind == "straight":
        mesh = Mesh.straight(basepoint)
    elif kind == "table":
        mesh = Mesh.from_table(basepoint, [Polyline.from_json(p) for p in data["mesh_table"]])
    else:
        raise ValueError(f"unknown mesh_kind {kind!r}")

    w = data.get("weights", "unity")
    if w == "unity":
        weights = MeshWeights.unity()
    elif w == "symmetric":
        weights = symmetric_weights(phis[0], center)
    elif isinstance(w, dict) and "symmetric" in w:
        weights = symmetric_weights(float(w["symmetric"]), center)
    elif isinstance(w, dict) and "table" in w:
        weights = MeshWeights.from_table({(x, y): ph for x, y, ph in w["table"]})
    else:
        raise ValueError(f"unrecognised weights {w!r}")
    return GroupoidRep(space, mesh, weights, tuple(GroupRepZ(p) for p in phis))
