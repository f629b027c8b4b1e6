"""Homotopy-sector path integral on a square lattice around one puncture.

All nearest-neighbour walks of a fixed length between two sites are
enumerated exhaustively, split into sectors by the winding of their
mesh-closed loop, and summed with free-particle phases ``exp(i S / hbar)``.
The total propagator pairs each sector with the representation's weight.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BudgetExceeded, EmptySectorError
from .homotopy import TWO_PI, HomotopyClass, Polyline, PuncturedPlane, lifts, polar_angle, round_turns
from .representation import GroupoidRep, GroupRepZ, Mesh, MeshWeights, chi

DEFAULT_MAX_STEPS = 14
DEFAULT_NODE_CAP = 1 << 20
COUNT_NODE_CAP = 4**DEFAULT_MAX_STEPS

_MOVES = {"E": (1, 0), "N": (0, 1), "S": (0, -1), "W": (-1, 0)}
_ORDER = "ENSW"


@dataclass(frozen=True)
class LatticeSpec:
    """Square lattice ``|i|, |j| <= extent`` with one puncture at a plaquette center."""

    spacing: float = 1.0
    extent: int = 4
    puncture_offset: tuple[float, float] | None = None
    mass: float = 1.0
    hbar: float = 1.0
    dt: float = 1.0
    clearance: float | None = None

    def __post_init__(self):
        for name in ("spacing", "mass", "hbar", "dt"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.extent < 1:
            raise ValueError("extent must be at least 1")
        s = self.spacing
        off = self.puncture_offset or (0.5 * s, 0.5 * s)
        off = (float(off[0]), float(off[1]))
        for c in off:
            frac = c / s - 0.5
            if abs(frac - round(frac)) > 1e-9:
                raise ValueError(f"puncture {off} is not at a plaquette center")
        object.__setattr__(self, "puncture_offset", off)
        clearance = 0.4 * s if self.clearance is None else float(self.clearance)
        if not 0 < clearance < 0.5 * s:
            raise ValueError("clearance must lie in (0, spacing / 2)")
        object.__setattr__(self, "clearance", clearance)

    @property
    def plaquette(self) -> tuple[int, int]:
        """Lower-left site of the punctured plaquette."""
        px, py = self.puncture_offset
        return (math.floor(px / self.spacing), math.floor(py / self.spacing))

    @property
    def space(self) -> PuncturedPlane:
        return PuncturedPlane((self.puncture_offset,), self.clearance)

    def point(self, site) -> tuple[float, float]:
        return (site[0] * self.spacing, site[1] * self.spacing)

    def check_site(self, site) -> tuple[int, int]:
        i, j = int(site[0]), int(site[1])
        if (i, j) != tuple(site) or max(abs(i), abs(j)) > self.extent:
            raise ValueError(f"{site} is not a site of the lattice")
        return (i, j)

    def step_action(self) -> float:
        """Action of one nearest-neighbour step."""
        return 0.5 * self.mass * (self.spacing / self.dt) ** 2 * self.dt

    def default_mesh(self) -> Mesh:
        """Spiral mesh about the puncture with base-point one spacing to its right."""
        return Mesh.spiral(self.puncture_offset, self.spacing, clearance=self.clearance)

    def to_json(self) -> dict:
        return {
            "spacing": self.spacing,
            "extent": self.extent,
            "puncture_offset": list(self.puncture_offset),
            "mass": self.mass,
            "hbar": self.hbar,
            "dt": self.dt,
            "clearance": self.clearance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LatticeSpec":
        off = data.get("puncture_offset")
        return cls(
            spacing=float(data.get("spacing", 1.0)),
            extent=int(data.get("extent", 4)),
            puncture_offset=tuple(off) if off is not None else None,
            mass=float(data.get("mass", 1.0)),
            hbar=float(data.get("hbar", 1.0)),
            dt=float(data.get("dt", 1.0)),
            clearance=data.get("clearance"),
        )


@dataclass(frozen=True)
class Walk:
    """A lattice walk: start site plus a string over ``E N S W``."""

    start: tuple[int, int]
    steps: str
    spacing: float = 1.0

    def __len__(self):
        return len(self.steps)

    def sites(self) -> list[tuple[int, int]]:
        x, y = self.start
        out = [(x, y)]
        for s in self.steps:
            dx, dy = _MOVES[s]
            x, y = x + dx, y + dy
            out.append((x, y))
        return out

    @property
    def end(self) -> tuple[int, int]:
        return self.sites()[-1]

    @property
    def polyline(self) -> Polyline | None:
        """The walk as a polyline; ``None`` for the zero-step walk."""
        if not self.steps:
            return None
        return Polyline(np.asarray(self.sites(), dtype=np.float64) * self.spacing)


@dataclass(frozen=True)
class SectorAmplitudes:
    """Partial amplitudes keyed by winding of the mesh-closed loop.

    The class of sector ``n`` runs from ``a`` to ``b`` and sweeps
    ``base_swept + 2*pi*n`` around the puncture.
    """

    amplitudes: dict[int, complex]
    endpoints: tuple[tuple[int, int], tuple[int, int]]
    steps: int
    base_swept: float
    counts: dict[int, int] = field(default_factory=dict)
    total_count: int = 0
    spacing: float = 1.0

    def sector_class(self, n: int) -> HomotopyClass:
        a, b = self.endpoints
        s = self.spacing
        return HomotopyClass((a[0] * s, a[1] * s), (b[0] * s, b[1] * s), (self.base_swept + TWO_PI * n,))

    def unweighted_sum(self) -> complex:
        return sum((self.amplitudes[n] for n in sorted(self.amplitudes)), 0j)


@dataclass(frozen=True)
class TotalPropagator:
    value: complex
    flux: float
    endpoints: tuple[tuple[int, int], tuple[int, int]]
    steps: int

    @property
    def abs(self) -> float:
        return abs(self.value)


def _check_budget(nsteps: int, max_steps: int, node_cap: int):
    if nsteps < 0:
        raise ValueError("step count must be non-negative")
    if nsteps > max_steps:
        raise BudgetExceeded(f"{nsteps} steps exceeds the cap of {max_steps}")
    if 4**nsteps > node_cap:
        raise BudgetExceeded(f"4**{nsteps} walks exceeds the node cap {node_cap}")


def enumerate_walks(
    spec: LatticeSpec,
    a,
    b,
    nsteps: int,
    *,
    max_steps: int = DEFAULT_MAX_STEPS,
    node_cap: int = DEFAULT_NODE_CAP,
) -> list[Walk]:
    """All ``nsteps``-step walks from ``a`` to ``b``, in lexicographic step order."""
    a, b = spec.check_site(a), spec.check_site(b)
    _check_budget(nsteps, max_steps, node_cap)
    ext = spec.extent
    out: list[Walk] = []
    buf: list[str] = []

    def dfs(x, y, left):
        if left == 0:
            if (x, y) == b:
                out.append(Walk(a, "".join(buf), spec.spacing))
            return
        dist = abs(x - b[0]) + abs(y - b[1])
        if dist > left or (left - dist) & 1:
            return
        for s in _ORDER:
            dx, dy = _MOVES[s]
            nx, ny = x + dx, y + dy
            if abs(nx) > ext or abs(ny) > ext:
                continue
            buf.append(s)
            dfs(nx, ny, left - 1)
            buf.pop()

    dfs(a[0], a[1], nsteps)
    return out


def _mesh_offsets(space: PuncturedPlane, mesh: Mesh, pa, pb) -> tuple[float, float]:
    (la,) = mesh.swept_to(space, pa)
    (lb,) = mesh.swept_to(space, pb)
    return la, lb


def sector_decompose(space: PuncturedPlane, walks: list[Walk], mesh: Mesh | None = None) -> dict[int, list[Walk]]:
    """Partition walks sharing endpoints by the winding of their mesh-closed loop."""
    if not walks:
        return {}
    if len(space) != 1:
        raise ValueError("sector decomposition needs exactly one puncture")
    first = walks[0]
    s = first.spacing
    a, b = first.start, first.end
    pa, pb = (a[0] * s, a[1] * s), (b[0] * s, b[1] * s)
    mesh = mesh or Mesh.spiral(space.punctures[0], s, clearance=space.clearance)
    la, lb = _mesh_offsets(space, mesh, pa, pb)
    out: dict[int, list[Walk]] = {}
    for w in walks:
        if w.start != a or w.end != b:
            raise ValueError("all walks must share endpoints")
        p = w.polyline
        swept = 0.0 if p is None else lifts(space, p)[0]
        n = round_turns(la + swept - lb)
        out.setdefault(n, []).append(w)
    return dict(sorted(out.items()))


def discrete_action(spec: LatticeSpec, walk: Walk) -> float:
    """Free-particle action: sum of ``(m/2) (|dx| / dt)**2 dt`` over steps."""
    sites = np.asarray(walk.sites(), dtype=np.float64) * spec.spacing
    if len(sites) < 2:
        return 0.0
    d2 = (np.diff(sites, axis=0) ** 2).sum(axis=1)
    return float((0.5 * spec.mass * d2 / spec.dt**2 * spec.dt).sum())


def partial_amplitude(spec: LatticeSpec, walks: list[Walk], total_count: int) -> complex:
    """``sum exp(i S / hbar) / total_count`` over one sector's walks."""
    if not walks:
        raise EmptySectorError("sector has no walks")
    acc = 0j
    for w in sorted(walks, key=lambda w: w.steps):
        acc += cmath.exp(1j * discrete_action(spec, w) / spec.hbar)
    return acc / total_count


def sector_amplitudes(
    spec: LatticeSpec,
    a,
    b,
    nsteps: int,
    *,
    mesh: Mesh | None = None,
    method: str = "count",
    max_steps: int = DEFAULT_MAX_STEPS,
    threads: int | None = None,
) -> SectorAmplitudes:
    """Partial amplitudes for every populated winding sector.

    ``method="enumerate"`` materialises every walk as a polyline and sorts it
    by its angle lift. ``method="count"`` runs the compiled counting kernel,
    which tracks signed crossings of the puncture's +x cut instead; every
    walk then carries the same action, so a sector amplitude is its count
    times ``exp(i S_N / hbar)``.
    """
    a, b = spec.check_site(a), spec.check_site(b)
    space = spec.space
    mesh = mesh or spec.default_mesh()
    pa, pb = spec.point(a), spec.point(b)
    la, lb = _mesh_offsets(space, mesh, pa, pb)

    if method == "enumerate":
        walks = enumerate_walks(spec, a, b, nsteps, max_steps=max_steps)
        total = len(walks)
        if not total:
            raise EmptySectorError(f"no {nsteps}-step walk joins {a} to {b}")
        sectors = sector_decompose(space, walks, mesh)
        amps = {n: partial_amplitude(spec, ws, total) for n, ws in sectors.items()}
        counts = {n: len(ws) for n, ws in sectors.items()}
    elif method == "count":
        _check_budget(nsteps, max_steps, COUNT_NODE_CAP)
        raw = kernels.count_sectors(a, b, nsteps, spec.extent, spec.plaquette, threads=threads)
        c = spec.puncture_offset
        # lift = theta_b - theta_a + 2 pi * crossings, with theta cut on the +x ray
        shift = round_turns(la - polar_angle(pa, c) + polar_angle(pb, c) - lb)
        counts = {k + shift: v for k, v in raw.items()}
        total = sum(counts.values())
        phase = cmath.exp(1j * nsteps * spec.step_action() / spec.hbar)
        amps = {n: k * phase / total for n, k in counts.items()}
    else:
        raise ValueError(f"unknown method {method!r}")
    if not counts:
        raise EmptySectorError(f"no {nsteps}-step walk joins {a} to {b}")
    return SectorAmplitudes(
        amps, (a, b), nsteps, lb - la, counts=counts, total_count=total, spacing=spec.spacing
    )


def total_propagator(sectors: SectorAmplitudes, rep: GroupoidRep) -> TotalPropagator:
    """``K = sum_n chi(class_n) K^n``."""
    value = 0j
    for n in sorted(sectors.amplitudes):
        value += chi(rep, sectors.sector_class(n)) * sectors.amplitudes[n]
    return TotalPropagator(value, rep.phi, sectors.endpoints, sectors.steps)


def lattice_rep(spec: LatticeSpec, phi: float, weights: MeshWeights | None = None, mesh: Mesh | None = None) -> GroupoidRep:
    return GroupoidRep(spec.space, mesh or spec.default_mesh(), weights or MeshWeights.unity(), GroupRepZ(phi))


def sweep_propagators(
    spec: LatticeSpec,
    a,
    b,
    nsteps: int,
    phis,
    *,
    weights: MeshWeights | None = None,
    mesh: Mesh | None = None,
    sectors: SectorAmplitudes | None = None,
) -> list[TotalPropagator]:
    mesh = mesh or spec.default_mesh()
    sectors = sectors or sector_amplitudes(spec, a, b, nsteps, mesh=mesh)
    return [total_propagator(sectors, lattice_rep(spec, float(phi), weights, mesh)) for phi in phis]


def flux_sweep(spec: LatticeSpec, a, b, nsteps: int, phis, **kw) -> list[tuple[float, float]]:
    """``(phi, |K(phi)|)`` for each flux value."""
    return [(p.flux, p.abs) for p in sweep_propagators(spec, a, b, nsteps, phis, **kw)]


def random_gauge(rng: np.random.Generator, basepoint) -> MeshWeights:
    """Smooth random unit-modulus weights, normalised to 1 at ``basepoint``."""
    kx, ky, amp, fx, fy = rng.uniform(-2.0, 2.0, size=5)
    c = rng.uniform(0, TWO_PI)

    def f(p):
        x, y = p
        return cmath.exp(1j * (kx * x + ky * y + amp * math.sin(fx * x + fy * y + c)))

    return MeshWeights.from_function(f, basepoint)


def gauge_check(
    spec: LatticeSpec,
    a,
    b,
    nsteps: int,
    phi: float,
    n_gauges: int = 20,
    seed: int = 0,
) -> dict:
    """Compare ``|K|`` under random mesh-weight gauges against the unit gauge."""
    sectors = sector_amplitudes(spec, a, b, nsteps)
    ref = total_propagator(sectors, lattice_rep(spec, phi))
    rng = np.random.default_rng(seed)
    mesh = spec.default_mesh()
    devs = []
    for _ in range(n_gauges):
        rep = lattice_rep(spec, phi, random_gauge(rng, mesh.basepoint), mesh)
        devs.append(abs(total_propagator(sectors, rep).abs - ref.abs))
    return {
        "phi": phi,
        "abs_k_reference": ref.abs,
        "max_deviation": max(devs) if devs else 0.0,
        "deviations": devs,
        "sectors": sorted(sectors.amplitudes),
        "seed": seed,
    }
