"""Command-line interface.

Subcommands can be spelled ``groupoid verify`` or ``groupoid-verify``.
Exit codes: 0 success, 2 config/input error, 3 domain error, 4 budget
exceeded. Errors are reported as JSON (on stdout with ``--json``, else on
stderr).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import groupoid as gd
from . import homotopy as hp
from . import propagator as pr
from . import representation as rp
from .errors import BudgetExceeded, FundGroupoidError

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_BUDGET = 0, 2, 3, 4
GROUPS = ("groupoid", "rep", "ab")


class ConfigError(Exception):
    pass


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})") from None


def _load(fn, *args):
    try:
        return fn(*args)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"bad input: {e}") from None


def _space(path):
    return _load(hp.PuncturedPlane.from_json, _read_json(path))


def _path(path):
    return _load(hp.Polyline.from_json, _read_json(path))


def _cplx(z: complex) -> list[float]:
    return [z.real, z.imag]


# -- groupoid ---------------------------------------------------------------

def cmd_groupoid_verify(args):
    try:
        text = Path(args.table).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {args.table}: {e.strerror}") from None
    g, _, _ = _load(gd.parse_table, text)
    report = gd.verify_axioms(g, max_elements=args.max_elements)
    payload = {"elements": g.size, **report.to_json(g)}
    return payload, json.dumps(payload, indent=2, default=str)


def cmd_groupoid_derive(args):
    try:
        text = Path(args.table).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {args.table}: {e.strerror}") from None
    g, left, right = _load(gd.parse_table, text)
    report = gd.derive_strong_inverses(g, left, right, max_elements=args.max_elements)
    payload = {"elements": g.size, **report.to_json(g)}
    return payload, json.dumps(payload, indent=2, default=str)


# -- planar homotopy --------------------------------------------------------

def cmd_winding(args):
    space, loop = _space(args.space), _path(args.loop)
    w = hp.winding_number(space, loop)
    return {"winding": list(w)}, "winding: " + " ".join(str(n) for n in w)


def cmd_class(args):
    space, path = _space(args.space), _path(args.path)
    cls = hp.homotopy_class(space, path)
    text = f"{cls.source} -> {cls.target}, swept " + ", ".join(f"{s:.12g}" for s in cls.swept)
    return cls.to_json(), text


def cmd_homotopic(args):
    space, p, q = _space(args.space), _path(args.p), _path(args.q)
    tol = args.tol if args.tol is not None else hp.SWEPT_TOL
    cp, cq = hp.homotopy_class(space, p), hp.homotopy_class(space, q)
    same = cp.same_as(cq, tol)
    return {"homotopic": same, "classes": [cp.to_json(), cq.to_json()]}, f"homotopic: {same}"


# -- representations --------------------------------------------------------

def _rep(path):
    return _load(rp.rep_from_json, _read_json(path))


def cmd_rep_chi(args):
    rep, path = _rep(args.rep), _path(args.path)
    val = rp.chi(rep, path)
    n = rp.loop_projection(rep, path)
    payload = {"chi": _cplx(val), "abs": abs(val), "arg": math.atan2(val.imag, val.real), "loop_projection": list(n)}
    return payload, f"chi = {val.real:.15g} {val.imag:+.15g}i  (loop winding {list(n)})"


def _random_polyline(rng, space, start, end, n_inner):
    for _ in range(1000):
        inner = rng.uniform(-4, 4, size=(n_inner, 2))
        p = hp.Polyline(np.vstack([start, inner, end]))
        try:
            hp.lifts(space, p)
        except FundGroupoidError:
            continue
        return p
    raise RuntimeError("could not sample a clearance-respecting polyline")


def _random_point(rng, space):
    while True:
        x = rng.uniform(-4, 4, size=2)
        if all(math.dist(x, c) > 2 * space.clearance for c in space.punctures):
            return x


def rep_check(rep: rp.GroupoidRep, pairs: int, seed: int, tol: float) -> dict:
    """Randomised checks of the representation law, reversal and gauge."""
    rng = np.random.default_rng(seed)
    space = rep.space
    law = rev = loops = 0.0
    unit = rp.gauge_transform(rep, rp.MeshWeights.unity())
    ends = []
    for _ in range(pairs):
        a, b, c = (_random_point(rng, space) for _ in range(3))
        p = _random_polyline(rng, space, a, b, int(rng.integers(1, 5)))
        q = _random_polyline(rng, space, b, c, int(rng.integers(1, 5)))
        cp, cq = rp.chi(rep, p), rp.chi(rep, q)
        law = max(law, abs(rp.chi(rep, hp.concat(p, q)) - cp * cq))
        rev = max(rev, abs(rp.chi(rep, hp.reverse(p)) - cp.conjugate()))
        loop = hp.concat(p, hp.reverse(p))
        loop = hp.concat(loop, _random_polyline(rng, space, a, a, 3))
        expect = rep.D(hp.winding_number(space, loop))
        loops = max(loops, abs(rp.chi(rep, loop) - expect))
        ends.append((tuple(a), tuple(b)))
    compat = rp.compatible(rep, unit, ends[: min(len(ends), 20)], tol=tol)
    return {
        "seed": seed,
        "pairs": pairs,
        "max_law_residual": law,
        "max_reversal_residual": rev,
        "max_loop_residual": loops,
        "gauge_compatible": compat,
        "passed": bool(law < tol and rev < tol and loops < tol and compat),
    }


def cmd_rep_check(args):
    rep = _rep(args.rep)
    tol = args.tol if args.tol is not None else rp.PHASE_TOL
    payload = rep_check(rep, args.pairs, args.seed, tol)
    return payload, "\n".join(f"{k}: {v}" for k, v in payload.items())


def _samples(rng, n, rmin, rmax):
    r = rng.uniform(rmin, rmax, size=n)
    w = rng.uniform(0.0, 2 * math.pi, size=n)
    return list(zip(r.tolist(), w.tolist()))


def cmd_rep_halfcircle(args):
    rep = _rep(args.rep) if args.rep else rp.symmetric_rep(args.phi)
    rng = np.random.default_rng(args.seed)
    samples = _samples(rng, args.samples, args.rmin, args.rmax)
    vals = rp.halfcircle_phases(rep, samples)
    expected = complex(math.cos(rep.phi / 2), math.sin(rep.phi / 2))
    dev = max((abs(v - expected) for v in vals), default=0.0)
    tol = args.tol if args.tol is not None else rp.PHASE_TOL
    payload = {
        "phi": rep.phi,
        "seed": args.seed,
        "expected": _cplx(expected),
        "max_deviation": dev,
        "passed": dev < tol,
        "phases": [[r, w, v.real, v.imag] for (r, w), v in zip(samples, vals)],
    }
    return payload, f"seed {args.seed}: {len(vals)} half-circles, max |chi - e^(i phi/2)| = {dev:.3e}"


def cmd_rep_defect(args):
    rep = _rep(args.rep)
    rng = np.random.default_rng(args.seed)
    samples = [(1.0, 0.0)] + _samples(rng, args.samples, args.rmin, args.rmax)
    d = rp.inversion_defect(rep, samples)
    payload = {"defect": d, "samples": len(samples), "seed": args.seed}
    return payload, f"seed {args.seed}: inversion defect {d:.12g}"


# -- propagator ---------------------------------------------------------------

def _ab_config(path):
    data = _read_json(path)

    def build():
        spec = pr.LatticeSpec.from_json(data.get("lattice", {}))
        a, b = (spec.check_site(tuple(e)) for e in data["endpoints"])
        steps = int(data["steps"])
        phis = data.get("phis", [])
        if isinstance(phis, dict):
            phis = np.linspace(float(phis["start"]), float(phis["stop"]), int(phis["num"])).tolist()
        return spec, a, b, steps, [float(p) for p in phis], data

    return _load(build)


def cmd_ab_sweep(args):
    spec, a, b, steps, phis, _ = _ab_config(args.config)
    rows = pr.sweep_propagators(spec, a, b, steps, phis)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["phi", "abs_k", "re_k", "im_k"])
    for p in rows:
        w.writerow([repr(p.flux), repr(p.abs), repr(p.value.real), repr(p.value.imag)])
    payload = {"rows": [[p.flux, p.abs, p.value.real, p.value.imag] for p in rows]}
    return payload, buf.getvalue().rstrip("\n")


def cmd_ab_sectors(args):
    spec, a, b, steps, _, _ = _ab_config(args.config)
    s = pr.sector_amplitudes(spec, a, b, steps, method=args.method)
    payload = {
        "endpoints": [list(a), list(b)],
        "steps": steps,
        "total_count": s.total_count,
        "base_swept": s.base_swept,
        "sectors": [
            {"winding": n, "count": s.counts[n], "amplitude": _cplx(s.amplitudes[n])}
            for n in sorted(s.amplitudes)
        ],
    }
    text = "\n".join(f"n={n:+d}  count={s.counts[n]}" for n in sorted(s.counts))
    return payload, text


def cmd_ab_gauge_check(args):
    spec, a, b, steps, phis, data = _ab_config(args.config)
    phi = args.phi if args.phi is not None else float(data.get("phi", phis[0] if phis else 1.0))
    tol = args.tol if args.tol is not None else 1e-9
    res = pr.gauge_check(spec, a, b, steps, phi, args.gauges, args.seed)
    res["passed"] = res["max_deviation"] < tol
    return res, (
        f"seed {args.seed}: |K| = {res['abs_k_reference']:.15g}, "
        f"max gauge deviation {res['max_deviation']:.3e} over {args.gauges} gauges"
    )


# -- wiring -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured JSON on stdout")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")
    common.add_argument("--tol", type=float, help="override the comparison tolerance")

    p = argparse.ArgumentParser(prog="fundgroupoid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=fn)
        return sp

    for name, fn in (("groupoid-verify", cmd_groupoid_verify), ("groupoid-derive", cmd_groupoid_derive)):
        sp = add(name, fn, "check a composition table")
        sp.add_argument("table")
        sp.add_argument("--max-elements", type=int, default=gd.DEFAULT_MAX_ELEMENTS)

    sp = add("winding", cmd_winding, "winding numbers of a closed polyline")
    sp.add_argument("space")
    sp.add_argument("loop")
    sp = add("class", cmd_class, "homotopy class of a polyline")
    sp.add_argument("space")
    sp.add_argument("path")
    sp = add("homotopic", cmd_homotopic, "compare the classes of two polylines")
    sp.add_argument("space")
    sp.add_argument("p")
    sp.add_argument("q")

    sp = add("rep-chi", cmd_rep_chi, "evaluate a representation on a path")
    sp.add_argument("rep")
    sp.add_argument("path")
    sp = add("rep-check", cmd_rep_check, "randomised representation-law checks")
    sp.add_argument("rep")
    sp.add_argument("--pairs", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("rep-halfcircle", cmd_rep_halfcircle, "phases of random CCW half-circles")
    sp.add_argument("--phi", type=float, default=1.0)
    sp.add_argument("--rep", help="representation config (default: symmetric rep)")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--rmin", type=float, default=0.2)
    sp.add_argument("--rmax", type=float, default=10.0)
    sp = add("rep-defect", cmd_rep_defect, "inversion-symmetry defect of half-circle phases")
    sp.add_argument("rep")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--rmin", type=float, default=0.2)
    sp.add_argument("--rmax", type=float, default=10.0)

    sp = add("ab-sweep", cmd_ab_sweep, "flux sweep of |K|, as CSV")
    sp.add_argument("config")
    sp = add("ab-sectors", cmd_ab_sectors, "winding-sector decomposition")
    sp.add_argument("config")
    sp.add_argument("--method", choices=("count", "enumerate"), default="count")
    sp = add("ab-gauge-check", cmd_ab_gauge_check, "|K| under random mesh-weight gauges")
    sp.add_argument("config")
    sp.add_argument("--phi", type=float)
    sp.add_argument("--gauges", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    return p


def _normalize(argv: list[str]) -> list[str]:
    for i, tok in enumerate(argv):
        if tok.startswith("-"):
            continue
        if tok in GROUPS and i + 1 < len(argv) and not argv[i + 1].startswith("-"):
            return argv[:i] + [f"{tok}-{argv[i + 1]}"] + argv[i + 2 :]
        return argv
    return argv


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    argv = _normalize(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    as_json = args.json

    def fail(code, kind, exc):
        err = json.dumps({"error": kind, "message": str(exc).strip("'\""), "exit_code": code})
        (sys.stdout if as_json else sys.stderr).write(err + "\n")
        return code

    if args.tol is not None and not args.tol > 0:
        return fail(EXIT_CONFIG, "config", "tolerance must be positive")
    try:
        payload, text = args.func(args)
    except ConfigError as e:
        return fail(EXIT_CONFIG, "config", e)
    except BudgetExceeded as e:
        return fail(EXIT_BUDGET, "budget", e)
    except (FundGroupoidError, ValueError) as e:
        return fail(EXIT_DOMAIN, type(e).__name__, e)
    if as_json:
        _emit(json.dumps(payload, sort_keys=True, default=str), args.output)
    else:
        _emit(text, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
