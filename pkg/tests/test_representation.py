import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from fundgroupoid import homotopy as hp
from fundgroupoid import representation as rp
from fundgroupoid.errors import ClearanceError, MeshLookupError

ORIGIN = hp.PuncturedPlane.origin()
TOL = 1e-9


def e(x):
    return cmath.exp(1j * x)


def random_gauge(rng, basepoint=(1.0, 0.0)):
    k = rng.uniform(-2, 2, size=3)
    return rp.MeshWeights.from_function(
        lambda p: e(k[0] * p[0] + k[1] * p[1] + k[2] * math.sin(p[0] * p[1])), basepoint
    )


def random_path(rng, start, end, space=ORIGIN):
    while True:
        inner = rng.uniform(-4, 4, size=(int(rng.integers(1, 5)), 2))
        try:
            p = hp.Polyline(np.vstack([start, inner, end]))
            hp.lifts(space, p)
            return p
        except (ValueError, ClearanceError):
            continue


def random_point(rng):
    while True:
        x = rng.uniform(-4, 4, size=2)
        if np.hypot(*x) > 0.1:
            return x


# -- group representation -------------------------------------------------------

def test_group_rep_is_homomorphism():
    d = rp.GroupRepZ(0.37)
    for m in range(-3, 4):
        for n in range(-3, 4):
            assert abs(d.value(m + n) - d.value(m) * d.value(n)) < 1e-12
            assert abs(abs(d.value(n)) - 1) < 1e-12


# -- spiral mesh -----------------------------------------------------------------

def test_spiral_to_basepoint_is_constant():
    assert rp.spiral_mesh(1.0, 0.0) is None
    mesh = rp.Mesh.spiral()
    assert mesh.path_class(ORIGIN, (1.0, 0.0)).same_as(hp.HomotopyClass.identity((1, 0)))


def test_spiral_quarter_turn():
    p = rp.spiral_mesh(4.0, math.pi / 2)
    assert hp.points_coincide(p.source, (1, 0))
    assert hp.points_coincide(p.target, (0, 4), 1e-12)
    assert abs(hp.angle_lift(ORIGIN, p) - math.pi / 2) < TOL


def test_spiral_half_turn():
    p = rp.spiral_mesh(2.5, math.pi)
    assert abs(hp.angle_lift(ORIGIN, p) - math.pi) < TOL


def _continuous_spiral_angle(r, theta):
    """Integrate d(arg C)/dt along the smooth spiral by finite differences."""
    def c(t):
        return r**t * cmath.exp(1j * t * theta)

    h = 1e-6

    def darg(t):
        return ((c(t + h) - c(t - h)) / (2 * h) / c(t)).imag

    val, _ = quad(darg, 0.0, 1.0)
    return val


@pytest.mark.parametrize("r,theta", [(4.0, math.pi / 2), (0.3, 5.5), (7.0, 0.1), (1.0, 3.0)])
def test_spiral_lift_matches_quadrature(r, theta):
    p = rp.spiral_mesh(r, theta)
    assert abs(hp.angle_lift(ORIGIN, p) - _continuous_spiral_angle(r, theta)) < 1e-7


def test_spiral_refines_near_clearance():
    p = rp.spiral_mesh(0.01015, 6.2, rho0=0.01015, clearance=0.01)
    lift, dist = hp.kernels.segment_lift(p.vertices, 0.0, 0.0)
    assert dist >= 0.01
    assert len(p) > 17


def test_spiral_inside_clearance():
    with pytest.raises(ClearanceError):
        rp.spiral_mesh(0.01, 1.0, clearance=0.05)


def test_spiral_theta_range():
    with pytest.raises(ValueError):
        rp.spiral_mesh(2.0, 2 * math.pi)


def test_spiral_about_other_center():
    mesh = rp.Mesh.spiral(center=(0.5, 0.5), rho0=1.0, clearance=0.4)
    assert mesh.basepoint == (1.5, 0.5)
    space = hp.PuncturedPlane(((0.5, 0.5),), 0.4)
    (lift,) = mesh.swept_to(space, (0.0, 0.0))
    assert abs(lift - 5 * math.pi / 4) < TOL


def test_straight_mesh_across_puncture_fails():
    mesh = rp.Mesh.straight((1.0, 0.0))
    with pytest.raises(ClearanceError):
        mesh.swept_to(ORIGIN, (-1.0, 0.0))


# -- weights ---------------------------------------------------------------------

def test_symmetric_weights():
    phi = 1.3
    w = rp.symmetric_weights(phi)
    assert w.weight_at((2.0, 0.0)) == 1
    assert abs(w.weight_at((-2.0, 0.0)) - e(phi / 2)) < 1e-15
    just_below_cut = (math.cos(-1e-9), math.sin(-1e-9))
    assert abs(rp.symmetric_weights(2 * math.pi).weight_at(just_below_cut) - 1) < 1e-8


def test_weight_at_basepoint_must_be_one():
    with pytest.raises(ValueError):
        rp.GroupoidRep(ORIGIN, rp.Mesh.spiral(), rp.MeshWeights.from_function(lambda p: 1j), rp.GroupRepZ(1.0))


def test_non_unit_weight_rejected():
    w = rp.MeshWeights.from_function(lambda p: 1 + p[0] - 1 if p == (1.0, 0.0) else 2.0)
    rep = rp.GroupoidRep(ORIGIN, rp.Mesh.spiral(), w, rp.GroupRepZ(1.0))
    with pytest.raises(ValueError):
        rp.chi(rep, hp.Polyline([(1, 0), (2, 0)]))


def test_table_weights_and_mesh():
    a, b = (2.0, 0.0), (0.0, 2.0)
    mesh = rp.Mesh.from_table((1.0, 0.0), [hp.Polyline([(1, 0), a]), hp.Polyline([(1, 0), (2, 2), b])])
    w = rp.MeshWeights.from_table({(1.0, 0.0): 0.0, a: 0.4, b: -1.1})
    rep = rp.GroupoidRep(ORIGIN, mesh, w, rp.GroupRepZ(0.9))
    q = hp.Polyline([a, (1.5, 1.5), b])
    assert abs(rp.chi(rep, q) - e(-0.4) * e(-1.1)) < TOL
    with pytest.raises(MeshLookupError):
        rp.chi(rep, hp.Polyline([a, (3, 3)]))


# -- chi -------------------------------------------------------------------------

@pytest.mark.parametrize("rep_factory", [rp.symmetric_rep, rp.ldw_rep])
def test_chi_contractible_loop(rep_factory):
    rep = rep_factory(0.8)
    loop = hp.Polyline([(2, 1), (3, 1), (3, 2), (2, 1)])
    assert abs(rp.chi(rep, loop) - 1) < TOL


@pytest.mark.parametrize("center", [(0.0, 0.0), (0.3, -0.2), (-0.5, 0.4)])
def test_chi_full_circle(center):
    phi = 2.2
    loop = hp.arc(center, 1.5, 0.7, 2 * math.pi)
    for rep in (rp.symmetric_rep(phi), rp.ldw_rep(phi)):
        assert abs(rp.chi(rep, loop) - e(phi)) < TOL


def test_half_circle_symmetric_rep():
    phi = 0.9
    rep = rp.symmetric_rep(phi)
    for omega in np.linspace(0, 2 * math.pi, 13, endpoint=False):
        for r in (0.2, 1.0, 7.5):
            assert abs(rp.chi(rep, hp.half_circle(r, omega)) - e(phi / 2)) < TOL


def test_half_circle_exactly_on_the_cut():
    phi = 2.0
    rep = rp.symmetric_rep(phi)
    assert abs(rp.chi(rep, hp.half_circle(3.0, math.pi)) - e(phi / 2)) < TOL


def test_ldw_half_circles():
    phi = 1.1
    rep = rp.ldw_rep(phi)
    q0, qpi = hp.half_circle(2.0, 0.0), hp.half_circle(2.0, math.pi)
    assert abs(rp.chi(rep, q0) - 1) < TOL
    assert abs(rp.chi(rep, qpi) - e(phi)) < TOL
    assert abs(rp.chi(rep, hp.concat(q0, qpi)) - e(phi)) < TOL


def test_loop_projection():
    rep = rp.ldw_rep(1.0)
    q0, qpi = hp.half_circle(2.0, 0.0), hp.half_circle(2.0, math.pi)
    assert rp.loop_projection(rep, q0) == (0,)
    assert rp.loop_projection(rep, qpi) == (1,)
    assert rp.loop_projection(rep, hp.concat(q0, qpi)) == (1,)


def test_class_transport_identity():
    rep = rp.symmetric_rep(1.0)
    cls = rp.class_transport(rep, (1.0, 0.0), (1.0, 0.0), 0)
    assert cls.same_as(hp.HomotopyClass.identity((1.0, 0.0)))


def test_class_transport_roundtrip_and_expansion():
    rng = np.random.default_rng(3)
    phi = 0.77
    w = random_gauge(rng)
    rep = rp.gauge_transform(rp.symmetric_rep(phi), w)
    for _ in range(50):
        a, b = random_point(rng), random_point(rng)
        n = int(rng.integers(-4, 5))
        cls = rp.class_transport(rep, a, b, n)
        assert rp.loop_projection(rep, cls) == (n,)
        expected = w.weight_at(a).conjugate() * e(phi * n) * w.weight_at(b)
        assert abs(rp.chi(rep, cls) - expected) < TOL


def test_compatible():
    pts = [((2.0, 1.0), (-1.0, 3.0)), ((0.5, -2.0), (3.0, 0.2)), ((1.0, 0.0), (-2.0, -2.0))]
    sym, ldw = rp.symmetric_rep(0.3), rp.ldw_rep(0.3)
    assert rp.compatible(sym, sym, pts)
    assert rp.compatible(ldw, sym, pts)
    assert not rp.compatible(rp.ldw_rep(0.3), rp.ldw_rep(0.7), pts)


def test_ratio_is_endpoint_phase():
    a, b = (2.0, 1.0), (-1.0, 3.0)
    ratios = rp.endpoint_ratio(rp.ldw_rep(0.3), rp.symmetric_rep(0.3), a, b)
    w = rp.symmetric_weights(0.3)
    expected = w.weight_at(a).conjugate() * w.weight_at(b)
    assert all(abs(r - expected) < TOL for r in ratios)


def test_gauge_transform_to_unity_is_ldw():
    sym = rp.symmetric_rep(1.4)
    unit = rp.gauge_transform(sym, rp.MeshWeights.unity())
    ldw = rp.ldw_rep(1.4)
    for omega in (0.1, 2.0, 4.0):
        q = hp.half_circle(1.5, omega)
        assert abs(rp.chi(unit, q) - rp.chi(ldw, q)) < TOL


def test_random_gauges_are_compatible_and_keep_loops():
    rng = np.random.default_rng(5)
    base = rp.symmetric_rep(2.0)
    pts = [(tuple(random_point(rng)), tuple(random_point(rng))) for _ in range(5)]
    loop = hp.arc((0.2, 0.1), 2.0, 1.0, 2 * math.pi)
    for _ in range(10):
        other = rp.gauge_transform(base, random_gauge(rng))
        assert rp.compatible(base, other, pts)
        assert abs(rp.chi(other, loop) - rp.chi(base, loop)) < TOL
    open_path = hp.Polyline([(2, 0.5), (0, 3)])
    other = rp.gauge_transform(base, random_gauge(rng))
    assert abs(rp.chi(other, open_path) - rp.chi(base, open_path)) > 1e-6


def test_rebase_reproduces_representation():
    rng = np.random.default_rng(9)
    rep = rp.gauge_transform(rp.symmetric_rep(1.7), random_gauge(rng))
    moved = rp.rebase(rep, rp.Mesh.straight((-2.0, 2.0)))
    for _ in range(20):
        a, b = random_point(rng), random_point(rng)
        p = random_path(rng, a, b)
        try:
            val = rp.chi(moved, p)
        except ClearanceError:  # straight mesh crossing the puncture
            continue
        assert abs(val - rp.chi(rep, p)) < TOL


# -- inversion obstruction -------------------------------------------------------

def test_inversion_defect_symmetric_is_zero():
    samples = [(0.5, 0.0), (2.0, 1.0), (9.0, 3.5), (1.0, math.pi)]
    for phi in (0.3, 1.0, math.pi, 5.0):
        assert rp.inversion_defect(rp.symmetric_rep(phi), samples) < TOL


def test_inversion_defect_ldw_quarter_flux():
    d = rp.inversion_defect(rp.ldw_rep(math.pi / 2), [(1.0, 0.0)])
    assert abs(d - abs(1 - e(math.pi / 2))) < TOL
    assert abs(d - math.sqrt(2)) < TOL


def test_cube_root_flux_with_square_root_weights():
    # z = e^{2 pi i/3}; weights exp(i (phi + 2 pi) theta / 2 pi) give every
    # half-circle the phase w = z^2, and w^2 = z^4 = z
    z_phase = 2 * math.pi / 3
    rep = rp.GroupoidRep(ORIGIN, rp.Mesh.spiral(), rp.symmetric_weights(z_phase + 2 * math.pi), rp.GroupRepZ(z_phase))
    samples = [(1.0, 0.0), (2.0, 1.0), (0.4, 4.0), (3.0, math.pi)]
    assert rp.inversion_defect(rep, samples) < TOL
    w = rp.chi(rep, hp.half_circle(2.0, 1.0))
    assert abs(w - e(2 * z_phase)) < TOL
    assert abs(w * w - e(z_phase)) < TOL


def test_inversion_defect_needs_origin_puncture():
    rep = rp.ldw_rep(1.0, rp.Mesh.spiral((1.0, 1.0)), hp.PuncturedPlane(((1.0, 1.0),)))
    with pytest.raises(ValueError):
        rp.inversion_defect(rep, [(1.0, 0.0)])


# -- properties --------------------------------------------------------------------

def test_representation_law_reversal_and_homotopy_invariance():
    rng = np.random.default_rng(21)
    rep = rp.gauge_transform(rp.symmetric_rep(1.234), random_gauge(rng))
    for _ in range(200):
        a, b, c = random_point(rng), random_point(rng), random_point(rng)
        p, q = random_path(rng, a, b), random_path(rng, b, c)
        cp = rp.chi(rep, p)
        assert abs(rp.chi(rep, hp.concat(p, q)) - cp * rp.chi(rep, q)) < TOL
        assert abs(rp.chi(rep, hp.reverse(p)) - cp.conjugate()) < TOL
        p2 = random_path(rng, a, b)
        if hp.homotopic(ORIGIN, p, p2):
            assert abs(rp.chi(rep, p2) - cp) < TOL


def test_loop_value_independent_of_mesh_and_weights():
    rng = np.random.default_rng(4)
    phi = 0.6
    reps = [
        rp.symmetric_rep(phi),
        rp.ldw_rep(phi),
        rp.gauge_transform(rp.ldw_rep(phi, rp.Mesh.straight((-3.0, -3.0))), random_gauge(rng, (-3.0, -3.0))),
    ]
    for _ in range(30):
        a = random_point(rng)
        loop = random_path(rng, a, a)
        (n,) = hp.winding_number(ORIGIN, loop)
        for rep in reps:
            try:
                val = rp.chi(rep, loop)
            except ClearanceError:
                continue
            assert abs(val - e(phi * n)) < TOL


def test_multi_puncture_abelianised():
    space = hp.PuncturedPlane(((0.0, 0.0), (4.0, 0.0)), 0.01)
    rep = rp.GroupoidRep(space, rp.Mesh.straight((2.0, 3.0)), rp.MeshWeights.unity(), (rp.GroupRepZ(0.5), rp.GroupRepZ(1.5)))
    around_both = hp.arc((2.0, 0.0), 3.0, 0.0, 2 * math.pi)
    assert abs(rp.chi(rep, around_both) - e(2.0)) < TOL
    around_second = hp.arc((4.0, 0.0), 1.0, 0.0, -2 * math.pi)
    assert abs(rp.chi(rep, around_second) - e(-1.5)) < TOL
    assert rp.compatible(rep, rp.gauge_transform(rep, rp.MeshWeights.from_function(lambda p: e(p[0]), (2.0, 3.0))), [((1.0, 1.0), (5.0, -1.0))])


def test_rep_from_json():
    rep = rp.rep_from_json({"basepoint": [1, 0], "mesh_kind": "spiral", "phi": 1.0, "weights": "symmetric"})
    assert abs(rp.chi(rep, hp.half_circle(2.0, 4.0)) - e(0.5)) < TOL
    rep = rp.rep_from_json({"phi": 1.0, "weights": {"table": [[1, 0, 0.0], [2, 0, 0.3]]}, "mesh_kind": "straight"})
    assert abs(rp.chi(rep, hp.Polyline([(1, 0), (2, 0)])) - e(0.3)) < TOL
    with pytest.raises(ValueError):
        rp.rep_from_json({"phi": 1.0, "weights": "bogus"})
