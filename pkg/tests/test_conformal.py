import numpy as np
import pytest

from bernbound import (boundary_point, circle, curve_samples, ellipse,
                       eval_curve, map_derivative, map_eval, map_from_json,
                       map_invert, map_to_json, openup_preimages,
                       point_in_curve, roundtrip_residual, segment_arc,
                       solve_exterior_map, solve_interior_map, solve_map_pair,
                       trig_curve)
from bernbound.errors import ArcError, MapError, NumericsError
from scipy.optimize import minimize_scalar

from oracles import richardson_directional


def true_curve_distances(curve, zs, m=4096):
    """Distances from each z to the curve, refined past sample resolution."""
    ts, pts = curve_samples(curve, m)
    step = 2 * np.pi / m
    out = []
    for z in np.asarray(zs).ravel():
        i = int(np.argmin(np.abs(pts - z)))
        res = minimize_scalar(lambda t: abs(eval_curve(curve, t) - z),
                              bounds=(ts[i] - step, ts[i] + step),
                              method="bounded", options={"xatol": 1e-14})
        out.append(res.fun)
    return np.array(out)


def star_points(curve, rng, n, r_lo, r_hi):
    """Random points r*gamma(theta); the curves here are star-shaped."""
    thetas = rng.uniform(0.0, 2 * np.pi, n)
    radii = rng.uniform(r_lo, r_hi, n)
    return [complex(r * eval_curve(curve, t))
            for r, t in zip(radii, thetas)]


class TestCircleClosedForms:
    def test_unit_circle_interior_identity(self, circle_pair):
        c, u0, pair = circle_pair
        for v in (0.0, 0.3 + 0.1j, -0.7j, 0.99):
            assert abs(map_eval(pair.interior, v) - v) < 1e-12
        assert abs(pair.interior.anchor - 1.0) < 1e-13
        assert abs(abs(pair.interior.anchor_deriv) - 1.0) < 1e-12

    def test_unit_circle_exterior_identity(self, circle_pair):
        c, u0, pair = circle_pair
        for v in (2.0, 1.5 + 0.5j, -3.0j):
            assert abs(map_eval(pair.exterior, v) - v) < 1e-12

    def test_radius_two_normalization(self):
        # raw map 2v; the anchor automorphism solves (1-s)/(1+s)*2 = 1,
        # s = 1/3, so the normalized map sends 0 to 2*(1/3) = 2/3
        c = circle(radius=2.0)
        u0 = boundary_point(c, 0.0)
        m = solve_interior_map(c, u0)
        assert abs(map_eval(m, 0.0) - 2.0 / 3.0) < 1e-12
        assert abs(map_eval(m, 1.0) - 2.0) < 1e-12
        assert abs(abs(map_derivative(m, 1.0)) - 1.0) < 1e-12

    def test_shifted_circle_exterior_translation(self):
        # unit circle shifted by 5: the exterior map becomes v + 5
        c = circle(center=5.0 + 0j)
        u0 = boundary_point(c, 0.0)  # the point 6
        m = solve_exterior_map(c, u0)
        for v in (1.5, 2.0 - 1.0j, 4.0j):
            assert abs(map_eval(m, v) - (v + 5.0)) < 1e-12

    def test_invert_examples(self, circle_pair):
        c, u0, pair = circle_pair
        v = map_invert(pair.interior, 0.3 + 0.1j)
        assert abs(v - (0.3 + 0.1j)) < 1e-12


class TestEllipseMaps:
    def test_roundtrip_interior(self, ellipse_pair, rng):
        e, u0, pair = ellipse_pair
        pts = star_points(e, rng, 100, 0.05, 0.95)
        worst = max(abs(map_eval(pair.interior,
                                 map_invert(pair.interior, z)) - z)
                    for z in pts)
        assert worst < 1e-8

    def test_roundtrip_exterior(self, ellipse_pair, rng):
        e, u0, pair = ellipse_pair
        pts = star_points(e, rng, 100, 1.05, 3.0)
        worst = max(abs(map_eval(pair.exterior,
                                 map_invert(pair.exterior, z)) - z)
                    for z in pts)
        assert worst < 1e-8

    def test_boundary_match(self, ellipse_pair):
        e, u0, pair = ellipse_pair
        ring = np.exp(1j * np.linspace(0, 2 * np.pi, 257)[:-1])
        for cmap in (pair.interior, pair.exterior):
            img = map_eval(cmap, ring)
            assert np.max(true_curve_distances(e, img)) < 1e-6

    def test_anchor_invariants(self, ellipse_pair):
        e, u0, pair = ellipse_pair
        for cmap in (pair.interior, pair.exterior):
            assert abs(cmap.anchor - u0.point) < 1e-8
            assert abs(abs(cmap.anchor_deriv) - 1.0) < 1e-8
        # both derivatives share their argument (the maps bend the two
        # normals onto each other), within 1e-6
        d1, d2 = pair.interior.anchor_deriv, pair.exterior.anchor_deriv
        assert abs(d1 / d2 - 1.0) < 1e-6
        # and the common direction is the outward normal
        assert abs(d1 / abs(d1) - u0.n2) < 1e-6

    def test_exterior_matches_joukowski_family(self, ellipse_pair):
        # classical exterior map J(w) = c*w + d/w, which fixes infinity;
        # the solved map uses the anchor normalization instead, so the two
        # differ by a Mobius automorphism of the exterior disk.  Fit that
        # automorphism from three correspondences and check it explains
        # the entire map, on the boundary and off it.
        e, u0, pair = ellipse_pair
        a, b = 1.2, 0.8
        c_val, d_val = (a + b) / 2.0, (a - b) / 2.0

        def joukowski(w):
            return c_val * w + d_val / w

        def family_invert(u):
            # the two quadratic roots multiply to d/c < 1, so the
            # exterior preimage is simply the larger one
            disc = np.sqrt((u / c_val) ** 2 - 4 * d_val / c_val + 0j)
            w_plus = (u / c_val + disc) / 2.0
            w_minus = (u / c_val - disc) / 2.0
            return w_plus if abs(w_plus) >= abs(w_minus) else w_minus

        def mobius_through(vs, ws):
            # matrix of the map sending vs -> ws, via z1,z2,z3 -> 0,1,inf
            def std(z1, z2, z3):
                return np.array([[z2 - z3, -z1 * (z2 - z3)],
                                 [z2 - z1, -z3 * (z2 - z1)]])
            mat_v, mat_w = std(*vs), std(*ws)
            w_inv = np.array([[mat_w[1, 1], -mat_w[0, 1]],
                              [-mat_w[1, 0], mat_w[0, 0]]])
            return w_inv @ mat_v

        ts = np.linspace(0.1, 2 * np.pi, 64)
        vs, ws = [], []
        for t in ts:
            u = eval_curve(e, t)
            vs.append(map_invert(pair.exterior, u))
            ws.append(family_invert(u))
        assert max(abs(abs(w) - 1.0) for w in ws) < 1e-12
        assert max(abs(abs(v) - 1.0) for v in vs) < 1e-9

        m = mobius_through(vs[0:48:21], ws[0:48:21])

        def reparam(v):
            return (m[0, 0] * v + m[0, 1]) / (m[1, 0] * v + m[1, 1])

        # the fitted reparametrization explains every boundary pair
        assert max(abs(reparam(v) - w) for v, w in zip(vs, ws)) < 1e-8
        # it is an automorphism of the exterior: its pole (the preimage
        # of infinity under the solved map) lies outside the unit circle
        assert abs(-m[1, 1] / m[1, 0]) > 1.0
        # and the composed classical map reproduces the solved one on a
        # ring strictly outside the unit circle
        ring = 1.4 * np.exp(1j * np.linspace(0.05, 2 * np.pi, 40))
        worst = max(abs(joukowski(reparam(v)) - map_eval(pair.exterior, v))
                    for v in ring)
        assert worst < 1e-8

    def test_anchor_derivative_by_finite_differences(self, ellipse_pair):
        e, u0, pair = ellipse_pair
        for cmap in (pair.interior, pair.exterior):
            fd = richardson_directional(lambda v: map_eval(cmap, v),
                                        1.0 + 0j, 1.0 + 0j, h=1e-5)
            assert abs(fd - cmap.anchor_deriv) < 1e-7

    def test_extension_margin_positive(self, ellipse_pair):
        e, u0, pair = ellipse_pair
        assert pair.delta1 > 0.0
        # evaluation on the extended annulus stays injective enough to
        # round-trip boundary-adjacent points
        v = (1.0 + pair.delta1 / 2) * np.exp(0.7j)
        u = map_eval(pair.interior, v)
        assert not point_in_curve(e, u)

    def test_serialization_roundtrip(self, ellipse_pair):
        e, u0, pair = ellipse_pair
        clone = map_from_json(map_to_json(pair.interior))
        ring = 0.7 * np.exp(1j * np.linspace(0, 6.2, 23))
        assert np.max(np.abs(map_eval(clone, ring)
                             - map_eval(pair.interior, ring))) == 0.0


class TestTheodorsen:
    def test_perturbed_circle(self):
        # three-lobed analytic perturbation, solved numerically
        c = trig_curve([(1, 1.0 + 0j), (4, 0.06 + 0j)])
        u0 = boundary_point(c, 0.3)
        pair = solve_map_pair(c, u0)
        ring = np.exp(1j * np.linspace(0, 2 * np.pi, 129)[:-1])
        for cmap in (pair.interior, pair.exterior):
            img = map_eval(cmap, ring)
            assert np.max(true_curve_distances(c, img)) < 1e-6
            assert abs(cmap.anchor - u0.point) < 1e-8

    def test_interior_map_rejects_bad_argument(self, ellipse_pair):
        e, u0, pair = ellipse_pair
        with pytest.raises(NumericsError):
            map_eval(pair.interior, 5.0 + 0j)  # far outside the disk

    def test_invert_rejects_far_point(self, ellipse_pair):
        e, u0, pair = ellipse_pair
        with pytest.raises(MapError):
            map_invert(pair.interior, 40.0 + 3.0j)

    def test_roundtrip_residual_helper(self, ellipse_pair):
        e, u0, pair = ellipse_pair
        pts = [0.2 + 0.1j, -0.4 - 0.2j, 0.6j]
        assert roundtrip_residual(pair.interior, pts) < 1e-9


class TestOpenUpPreimages:
    def test_midpoint(self, segment):
        u1, u2 = openup_preimages(segment, 0.0)
        assert {round(u.imag) for u in (u1, u2)} == {1, -1}
        assert all(abs(u.real) < 1e-9 for u in (u1, u2))

    def test_cosine_points(self, segment):
        theta = 1.1
        u1, u2 = openup_preimages(segment, np.cos(theta))
        got = sorted((u1, u2), key=lambda u: u.imag)
        want = sorted((np.exp(1j * theta), np.exp(-1j * theta)),
                      key=lambda u: u.imag)
        assert abs(got[0] - want[0]) < 1e-9
        assert abs(got[1] - want[1]) < 1e-9

    def test_endpoint_rejected(self, segment):
        with pytest.raises(ArcError):
            openup_preimages(segment, 1.0)
