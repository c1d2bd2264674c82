from math import acos, gcd, inf, nan, pi, sqrt

import numpy as np
from django.test import SimpleTestCase, override_settings

from torsion.combinatorics import B, C, LensSpec, build_triangulation
from torsion.exceptions import DegenerateParams, DegenerateTet, InvalidSpec, NotRealizable
from torsion.geometry import (
    GeomParams,
    cayley_menger,
    closed_form_volume,
    dihedral_angles,
    edge_lengths,
    face_area,
    is_nondegenerate,
    phase_floor,
    random_params,
    realize,
    reduce_angle,
    signed_volume,
    tet_from_lengths,
    vertex_coordinates,
)

def coprime_cases(p_max=10):
    """Every (p, q, k) with p ≤ p_max, gcd(p, q) = 1 and gcd(k, p) = 1."""
    return [
        (p, q, k)
        for p in range(3, p_max + 1)
        for q in range(1, p)
        for k in range(1, p)
        if gcd(p, q) == 1 and gcd(k, p) == 1
    ]


CORNER = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
REGULAR = np.array([
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
]) / (2 * sqrt(2))


class PrimitiveTests(SimpleTestCase):
    def test_signed_volume(self):
        self.assertAlmostEqual(signed_volume(CORNER), 1 / 6)
        self.assertAlmostEqual(signed_volume(CORNER[[1, 0, 2, 3]]), -1 / 6)

    def test_regular_tet_angles(self):
        np.testing.assert_allclose(edge_lengths(REGULAR), np.ones(6), atol=1e-12)
        np.testing.assert_allclose(dihedral_angles(REGULAR), np.full(6, acos(1 / 3)), atol=1e-12)

    def test_corner_angles(self):
        angles = dihedral_angles(CORNER)
        # edges 01, 02, 03 meet at the right corner
        np.testing.assert_allclose(angles[:3], np.full(3, pi / 2), atol=1e-12)

    def test_angles_ignore_vertex_order(self):
        pts = np.array([[0.1, 0.2, 0.0], [1.3, -0.2, 0.1], [0.4, 1.1, -0.3], [0.2, 0.3, 0.9]])
        np.testing.assert_allclose(
            dihedral_angles(pts[[1, 0, 2, 3]])[[0, 3, 4, 1, 2, 5]], dihedral_angles(pts), atol=1e-12
        )

    def test_sine_from_areas(self):
        pts = np.array([[0.1, 0.2, 0.0], [1.3, -0.2, 0.1], [0.4, 1.1, -0.3], [0.2, 0.3, 0.9]])
        volume = abs(signed_volume(pts))
        angle = dihedral_angles(pts)[0]
        a1, a2 = face_area(pts[0], pts[1], pts[2]), face_area(pts[0], pts[1], pts[3])
        length = np.linalg.norm(pts[1] - pts[0])
        self.assertAlmostEqual(np.sin(angle), 3 * length * volume / (2 * a1 * a2), places=12)

    def test_flat_tet(self):
        with self.assertRaises(DegenerateTet):
            dihedral_angles(np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], dtype=float))

    def test_face_area(self):
        self.assertAlmostEqual(face_area(*CORNER[:3]), 0.5)

    def test_cayley_menger(self):
        self.assertAlmostEqual(cayley_menger(edge_lengths(CORNER)), 288 / 36)

    def test_reduce_angle(self):
        np.testing.assert_allclose(reduce_angle(np.array([2 * pi, 2.5 * pi, -pi, 0.5 + 4 * pi])), [0, pi / 2, pi, 0.5], atol=1e-12)


class TetFromLengthsTests(SimpleTestCase):
    def assert_reproduces(self, lengths):
        pts = tet_from_lengths(lengths)
        np.testing.assert_allclose(edge_lengths(pts), lengths, rtol=1e-12)
        self.assertGreater(signed_volume(pts), 0)
        np.testing.assert_allclose(pts[0], 0)
        self.assertAlmostEqual(pts[1, 1], 0)
        self.assertAlmostEqual(pts[2, 2], 0)

    def test_regular(self):
        self.assert_reproduces(np.ones(6))

    def test_corner(self):
        self.assert_reproduces(np.array([1, 1, 1, sqrt(2), sqrt(2), sqrt(2)]))

    def test_triangle_inequality(self):
        with self.assertRaises(NotRealizable):
            tet_from_lengths([1, 1, 1, 3, 1, 1])


class ParamsTests(SimpleTestCase):
    def test_positive_scales(self):
        with self.assertRaises(InvalidSpec):
            GeomParams(alpha=0.3, rho=0.0, sigma=1.0, s=1.0, k=1)

    def test_finite_values(self):
        for bad in ({"alpha": nan}, {"rho": inf}, {"s": nan}):
            values = {"alpha": 0.3, "rho": 1.0, "sigma": 1.0, "s": 1.0, **bad}
            with self.assertRaisesMessage(InvalidSpec, "must be finite"):
                GeomParams(k=1, **values)

    def test_seeded_params_are_reproducible(self):
        spec = LensSpec(7, 2)
        self.assertEqual(random_params(spec, 2, seed=4), random_params(spec, 2, seed=4))
        self.assertNotEqual(random_params(spec, 2, seed=4), random_params(spec, 2, seed=5))

    def test_seeded_params_ranges(self):
        spec = LensSpec(9, 4)
        for seed in range(10):
            params = random_params(spec, 2, seed=seed)
            self.assertTrue(0 < params.alpha < pi)
            for value in (params.rho, params.sigma, params.s):
                self.assertTrue(0.5 - 1e-12 <= value <= 2.0 + 1e-12)
            self.assertTrue(is_nondegenerate(spec, params, floor=0.1))


class RealizationTests(SimpleTestCase):
    def test_vertex_coordinates(self):
        tri = build_triangulation(LensSpec(4, 1))
        params = GeomParams(alpha=pi / 2, rho=1.0, sigma=1.0, s=1.0, k=1)
        points = vertex_coordinates(tri, params)
        np.testing.assert_allclose(points[tri.vertex_index(B(1, 4))], [0, 1, 0], atol=1e-15)
        np.testing.assert_allclose(points[tri.vertex_index(C(0, 4))], [0, 1, 1], atol=1e-15)

    def test_volume_of_first_tet(self):
        spec = LensSpec(4, 1)
        tri = build_triangulation(spec)
        params = GeomParams(alpha=pi / 4, rho=1.0, sigma=1.0, s=1.0, k=1)
        real = realize(tri, params)
        self.assertAlmostEqual(real.volumes[tri.tet_index(0, 0)], sqrt(2) / 6, places=12)
        self.assertAlmostEqual(closed_form_volume(spec, params, 0), sqrt(2) / 6, places=12)

    def test_volumes_match_formula(self):
        for p, q, k in [(5, 2, 1), (7, 3, 2), (8, 3, 3)]:
            spec = LensSpec(p, q)
            tri = build_triangulation(spec)
            params = random_params(spec, k, seed=1)
            real = realize(tri, params)
            for n in range(p):
                for m in range(p):
                    self.assertAlmostEqual(
                        real.volumes[tri.tet_index(n, m)], closed_form_volume(spec, params, m, n), places=12
                    )

    def test_defects_vanish(self):
        for p, q, k in coprime_cases():
            spec = LensSpec(p, q)
            tri = build_triangulation(spec)
            for seed in range(5):
                real = realize(tri, random_params(spec, k, seed=seed))
                self.assertLess(np.max(np.abs(real.defects)), 1e-9, f"{spec} k={k} seed={seed}")

    def test_lengths_and_accessors(self):
        tri = build_triangulation(LensSpec(5, 2))
        params = GeomParams(alpha=0.4, rho=1.5, sigma=0.7, s=1.2, k=1)
        real = realize(tri, params)
        self.assertAlmostEqual(real.length(C(0, 5), C(1, 5)), 2 * 0.7 * np.sin(2 * pi * 2 / 5 / 2), places=12)
        self.assertAlmostEqual(real.length(B(0, 5), B(1, 5)), 2 * 1.5 * np.sin(pi / 5), places=12)
        np.testing.assert_allclose(real.tet_lengths(0), edge_lengths(real.tet_points(0)), rtol=1e-12)

    def test_vanishing_volume(self):
        spec = LensSpec(7, 2)
        tri = build_triangulation(spec)
        # sin(α + π(q−1−2m)k/p) = 0 at m = 0
        params = GeomParams(alpha=-pi / 7, rho=1.0, sigma=1.0, s=1.0, k=1)
        with self.assertRaises(DegenerateParams):
            realize(tri, params)

    @override_settings(LENS_DELTA_MIN=0.5)
    def test_floor_comes_from_settings(self):
        spec = LensSpec(5, 2)
        params = GeomParams(alpha=0.05, rho=1.0, sigma=1.0, s=1.0, k=1)
        self.assertFalse(is_nondegenerate(spec, params))

    def test_phase_floor_follows_block_tolerance(self):
        self.assertTrue(1e-4 < phase_floor() < 1e-3)
        self.assertGreater(phase_floor(block_tol=1e-12), phase_floor())
        with override_settings(LENS_DELTA_MIN=0.01):
            self.assertEqual(phase_floor(), 0.01)

    def test_nearly_flat_tets(self):
        tri = build_triangulation(LensSpec(5, 2))
        # sin(α + π/5) = −1e-4: thinner than the split can resolve
        with self.assertRaisesMessage(DegenerateParams, "smallest volume phase"):
            realize(tri, GeomParams(alpha=4 * pi / 5 + 1e-4, rho=1.0, sigma=1.0, s=1.0, k=1))
        real = realize(tri, GeomParams(alpha=4 * pi / 5 + 1e-3, rho=1.0, sigma=1.0, s=1.0, k=1))
        self.assertLess(np.max(np.abs(real.defects)), 1e-9)
