from django.test import SimpleTestCase

from torsion.combinatorics import (
    B,
    C,
    Edge,
    LensSpec,
    build_triangulation,
    deck_shift,
    incident_tets,
    mod_inverse,
)
from torsion.exceptions import InvalidSpec, NotCoprime, UnknownEdge


class ModInverseTests(SimpleTestCase):
    def test_small_inverses(self):
        self.assertEqual(mod_inverse(1, 7), 1)
        self.assertEqual(mod_inverse(2, 5), 3)
        self.assertEqual(mod_inverse(3, 7), 5)

    def test_not_coprime(self):
        with self.assertRaises(NotCoprime):
            mod_inverse(2, 4)


class LensSpecTests(SimpleTestCase):
    def test_q_inv(self):
        self.assertEqual(LensSpec(5, 2).q_inv, 3)
        self.assertEqual(LensSpec(4, 3).q_inv, 3)

    def test_rejects_small_p(self):
        with self.assertRaisesMessage(InvalidSpec, "p must be ≥ 3"):
            LensSpec(2, 1)

    def test_rejects_q_out_of_range(self):
        with self.assertRaises(InvalidSpec):
            LensSpec(5, 5)

    def test_rejects_common_factor(self):
        with self.assertRaises(NotCoprime):
            LensSpec(6, 2)


class TriangulationTests(SimpleTestCase):
    def test_counts_for_p3(self):
        tri = build_triangulation(LensSpec(3, 1))
        self.assertEqual(len(tri.vertices), 6)
        self.assertEqual(len(tri.edges), 15)
        self.assertEqual(len(tri.tets), 9)

    def test_counts_and_euler_characteristic(self):
        for p, q in [(3, 2), (4, 1), (5, 2), (7, 3), (8, 3)]:
            tri = build_triangulation(LensSpec(p, q))
            self.assertEqual(len(tri.vertices), 2 * p)
            self.assertEqual(len(tri.edges), p * p + 2 * p)
            self.assertEqual(len(tri.tets), p * p)
            self.assertEqual(tri.face_count, 2 * p * p)
            self.assertEqual(tri.euler_characteristic(), 0)

    def test_blocks_cover_edges_once(self):
        tri = build_triangulation(LensSpec(7, 3))
        seen = [e.key for m in range(7) for e in tri.block_edges(m)]
        self.assertEqual(len(seen), len(set(seen)))
        self.assertEqual(set(seen), {e.key for e in tri.edges})
        self.assertTrue(all(len(tri.block_edges(m)) == 9 for m in range(7)))

    def test_block_one_of_l52(self):
        tri = build_triangulation(LensSpec(5, 2))
        self.assertEqual(tri.block_vertices(1), (B(1, 5), C(3, 5)))
        edges = tri.block_edges(1)
        self.assertEqual(edges[0].key, Edge(B(1, 5), B(2, 5)).key)
        self.assertEqual(edges[-1].key, Edge(C(3, 5), C(4, 5)).key)
        self.assertEqual({e.key for e in edges[1:-1]}, {Edge(B(m, 5), C(3, 5)).key for m in range(5)})
        # B-C slots start at B_m
        self.assertEqual(edges[1].key, Edge(B(1, 5), C(3, 5)).key)

    def test_incidence_degrees(self):
        tri = build_triangulation(LensSpec(6, 5))
        self.assertEqual(sum(len(inc) for inc in tri.edge_tets), 6 * 36)
        for edge, inc in zip(tri.edges, tri.edge_tets):
            expected = 4 if edge.family == "BC" else 6
            self.assertEqual(len(inc), expected, str(edge))

    def test_tet_vertex_order(self):
        tri = build_triangulation(LensSpec(5, 2))
        tet = tri.tets[tri.tet_index(2, 4)]
        self.assertEqual(tet.vertices, (C(2, 5), C(3, 5), B(0, 5), B(4, 5)))


class IncidentTetsTests(SimpleTestCase):
    def names(self, tri, a, b):
        return {(tet.n, tet.m) for tet, _ in incident_tets(tri, (a, b))}

    def test_axis_edges(self):
        tri = build_triangulation(LensSpec(4, 1))
        self.assertEqual(self.names(tri, C(0, 4), C(1, 4)), {(0, m) for m in range(4)})
        self.assertEqual(self.names(tri, B(0, 4), B(1, 4)), {(n, 0) for n in range(4)})

    def test_mixed_edge(self):
        tri = build_triangulation(LensSpec(5, 2))
        self.assertEqual(self.names(tri, B(2, 5), C(1, 5)), {(1, 2), (1, 1), (0, 2), (0, 1)})

    def test_b0c0_wraps_around(self):
        for p in (3, 6, 9):
            tri = build_triangulation(LensSpec(p, 1))
            self.assertEqual(
                self.names(tri, B(0, p), C(0, p)),
                {(0, 0), (0, p - 1), (p - 1, 0), (p - 1, p - 1)},
            )

    def test_slot_points_at_edge(self):
        tri = build_triangulation(LensSpec(5, 2))
        edge = (B(2, 5), C(1, 5))
        for tet, slot in incident_tets(tri, edge):
            i, j = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))[slot]
            self.assertEqual({tet.vertices[i], tet.vertices[j]}, set(edge))

    def test_unknown_edge(self):
        tri = build_triangulation(LensSpec(5, 2))
        with self.assertRaises(UnknownEdge):
            incident_tets(tri, (B(0, 5), B(2, 5)))


class DeckShiftTests(SimpleTestCase):
    def test_vertices_and_edges(self):
        tri = build_triangulation(LensSpec(5, 2))
        self.assertEqual(deck_shift(tri, C(0, 5)), C(3, 5))
        self.assertEqual(deck_shift(tri, Edge(B(4, 5), C(0, 5))).key, Edge(B(0, 5), C(3, 5)).key)

    def test_shift_preserves_local_slots(self):
        tri = build_triangulation(LensSpec(7, 3))
        for m in range(7):
            for slot, edge in enumerate(tri.block_edges(m)):
                shifted = deck_shift(tri, edge)
                self.assertEqual(tri.block_edges(m + 1)[slot].key, shifted.key)
