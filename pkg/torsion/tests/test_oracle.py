from math import gcd, sqrt

import numpy as np
from django.test import SimpleTestCase

from torsion.combinatorics import LensSpec
from torsion.engine import compute_all
from torsion.exceptions import InvalidSpec
from torsion.oracle import (
    BRANCH_J0,
    BRANCH_MIDDLE,
    BRANCH_PM1,
    branch,
    closed_form_invariant,
    compare,
    delta,
    homeomorphic,
    homotopy_equivalent,
    multisets_differ,
    oracle_multisets,
    oracle_table,
)


class DeltaTests(SimpleTestCase):
    def test_values(self):
        self.assertEqual(delta(0, 5, 2), 0.0)
        self.assertEqual(delta(5, 5, 2), 0.0)
        self.assertAlmostEqual(delta(1, 5, 2), sqrt(5), places=12)
        self.assertAlmostEqual((delta(1, 5, 2) * delta(2, 5, 2)) ** 2, 25.0, places=10)

    def test_reduced_modulo_p(self):
        self.assertEqual(delta(8, 7, 3), delta(1, 7, 3))
        self.assertEqual(delta(-1, 7, 3), delta(6, 7, 3))

    def test_product_identity(self):
        for p in range(3, 13):
            for q in range(1, p):
                if gcd(p, q) != 1:
                    continue
                product = np.prod([abs(delta(m, p, q)) for m in range(1, p)])
                self.assertAlmostEqual(product / p ** 2, 1.0, places=10)


class ClosedFormTests(SimpleTestCase):
    def test_spot_values(self):
        self.assertAlmostEqual(closed_form_invariant(5, 2, 0, 1).value, 0.04, places=12)
        self.assertAlmostEqual(closed_form_invariant(4, 1, 2, 1).value, 256.0, places=9)
        self.assertAlmostEqual(closed_form_invariant(3, 1, 1, 1).value, 1.0, places=12)

    def test_branches(self):
        self.assertEqual(branch(5, 0), BRANCH_J0)
        self.assertEqual(branch(5, 1), BRANCH_PM1)
        self.assertEqual(branch(5, 4), BRANCH_PM1)
        self.assertEqual(branch(5, 2), BRANCH_MIDDLE)
        self.assertEqual(closed_form_invariant(3, 1, 2, 1).formula_branch, BRANCH_PM1)

    def test_sign_follows_parity_of_p(self):
        self.assertGreater(closed_form_invariant(5, 2, 0, 1).value, 0)
        self.assertLess(closed_form_invariant(6, 1, 0, 1).value, 0)
        self.assertLess(closed_form_invariant(7, 3, 3, 2).value, 0)
        self.assertGreater(closed_form_invariant(6, 1, 3, 1).value, 0)

    def test_middle_branch_mirror(self):
        for p, q in [(7, 3), (9, 2), (11, 4)]:
            for j in range(2, p - 1):
                for k in range(1, p // 2 + 1):
                    if gcd(k, p) != 1:
                        continue
                    self.assertAlmostEqual(
                        closed_form_invariant(p, q, j, k).value / closed_form_invariant(p, q, p - j, k).value,
                        1.0,
                        places=10,
                    )

    def test_rejects_bad_indices(self):
        with self.assertRaises(InvalidSpec):
            closed_form_invariant(5, 2, 5, 1)
        with self.assertRaises(InvalidSpec):
            closed_form_invariant(2, 1, 0, 1)

    def test_table(self):
        table = oracle_table(5, 2)
        self.assertEqual(len(table), 10)
        self.assertEqual([v.value for v in table if v.j == 0], [closed_form_invariant(5, 2, 0, k).value for k in (1, 2)])
        self.assertEqual({(v.j, v.k) for v in oracle_table(8, 3)}, {(j, k) for j in range(8) for k in (1, 3)})
        with self.assertRaises(InvalidSpec):
            oracle_table(6, 4)


class LensClassificationTests(SimpleTestCase):
    def test_l7(self):
        self.assertTrue(homotopy_equivalent(7, 1, 2))
        self.assertFalse(homeomorphic(7, 1, 2))
        self.assertTrue(homeomorphic(7, 2, 4))
        self.assertTrue(homeomorphic(7, 3, 4))

    def test_not_homotopy_equivalent(self):
        # 3 is neither a square nor minus a square mod 5
        self.assertFalse(homotopy_equivalent(5, 1, 3))

    def test_l71_l72_oracle_multisets_differ(self):
        first, second = oracle_multisets(7, 1), oracle_multisets(7, 2)
        self.assertTrue(multisets_differ(first[0], second[0], 1e-3))

    def test_inverse_q_oracle_multisets_agree(self):
        for p in range(3, 13):
            for q in range(1, p):
                if gcd(p, q) != 1:
                    continue
                first = oracle_multisets(p, q)
                second = oracle_multisets(p, LensSpec(p, q).q_inv)
                for j in first:
                    self.assertFalse(multisets_differ(first[j], second[j], 1e-9 * max(1.0, max(abs(x) for x in first[j]))), (p, q, j))

    def test_multisets_differ(self):
        self.assertFalse(multisets_differ([1.0, 2.0], [2.0, 1.0]))
        self.assertTrue(multisets_differ([1.0, 2.0], [1.0, 2.1]))
        self.assertTrue(multisets_differ([1.0], [1.0, 1.0]))


class CompareTests(SimpleTestCase):
    def test_l52_passes(self):
        verdict = compare(compute_all(LensSpec(5, 2), seed=1), tol=1e-6)
        self.assertTrue(verdict.passed)
        self.assertEqual(len(verdict.cells), 10)
        self.assertLess(verdict.worst, 1e-6)
        self.assertEqual(verdict.summary()["cells"], 10)

    def test_degenerate_cells_are_listed(self):
        verdict = compare(compute_all(LensSpec(4, 1), seed=0))
        self.assertTrue(verdict.passed)
        self.assertEqual(verdict.degenerate, [(j, 2) for j in range(4)])

    def test_tampered_delta_fails(self):
        def tampered(m, p, q):
            value = delta(m, p, q)
            return value * 1.01 if m == 1 else value

        verdict = compare(compute_all(LensSpec(5, 2), seed=1), delta_fn=tampered)
        self.assertFalse(verdict.passed)
