import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import InputError
from core.models.reports import BoundReport
from core.models.word import Presentation, Word
from core.services.bounds import (
    ball_size_at_most, bound_report, compute_bounds, count_elements, count_words, free_ball_size,
)
from core.services.cayley import ball
from core.services.normalizer import build_context
from core.services.subgroup import make_subgroup

F2 = Presentation.create(["a", "b"])
SURFACE = Presentation.create(["a", "b", "c", "d"], [Word("abABcdCD")])


class TestCounting(unittest.TestCase):

    def test_count_words(self):
        self.assertEqual(count_words(4, 0), 0)
        self.assertEqual(count_words(4, 1), 1)
        self.assertEqual(count_words(4, 3), 21)
        self.assertEqual(count_words(0, 3), 1)
        self.assertEqual(count_words(1, 5), 5)
        with self.assertRaises(InputError):
            count_words(-1, 2)

    @given(st.integers(min_value=2, max_value=10), st.integers(min_value=0, max_value=30))
    def test_count_words_is_geometric_sum(self, s, n):
        self.assertEqual(count_words(s, n), sum(s ** i for i in range(n)))

    def test_free_ball_size(self):
        self.assertEqual(free_ball_size(0, 5), 1)
        self.assertEqual(free_ball_size(1, 3), 7)
        self.assertEqual(free_ball_size(2, 2), 17)
        self.assertEqual(free_ball_size(2, 6), 2 * 3 ** 6 - 1)
        with self.assertRaises(InputError):
            free_ball_size(2, -1)

    def test_ball_size_at_most(self):
        ctx = build_context(F2)
        self.assertEqual(ball_size_at_most(ctx, 2, 100), 17)
        self.assertIsNone(ball_size_at_most(ctx, 2, 10))
        self.assertIsNone(ball_size_at_most(ctx, 10 ** 60, 100))

    def test_count_elements_surface(self):
        ctx = build_context(SURFACE, delta=1)
        self.assertEqual(count_elements(ctx, 2), 65)
        self.assertEqual(count_elements(ctx, 2), len(ball(ctx, 2)))

    def test_word_count_bounds_element_count(self):
        for ctx, radii in ((build_context(F2), range(7)), (build_context(SURFACE, delta=1), range(4))):
            s = 2 * ctx.presentation.rank
            for n in radii:
                self.assertGreaterEqual(count_words(s, n + 1), count_elements(ctx, n))


class TestBoundReport(unittest.TestCase):

    def test_delta_zero(self):
        report = bound_report(build_context(F2), 1)
        self.assertEqual((report.L, report.Lprime, report.Cprime), (1, 5, 14))
        self.assertEqual(report.m, 1062881)
        self.assertEqual(report.C, 2 + (1062881 ** 2 + 1) * 1)
        self.assertFalse(report.m_is_upper_bound)

    def test_delta_one(self):
        report = bound_report(build_context(F2, delta=1), 1)
        m = 2 * 3 ** 54 - 1
        self.assertEqual(report.L, 87381)
        self.assertEqual(report.Lprime, 85)
        self.assertEqual(report.Cprime, 182)
        self.assertEqual(report.m, m)
        self.assertEqual(report.C, 6 + (m * m + 1) * 87381)
        self.assertEqual(report.short_conjugator_h_bound, 3 + 8)
        self.assertEqual(report.reduction_h_bound, 2 * 87)

    def test_big_integers_serialized_as_strings(self):
        report = bound_report(build_context(F2, delta=1), 1)
        data = report.to_dict()
        self.assertEqual(data["C"], str(report.C))
        self.assertEqual(data["Cprime"], "182")
        self.assertEqual(BoundReport.from_dict(data), report)

    def test_mu_raised_to_one(self):
        self.assertEqual(bound_report(build_context(F2), 0).mu, 1)

    def test_surface_uses_word_count_upper_bound(self):
        report = bound_report(build_context(SURFACE, delta=1), 1)
        self.assertTrue(report.m_is_upper_bound)
        self.assertEqual(report.m, count_words(8, 55))
        self.assertEqual(report.L, 19173961)
        self.assertEqual(report.Lprime, 585)
        self.assertEqual(report.Cprime, 1182)

    @given(st.integers(0, 3), st.integers(1, 4))
    @settings(max_examples=30, deadline=None)
    def test_constants_grow_with_delta_and_mu(self, delta, mu):
        report = bound_report(build_context(F2, delta=delta), mu)
        for larger in (bound_report(build_context(F2, delta=delta + 1), mu),
                       bound_report(build_context(F2, delta=delta), mu + 1)):
            self.assertLessEqual(report.C, larger.C)
            self.assertLessEqual(report.Cprime, larger.Cprime)

    def test_compute_bounds_uses_larger_mu(self):
        ctx = build_context(F2)
        H = make_subgroup(ctx, [Word("a")])
        K = make_subgroup(ctx, [Word("baaB")])
        report = compute_bounds(ctx, H, K)
        self.assertEqual(report.mu, 2)
        self.assertEqual(report, bound_report(ctx, 2))


if __name__ == '__main__':
    unittest.main()
