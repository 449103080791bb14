import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import InputError, UnsupportedPresentation
from core.models.word import Presentation, Word, free_reduce
from core.services.normalizer import (
    Backend, are_equal, build_context, dehn_reduce, is_trivial,
    symmetrized_rotations, validate_small_cancellation,
)

SURFACE = Presentation.create(["a", "b", "c", "d"], [Word("abABcdCD")])
F2 = Presentation.create(["a", "b"])
SURFACE_ROTATIONS = symmetrized_rotations(SURFACE)

free_words = st.text(alphabet="abAB", max_size=16).map(Word)
surface_words = st.text(alphabet="abcdABCD", max_size=6)


class TestSmallCancellation(unittest.TestCase):

    def test_surface_group_is_c16(self):
        self.assertTrue(validate_small_cancellation(SURFACE))
        self.assertEqual(len(SURFACE_ROTATIONS), 16)

    def test_commutator_presentation_rejected(self):
        z2 = Presentation.create(["a", "b"], [Word("abAB")])
        self.assertFalse(validate_small_cancellation(z2))
        with self.assertRaises(UnsupportedPresentation):
            build_context(z2, delta=1)

    def test_relator_power_rejected(self):
        # aᵏ 的循环置换彼此相同，piece 即整个关系子
        self.assertFalse(validate_small_cancellation(Presentation.create(["a"], [Word("aaaaaaa")])))


class TestBuildContext(unittest.TestCase):

    def test_free_group_defaults(self):
        ctx = build_context(F2)
        self.assertIs(ctx.backend, Backend.FREE_REDUCTION)
        self.assertEqual(ctx.delta, 0)
        self.assertTrue(ctx.is_free)

    def test_relators_need_delta(self):
        with self.assertRaises(InputError):
            build_context(SURFACE)

    def test_negative_delta(self):
        with self.assertRaises(InputError):
            build_context(F2, delta=-1)

    def test_dehn_rules_indexed_by_first_letter(self):
        ctx = build_context(SURFACE, delta=1)
        self.assertIs(ctx.backend, Backend.DEHN)
        self.assertEqual(sorted(ctx.dehn_rules), sorted("abcdABCD"))
        for letter, rules in ctx.dehn_rules.items():
            self.assertEqual(len(rules), 2)
            self.assertTrue(all(r.startswith(letter) for r in rules))
        self.assertEqual(ctx.max_relator_length, 8)


class TestDehnReduction(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.ctx = build_context(SURFACE, delta=1)
        cls.free_ctx = build_context(F2)

    def test_relator_and_rotations_are_trivial(self):
        self.assertTrue(is_trivial(self.ctx, Word("abABcdCD")))
        self.assertTrue(is_trivial(self.ctx, Word("cdCDabAB")))
        self.assertTrue(is_trivial(self.ctx, Word("dcDCbaBA")))

    def test_conjugated_relator_is_trivial(self):
        self.assertTrue(is_trivial(self.ctx, Word("b" + "abABcdCD" + "B")))

    def test_long_piece_replaced_by_complement(self):
        self.assertEqual(dehn_reduce(self.ctx, Word("abABcdC")), Word("d"))

    def test_cancellation_left_of_replacement(self):
        # 替换后自由约化一直消到替换位置左侧
        w = Word("cdCD" + "b" * 20 + "abABcdCD" + "B" * 20 + "abAB")
        self.assertTrue(is_trivial(self.ctx, w))

    def test_generator_is_not_trivial(self):
        self.assertFalse(is_trivial(self.ctx, Word("a")))
        self.assertFalse(is_trivial(self.ctx, Word("abAB")))

    def test_half_relator_not_reduced(self):
        # 恰好一半不触发替换
        self.assertEqual(dehn_reduce(self.ctx, Word("dcDC")), Word("dcDC"))
        self.assertTrue(are_equal(self.ctx, Word("dcDC"), Word("abAB")))

    @given(free_words)
    def test_free_context_is_free_reduction(self, w):
        self.assertEqual(dehn_reduce(self.free_ctx, w), free_reduce(w))

    @given(surface_words, st.sampled_from(SURFACE_ROTATIONS), surface_words)
    @settings(max_examples=100, deadline=None)
    def test_inserting_relator_keeps_element(self, u, r, v):
        self.assertTrue(are_equal(self.ctx, Word(u + r + v), Word(u + v)))

    @given(surface_words)
    @settings(max_examples=100, deadline=None)
    def test_reduction_preserves_element(self, text):
        w = Word(text)
        reduced = dehn_reduce(self.ctx, w)
        self.assertLessEqual(len(reduced), len(w))
        self.assertTrue(are_equal(self.ctx, reduced, w))


if __name__ == '__main__':
    unittest.main()
