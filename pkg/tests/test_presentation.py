import os
import sys
import tempfile
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import DuplicateGenerator, InputError, ParseError, UnknownLetter
from core.models.word import (
    Alphabet, Presentation, Word, cyclic_reduce, free_reduce, invert, render,
)
from core.parsers.presentation_parser import (
    load_group_file, parse_group_document, parse_subgroup_spec, parse_word,
)

words = st.text(alphabet="abAB", max_size=16).map(Word)


class TestWord(unittest.TestCase):

    def test_invert(self):
        self.assertEqual(invert(Word("abA")), Word("aBA"))
        self.assertEqual(invert(Word("")), Word(""))

    def test_free_reduce(self):
        self.assertEqual(free_reduce(Word("abBA")), Word(""))
        self.assertEqual(free_reduce(Word("aabBcC")), Word("aa"))

    def test_cyclic_reduce(self):
        core, conjugator = cyclic_reduce(Word("baaB"))
        self.assertEqual(core, Word("aa"))
        self.assertEqual(conjugator, Word("b"))

    def test_power(self):
        self.assertEqual(Word("ab").power(2), Word("abab"))
        self.assertEqual(Word("ab").power(-1), Word("BA"))
        self.assertEqual(Word("ab").power(0), Word(""))

    def test_render_uses_file_convention(self):
        self.assertEqual(render(Word("aBc")), "aBc")

    def test_non_letter_rejected(self):
        with self.assertRaises(UnknownLetter):
            Word("a1")

    def test_shortlex_order(self):
        alphabet = Alphabet(["a", "b"])
        ordered = alphabet.sort_shortlex([Word("B"), Word("aa"), Word("a"), Word("A"), Word("b")])
        self.assertEqual([w.text for w in ordered], ["a", "b", "A", "B", "aa"])

    @given(words)
    def test_invert_is_involution(self, w):
        self.assertEqual(invert(invert(w)), w)

    @given(words)
    def test_free_reduce_idempotent(self, w):
        once = free_reduce(w)
        self.assertEqual(free_reduce(once), once)
        self.assertLessEqual(len(once), len(w))

    @given(words)
    @settings(max_examples=50)
    def test_word_times_inverse_reduces_to_empty(self, w):
        self.assertEqual(free_reduce(w + invert(w)), Word(""))


class TestPresentation(unittest.TestCase):

    def test_duplicate_generator(self):
        with self.assertRaises(DuplicateGenerator):
            Presentation.create(["a", "a"])

    def test_relators_deduplicated(self):
        # abAB 与其逆 baBA、平凡关系子 aA
        p = Presentation.create(["a", "b"], [Word("abAB"), Word("baBA"), Word("aA")])
        self.assertEqual(p.relators, (Word("abAB"),))

    def test_relator_cyclically_reduced(self):
        p = Presentation.create(["a", "b"], [Word("Babbb")])
        self.assertEqual(p.relators, (Word("abb"),))

    def test_unknown_letter_in_relator(self):
        with self.assertRaises(UnknownLetter):
            Presentation.create(["a"], [Word("ab")])


class TestParser(unittest.TestCase):

    def test_group_document(self):
        text = "# 亏格 2\ngenerators: a b c d\nrelators: abABcdCD  # 曲面\ndelta: 1\n"
        document = parse_group_document(text)
        self.assertEqual(document.presentation.generators, ("a", "b", "c", "d"))
        self.assertEqual(document.presentation.relators, (Word("abABcdCD"),))
        self.assertEqual(document.delta, 1)

    def test_free_group_without_relators(self):
        document = parse_group_document("generators: a b\n")
        self.assertTrue(document.presentation.is_free)
        self.assertIsNone(document.delta)

    def test_unknown_key_has_line_number(self):
        with self.assertRaises(ParseError) as cm:
            parse_group_document("generators: a b\n\nrank: 2\n")
        self.assertEqual(cm.exception.line_number, 3)

    def test_duplicate_generator_line_number(self):
        with self.assertRaises(DuplicateGenerator) as cm:
            parse_group_document("# x\ngenerators: a b a\n")
        self.assertEqual(cm.exception.line_number, 2)
        self.assertEqual(cm.exception.symbol, "a")

    def test_relator_with_unknown_letter(self):
        with self.assertRaises(ParseError) as cm:
            parse_group_document("generators: a b\nrelators: abc\n")
        self.assertEqual(cm.exception.line_number, 2)

    def test_missing_generators(self):
        with self.assertRaises(ParseError):
            parse_group_document("relators: ab\n")

    def test_parse_word_unknown_letter(self):
        with self.assertRaises(UnknownLetter) as cm:
            parse_word("abX", ["a", "b"])
        self.assertEqual(cm.exception.letter, "X")
        self.assertIsInstance(cm.exception, InputError)

    def test_parse_word_keeps_text_verbatim(self):
        self.assertEqual(parse_word("aBA", ["a", "b"]).text, "aBA")
        for text in (" ab", "ab\n", "a b"):
            with self.assertRaises(UnknownLetter):
                parse_word(text, ["a", "b"])

    def test_subgroup_spec(self):
        spec = parse_subgroup_spec("generators: aa b\nmu: 2\nbackend: ball-closure\n", ["a", "b"])
        self.assertEqual(spec.generators, (Word("aa"), Word("b")))
        self.assertEqual(spec.mu, 2)
        self.assertEqual(spec.backend, "ball-closure")

    def test_subgroup_spec_rejects_bad_values(self):
        with self.assertRaises(ParseError):
            parse_subgroup_spec("generators: a\nbackend: todd-coxeter\n", ["a"])
        with self.assertRaises(ParseError):
            parse_subgroup_spec("generators: a\nmu: -1\n", ["a"])
        with self.assertRaises(ParseError):
            parse_subgroup_spec("mu: 1\n", ["a"])

    def test_load_gb18030_file_with_comment(self):
        content = "# 秩 2 自由群\ngenerators: a b\n"
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "f2.grp")
            with open(path, "wb") as f:
                f.write(content.encode("gb18030"))
            document = load_group_file(path)
        self.assertEqual(document.presentation.generators, ("a", "b"))

    def test_load_file_with_bom(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "z.grp")
            with open(path, "w", encoding="utf-8-sig") as f:
                f.write("generators: a\n")
            document = load_group_file(path)
        self.assertEqual(document.presentation.generators, ("a",))


if __name__ == '__main__':
    unittest.main()
