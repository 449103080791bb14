"""
随机化端到端验收：界常数、字问题、成员判定、求解器与独立判定器的一致性、确定性
"""
import json
import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from core.models.decision import Budget, Verdict
from core.models.word import Presentation, Word, free_reduce, invert_char
from core.services.bounds import bound_report
from core.services.cayley import ball, check_lemma3
from core.services.normalizer import build_context, is_trivial
from core.services.solver import (
    decide_power_conjugacy, decide_subgroup_conjugacy, oracle_brute_force, oracle_free_conjugacy,
)
from core.services.subgroup import make_subgroup, member

F2 = Presentation.create(["a", "b"])
F3 = Presentation.create(["a", "b", "c"])
SURFACE = Presentation.create(["a", "b", "c", "d"], [Word("abABcdCD")])


def random_word(rng, letters, length):
    return "".join(letters[i] for i in rng.integers(0, len(letters), size=length))


def random_reduced_word(rng, letters, length):
    out = []
    while len(out) < length:
        c = letters[rng.integers(0, len(letters))]
        if out and out[-1] == invert_char(c):
            continue
        out.append(c)
    return "".join(out)


def random_cyclically_reduced_word(rng, letters, length):
    while True:
        w = random_reduced_word(rng, letters, length)
        if length < 2 or w[0] != invert_char(w[-1]):
            return w


def random_generators(rng, count_max, length_max):
    count = int(rng.integers(1, count_max + 1))
    return [Word(random_reduced_word(rng, "abAB", int(rng.integers(1, length_max + 1))))
            for _ in range(count)]


def folded_membership(generators):
    """
    朴素折叠：花瓣图上反复合并同源同标或同汇同标的两条边，返回成员判定函数

    只用小写标签存边，x⁻¹ 视为反向的 x 边
    """
    edges = set()
    next_vertex = 1
    for g in generators:
        text = free_reduce(g).text
        current = 0
        for i, c in enumerate(text):
            if i == len(text) - 1:
                target = 0
            else:
                target = next_vertex
                next_vertex += 1
            if c.islower():
                edges.add((current, c, target))
            else:
                edges.add((target, c.lower(), current))
            current = target

    def find_fold():
        for e1 in edges:
            for e2 in edges:
                if e1 == e2 or e1[1] != e2[1]:
                    continue
                if e1[0] == e2[0] and e1[2] != e2[2]:
                    return e1[2], e2[2]
                if e1[2] == e2[2] and e1[0] != e2[0]:
                    return e1[0], e2[0]
        return None

    while True:
        pair = find_fold()
        if pair is None:
            break
        keep, drop = min(pair), max(pair)
        edges = {(keep if u == drop else u, x, keep if v == drop else v) for u, x, v in edges}

    def accepts(text):
        current = 0
        for c in text:
            if c.islower():
                step = [v for u, x, v in edges if u == current and x == c]
            else:
                step = [u for u, x, v in edges if v == current and x == c.lower()]
            if not step:
                return False
            current = step[0]
        return current == 0

    return accepts


def product_closure(generators, factors, radius):
    """至多 factors 个生成元（及逆）之积中长度 ≤ radius 的元素"""
    letters = [g.text for g in generators] + [g.inverse().text for g in generators]
    layer = {""}
    found = {""}
    for _ in range(factors):
        layer = {free_reduce(Word(p + x)).text for p in layer for x in letters}
        found |= layer
    return {w for w in found if len(w) <= radius}


class TestBoundFormulas(unittest.TestCase):

    def test_f2_constants(self):
        m = 2 * 3 ** 54 - 1
        report = bound_report(build_context(F2, delta=1), 1)
        self.assertEqual((report.L, report.Lprime, report.Cprime), (87381, 85, 182))
        self.assertEqual(report.C, 6 + (m * m + 1) * 87381)

        report = bound_report(build_context(F2, delta=0), 1)
        self.assertEqual((report.L, report.Lprime, report.Cprime), (1, 5, 14))


class TestWordProblem(unittest.TestCase):

    def test_surface_words(self):
        ctx = build_context(SURFACE, delta=1)
        rng = np.random.default_rng(2024)
        self.assertTrue(is_trivial(ctx, Word("abABcdCD")))
        for _ in range(1000):
            w = Word(random_word(rng, "abcdABCD", int(rng.integers(0, 21))))
            self.assertTrue(is_trivial(ctx, w + w.inverse()), w.text)

    def test_free_reduced_words_are_nontrivial(self):
        ctx = build_context(F2)
        rng = np.random.default_rng(7)
        for _ in range(1000):
            w = Word(random_reduced_word(rng, "abAB", int(rng.integers(1, 21))))
            self.assertFalse(is_trivial(ctx, w), w.text)


class TestMembershipOracle(unittest.TestCase):

    def test_stallings_matches_naive_folding(self):
        ctx = build_context(F2)
        words = ball(ctx, 6)
        rng = np.random.default_rng(11)
        for _ in range(50):
            generators = random_generators(rng, 3, 4)
            K = make_subgroup(ctx, generators)
            accepts = folded_membership(generators)
            disagreements = [w.text for w in words if member(ctx, K, w) != accepts(w.text)]
            self.assertEqual(disagreements, [], [g.text for g in generators])

    def test_short_products_are_members(self):
        ctx = build_context(F2)
        rng = np.random.default_rng(12)
        for _ in range(50):
            generators = random_generators(rng, 3, 4)
            K = make_subgroup(ctx, generators)
            for text in product_closure(generators, 4, 6):
                self.assertTrue(member(ctx, K, Word(text)), text)


class TestSolverAgainstBruteForce(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.ctx = build_context(F2)
        rng = np.random.default_rng(31)
        cls.instances = [(random_generators(rng, 2, 4), random_generators(rng, 2, 4)) for _ in range(100)]

    def subgroups(self, instance):
        h_gens, k_gens = instance
        return make_subgroup(self.ctx, h_gens), make_subgroup(self.ctx, k_gens)

    def test_identical_verdicts_and_witnesses(self):
        budget = Budget(max_conjugator_len=5, max_element_len=6)
        yes = 0
        for instance in self.instances:
            H, K = self.subgroups(instance)
            decision = decide_subgroup_conjugacy(self.ctx, H, K, budget)
            oracle = oracle_brute_force(self.ctx, H, K, 5, 6)
            self.assertIs(decision.verdict, oracle.verdict)
            self.assertEqual(decision.witness, oracle.witness)
            if decision.verdict is Verdict.YES:
                yes += 1
                w = decision.witness
                self.assertTrue(w.h.text)
                self.assertTrue(member(self.ctx, H, w.h))
                self.assertTrue(member(self.ctx, K, w.g + w.h + w.g.inverse()))
        self.assertGreater(yes, 0)

    def test_threads_give_identical_output(self):
        for instance in self.instances[:20]:
            H, K = self.subgroups(instance)
            single = decide_subgroup_conjugacy(self.ctx, H, K, Budget(5, 6))
            multi = decide_subgroup_conjugacy(self.ctx, H, K, Budget(5, 6, threads=4, chunk_size=8))
            self.assertEqual(json.dumps(single.to_dict()), json.dumps(multi.to_dict()))


class TestFellowTravelerScan(unittest.TestCase):

    def test_no_violations(self):
        ctx = build_context(F2)
        H = make_subgroup(ctx, [Word("a")])
        K = make_subgroup(ctx, [Word("baB")])
        applicable = set()
        for g in ball(ctx, 4):
            for n in range(1, 4):
                h = Word("a").power(n)
                if not member(ctx, K, g + h + g.inverse()):
                    continue
                report = check_lemma3(ctx, H, K, g, h)
                if report.applicable:
                    applicable.add(g.text)
                    self.assertEqual(report.violations, (), g.text)
                    self.assertTrue(report.passed)
        self.assertIn("b", applicable)


class TestPowerConjugacyOracle(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.ctx = build_context(F2)
        rng = np.random.default_rng(47)
        pairs = []
        for i in range(200):
            v = random_cyclically_reduced_word(rng, "abAB", int(rng.integers(1, 6)))
            if i % 2 == 0 and len(v) <= 2:
                # 构造一个确实共轭于 vⁿ 的 u：vⁿ 的循环置换，可能取逆
                n = int(rng.integers(1, 5 // len(v) + 1))
                power = v * n
                shift = int(rng.integers(0, len(power)))
                u = power[shift:] + power[:shift]
                if rng.integers(0, 2):
                    u = Word(u).inverse().text
            else:
                u = random_cyclically_reduced_word(rng, "abAB", int(rng.integers(1, 6)))
            pairs.append((Word(u), Word(v)))
        cls.pairs = pairs

    def test_matches_cyclic_word_oracle(self):
        budget = Budget(max_conjugator_len=5)
        yes = 0
        for u, v in self.pairs:
            decision = decide_power_conjugacy(self.ctx, u, v, budget, max_exponent=6)
            expected = any(oracle_free_conjugacy(u, v.power(n))
                           for n in range(-6, 7) if n != 0)
            self.assertEqual(decision.verdict is Verdict.YES, expected, (u.text, v.text))
            if expected:
                yes += 1
                self.assertTrue(oracle_free_conjugacy(u, v.power(decision.witness.exponent)))
        self.assertGreater(yes, 0)

    def test_threads_give_identical_output(self):
        for u, v in self.pairs[:40]:
            single = decide_power_conjugacy(self.ctx, u, v, Budget(max_conjugator_len=5))
            multi = decide_power_conjugacy(self.ctx, u, v, Budget(max_conjugator_len=5, threads=4, chunk_size=8))
            self.assertEqual(json.dumps(single.to_dict()), json.dumps(multi.to_dict()))


class TestBallCounts(unittest.TestCase):

    def test_free_group_growth(self):
        f2 = build_context(F2)
        for n in range(7):
            self.assertEqual(len(ball(f2, n)), 2 * 3 ** n - 1)
        f3 = build_context(F3)
        for n in range(5):
            self.assertEqual(len(ball(f3, n)), 1 + 6 * (5 ** n - 1) // 4)


if __name__ == '__main__':
    unittest.main()
