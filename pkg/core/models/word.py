"""
字母、单词与展示

文件约定：小写字母为生成元，大写字母为其逆。
单词内部以字符串存储，所有操作返回新的不可变对象。
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, NamedTuple, Sequence, Tuple

from core.errors import DuplicateGenerator, ParseError, UnknownLetter

logger = logging.getLogger(__name__)


def invert_char(c: str) -> str:
    """单个字母取逆（大小写互换）"""
    return c.lower() if c.isupper() else c.upper()


def _invert_text(text: str) -> str:
    return text[::-1].swapcase()


def _free_reduce_text(text: str) -> str:
    stack: List[str] = []
    for c in text:
        if stack and stack[-1] == invert_char(c):
            stack.pop()
        else:
            stack.append(c)
    return "".join(stack)


class Letter(NamedTuple):
    """带符号的生成元字母"""
    base: str
    sign: int

    @property
    def char(self) -> str:
        return self.base if self.sign > 0 else self.base.upper()

    def inverse(self) -> "Letter":
        return Letter(self.base, -self.sign)

    @classmethod
    def from_char(cls, c: str) -> "Letter":
        return cls(c.lower(), -1 if c.isupper() else 1)


@dataclass(frozen=True)
class Word:
    """
    单词：字母的有限序列

    text 使用文件约定的字符串形式，例如 "abA" 表示 a·b·a⁻¹。
    空串即单位元。
    """
    text: str = ""

    def __post_init__(self):
        for c in self.text:
            if not (c.isascii() and c.isalpha()):
                raise UnknownLetter(c)

    def __len__(self) -> int:
        return len(self.text)

    def __iter__(self) -> Iterator[Letter]:
        return (Letter.from_char(c) for c in self.text)

    def __add__(self, other: "Word") -> "Word":
        # 仅拼接，不做约化
        return Word(self.text + other.text)

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Word({self.text!r})"

    @property
    def letters(self) -> Tuple[Letter, ...]:
        return tuple(self)

    @property
    def is_empty(self) -> bool:
        return not self.text

    def prefix(self, i: int) -> "Word":
        return Word(self.text[:i])

    def inverse(self) -> "Word":
        return Word(_invert_text(self.text))

    def power(self, n: int) -> "Word":
        """n 次幂（未约化拼接），n 可为负"""
        if n < 0:
            return Word(_invert_text(self.text) * (-n))
        return Word(self.text * n)

    @classmethod
    def from_letters(cls, letters: Iterable[Letter]) -> "Word":
        return cls("".join(l.char for l in letters))


EMPTY_WORD = Word("")


def render(w: Word) -> str:
    """渲染为文件约定的字符串形式"""
    return w.text


def invert(w: Word) -> Word:
    """逆序并翻转每个字母的符号"""
    return w.inverse()


def free_reduce(w: Word) -> Word:
    """自由约化：删除所有相邻的 x·x⁻¹"""
    return Word(_free_reduce_text(w.text))


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """
    循环约化

    Returns:
        (core, conjugator)，满足 w = conjugator · core · conjugator⁻¹（自由群中），
        且 core 首尾字母不相消
    """
    text = _free_reduce_text(w.text)
    i, j = 0, len(text)
    while j - i >= 2 and text[i] == invert_char(text[j - 1]):
        i += 1
        j -= 1
    return Word(text[i:j]), Word(text[:i])


class Alphabet:
    """
    有序字母表

    ShortLex 序：先按长度，再按字母次序比较；字母次序为声明的生成元依次排列，
    之后是它们的逆，顺序相同（a < b < A < B）
    """

    def __init__(self, generators: Sequence[str]):
        self.generators: Tuple[str, ...] = tuple(generators)
        self.letters: Tuple[str, ...] = self.generators + tuple(g.upper() for g in self.generators)
        self.rank: Dict[str, int] = {c: i for i, c in enumerate(self.letters)}

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, c: str) -> bool:
        return c in self.rank

    def __repr__(self) -> str:
        return f"Alphabet({' '.join(self.generators)})"

    def shortlex_key(self, w: Word) -> Tuple[int, Tuple[int, ...]]:
        return self.text_key(w.text)

    def text_key(self, text: str) -> Tuple[int, Tuple[int, ...]]:
        """ShortLex 排序键（字符串版本）"""
        rank = self.rank
        return len(text), tuple(rank[c] for c in text)

    def sort_shortlex(self, words: Iterable[Word]) -> List[Word]:
        return sorted(words, key=self.shortlex_key)

    def check(self, w: Word) -> Word:
        for c in w.text:
            if c not in self.rank:
                raise UnknownLetter(c, self.generators)
        return w


@dataclass(frozen=True)
class Presentation:
    """
    有限展示 G = ⟨X | R⟩

    关系子在构造时循环约化并去重；约化为空的关系子被丢弃。
    """
    generators: Tuple[str, ...]
    relators: Tuple[Word, ...] = ()

    @cached_property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.generators)

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def is_free(self) -> bool:
        return not self.relators

    @classmethod
    def create(cls, generators: Sequence[str], relators: Sequence[Word] = ()) -> "Presentation":
        """
        校验并规范化

        Raises:
            DuplicateGenerator: 生成元重复
            ParseError: 生成元不是单个小写 ASCII 字母
            UnknownLetter: 关系子使用了未声明的生成元
        """
        seen = set()
        for g in generators:
            if len(g) != 1 or not (g.isascii() and g.isalpha() and g.islower()):
                raise ParseError(f"生成元必须是单个小写字母: '{g}'")
            if g in seen:
                raise DuplicateGenerator(g)
            seen.add(g)

        alphabet = Alphabet(generators)
        cleaned: List[Word] = []
        classes = set()
        for r in relators:
            alphabet.check(r)
            core, _ = cyclic_reduce(r)
            if core.is_empty:
                logger.warning(f"关系子 {r.text} 约化后为空，已忽略")
                continue
            # 同一循环类（含逆）只保留一个
            cls_key = min(_rotations(core.text) + _rotations(_invert_text(core.text)))
            if cls_key in classes:
                logger.warning(f"关系子 {r.text} 与已有关系子等价，已忽略")
                continue
            classes.add(cls_key)
            cleaned.append(core)
        return cls(tuple(generators), tuple(cleaned))

    def describe(self) -> str:
        rels = " ".join(r.text for r in self.relators)
        return f"⟨{' '.join(self.generators)} | {rels}⟩"


def _rotations(text: str) -> List[str]:
    return [text[i:] + text[:i] for i in range(len(text))] or [""]
