"""
展示与子群文件解析模块

展示文件（逐行 key: value）:
    generators: a b c d
    relators: abABcdCD
    delta: 1

子群文件:
    generators: aa b
    mu: 1
    backend: stallings | ball-closure

空行与 # 开头的注释行被忽略。
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from core.errors import DuplicateGenerator, ParseError, UnknownLetter
from core.models.word import Alphabet, Presentation, Word
from core.utils.utils import read_text_file

logger = logging.getLogger(__name__)

GROUP_KEYS = ("generators", "relators", "delta")
SUBGROUP_KEYS = ("generators", "mu", "backend")
BACKEND_NAMES = ("stallings", "ball-closure")


@dataclass(frozen=True)
class GroupDocument:
    """展示文件的解析结果"""
    presentation: Presentation
    delta: Optional[int] = None


@dataclass(frozen=True)
class SubgroupSpec:
    """子群文件的解析结果（尚未绑定群上下文）"""
    generators: Tuple[Word, ...]
    mu: Optional[int] = None
    backend: Optional[str] = None


def parse_word(text: str, alphabet: Union[Alphabet, Sequence[str]]) -> Word:
    """
    按文件约定解析单词，不做任何约化；返回的 Word 逐字等于 text（空白同样是未知字母）

    Args:
        text: 如 "abA"
        alphabet: 生成元列表或 Alphabet

    Raises:
        UnknownLetter: 出现字母表之外的字母
    """
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(alphabet)
    for c in text:
        if c not in alphabet:
            raise UnknownLetter(c, alphabet.generators)
    return Word(text)


def _split_lines(text: str, allowed: Sequence[str]) -> List[Tuple[int, str, List[str]]]:
    entries = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"缺少 ':' 分隔符: {raw.strip()}", line_number)
        key, value = line.split(":", 1)
        key = key.strip().lower()
        if key not in allowed:
            raise ParseError(f"未知字段 '{key}'，允许的字段: {', '.join(allowed)}", line_number)
        entries.append((line_number, key, value.split()))
    return entries


def _parse_generators(entries: List[Tuple[int, str, List[str]]]) -> List[str]:
    gen_entries = [e for e in entries if e[1] == "generators"]
    if not gen_entries:
        raise ParseError("缺少 generators 行")
    if len(gen_entries) > 1:
        raise ParseError("generators 只能声明一次", gen_entries[1][0])
    line_number, _, tokens = gen_entries[0]
    seen = set()
    for g in tokens:
        if len(g) != 1 or not (g.isascii() and g.isalpha() and g.islower()):
            raise ParseError(f"生成元必须是单个小写字母: '{g}'", line_number)
        if g in seen:
            raise DuplicateGenerator(g, line_number)
        seen.add(g)
    return tokens


def _parse_non_negative(tokens: List[str], key: str, line_number: int) -> int:
    if len(tokens) != 1:
        raise ParseError(f"{key} 需要恰好一个整数", line_number)
    try:
        value = int(tokens[0])
    except ValueError:
        raise ParseError(f"{key} 不是整数: '{tokens[0]}'", line_number)
    if value < 0:
        raise ParseError(f"{key} 必须非负", line_number)
    return value


def parse_group_document(text: str) -> GroupDocument:
    """
    解析展示文件（含可选的 delta）

    Raises:
        ParseError: 格式错误（带行号）
        DuplicateGenerator: 生成元重复
    """
    entries = _split_lines(text, GROUP_KEYS)
    generators = _parse_generators(entries)
    alphabet = Alphabet(generators)

    relators: List[Word] = []
    delta: Optional[int] = None
    for line_number, key, tokens in entries:
        if key == "relators":
            for token in tokens:
                try:
                    relators.append(parse_word(token, alphabet))
                except UnknownLetter as e:
                    raise ParseError(str(e), line_number)
        elif key == "delta":
            if delta is not None:
                raise ParseError("delta 只能声明一次", line_number)
            delta = _parse_non_negative(tokens, "delta", line_number)

    presentation = Presentation.create(generators, relators)
    logger.debug(f"解析展示: {presentation.describe()} (delta={delta})")
    return GroupDocument(presentation, delta)


def parse_presentation(text: str) -> Presentation:
    """解析展示文件，只返回展示本身"""
    return parse_group_document(text).presentation


def parse_subgroup_spec(text: str, alphabet: Union[Alphabet, Sequence[str]]) -> SubgroupSpec:
    """
    解析子群文件

    Raises:
        ParseError: 格式错误、未知后端或未知字母（带行号）
    """
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(alphabet)
    entries = _split_lines(text, SUBGROUP_KEYS)

    generators: List[Word] = []
    mu: Optional[int] = None
    backend: Optional[str] = None
    seen_generators = False
    for line_number, key, tokens in entries:
        if key == "generators":
            seen_generators = True
            for token in tokens:
                try:
                    generators.append(parse_word(token, alphabet))
                except UnknownLetter as e:
                    raise ParseError(str(e), line_number)
        elif key == "mu":
            mu = _parse_non_negative(tokens, "mu", line_number)
        elif key == "backend":
            if len(tokens) != 1 or tokens[0] not in BACKEND_NAMES:
                raise ParseError(f"backend 必须是 {' | '.join(BACKEND_NAMES)}", line_number)
            backend = tokens[0]

    if not seen_generators:
        raise ParseError("缺少 generators 行")
    return SubgroupSpec(tuple(generators), mu, backend)


def load_group_file(path: str) -> GroupDocument:
    """读取并解析展示文件"""
    document = parse_group_document(read_text_file(path))
    logger.info(f"已加载展示文件: {path}, 生成元 {len(document.presentation.generators)} 个, "
                f"关系子 {len(document.presentation.relators)} 个")
    return document


def load_subgroup_file(path: str, alphabet: Union[Alphabet, Sequence[str]]) -> SubgroupSpec:
    """读取并解析子群文件"""
    spec = parse_subgroup_spec(read_text_file(path), alphabet)
    logger.info(f"已加载子群文件: {path}, 生成元 {len(spec.generators)} 个")
    return spec
