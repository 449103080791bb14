"""
字问题后端

自由群：自由约化；满足 C'(1/6) 的小消去展示：Dehn 算法。
其余展示不受支持（UnsupportedPresentation）。
"""

import logging
import threading
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from core.errors import InputError, UnsupportedPresentation
from core.models.word import (
    Alphabet, Presentation, Word, _free_reduce_text, _invert_text,
)

logger = logging.getLogger(__name__)

DEFAULT_NODE_LIMIT = 200000
DEFAULT_DIRECT_RADIUS = 4

_EXPLORER_LOCK = threading.Lock()


class Backend(Enum):
    """字问题后端"""
    FREE_REDUCTION = "free-reduction"
    DEHN = "dehn"


def symmetrized_rotations(p: Presentation) -> List[str]:
    """
    对称化关系子集合的全部循环置换（按位置列出，不去重）

    顺序：关系子声明顺序，先 r 后 r⁻¹，每个从位置 0 开始
    """
    rotations = []
    for r in p.relators:
        for t in (r.text, _invert_text(r.text)):
            rotations.extend(t[i:] + t[:i] for i in range(len(t)))
    return rotations


def _common_prefix(s: str, t: str) -> int:
    n = min(len(s), len(t))
    i = 0
    while i < n and s[i] == t[i]:
        i += 1
    return i


def validate_small_cancellation(p: Presentation) -> bool:
    """
    C'(1/6) 检查

    任意两个位置不同的循环置换的公共前缀（piece）长度都必须严格小于
    其所在关系子长度的 1/6。同一字出现在两个位置时 piece 即整个字。
    """
    rotations = symmetrized_rotations(p)
    for i in range(len(rotations)):
        s = rotations[i]
        for j in range(i + 1, len(rotations)):
            t = rotations[j]
            piece = _common_prefix(s, t)
            if 6 * piece >= len(s) or 6 * piece >= len(t):
                logger.debug(f"C'(1/6) 不成立: piece '{s[:piece]}' 位于 {s} / {t}")
                return False
    return True


@dataclass(frozen=True)
class GroupContext:
    """
    群上下文：展示 + 双曲常数 δ + 字问题后端

    构造请使用 build_context；所有几何查询都经由此对象。
    """
    presentation: Presentation
    delta: int
    backend: Backend
    node_limit: int = DEFAULT_NODE_LIMIT
    direct_radius: int = DEFAULT_DIRECT_RADIUS

    @property
    def alphabet(self) -> Alphabet:
        return self.presentation.alphabet

    @property
    def is_free(self) -> bool:
        return self.backend is Backend.FREE_REDUCTION

    @cached_property
    def dehn_rules(self) -> Dict[str, Tuple[str, ...]]:
        """首字母 -> 该字母开头的循环置换（ShortLex 序，去重）"""
        rules: Dict[str, List[str]] = {}
        for s in symmetrized_rotations(self.presentation):
            bucket = rules.setdefault(s[0], [])
            if s not in bucket:
                bucket.append(s)
        key = self.alphabet.shortlex_key
        return {c: tuple(sorted(b, key=lambda s: key(Word(s)))) for c, b in rules.items()}

    @cached_property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.presentation.relators), default=0)

    @property
    def explorer(self):
        """惰性创建的 Cayley 图探索器（每个上下文一个）"""
        explorer = self.__dict__.get("_explorer")
        if explorer is None:
            with _EXPLORER_LOCK:
                explorer = self.__dict__.get("_explorer")
                if explorer is None:
                    from core.services.cayley import CayleyExplorer
                    explorer = CayleyExplorer(self)
                    self.__dict__["_explorer"] = explorer
        return explorer

    def describe(self) -> str:
        return f"{self.presentation.describe()} δ={self.delta} backend={self.backend.value}"


def build_context(presentation: Presentation,
                  delta: Optional[int] = None,
                  node_limit: int = DEFAULT_NODE_LIMIT,
                  direct_radius: int = DEFAULT_DIRECT_RADIUS) -> GroupContext:
    """
    校验展示并选择后端

    Args:
        presentation: 展示
        delta: δ；自由群默认 0，带关系子的展示必须提供
        node_limit: 球构造的节点上限
        direct_radius: 直接按球查表的最大半径

    Raises:
        UnsupportedPresentation: 非自由且不满足 C'(1/6)
        InputError: 缺少 δ 或 δ 为负
    """
    if delta is not None and delta < 0:
        raise InputError(f"δ 必须非负: {delta}")

    if presentation.is_free:
        backend = Backend.FREE_REDUCTION
        delta = 0 if delta is None else delta
    elif validate_small_cancellation(presentation):
        backend = Backend.DEHN
        if delta is None:
            raise InputError("带关系子的展示必须给出 delta（文件中的 delta: 行或 --delta）")
    else:
        raise UnsupportedPresentation(
            f"展示 {presentation.describe()} 既不是自由群也不满足 C'(1/6)，无可用的字问题后端"
        )

    ctx = GroupContext(presentation, delta, backend, node_limit, direct_radius)
    logger.info(f"群上下文已建立: {ctx.describe()}")
    return ctx


def dehn_reduce_text(ctx: GroupContext, text: str) -> str:
    """dehn_reduce 的字符串版本，供内部热路径使用"""
    text = _free_reduce_text(text)
    if ctx.is_free or not text:
        return text

    rules = ctx.dehn_rules
    back = ctx.max_relator_length
    i = 0
    while i < len(text):
        best_k, best_s = 0, None
        for s in rules.get(text[i], ()):
            k = _common_prefix(text[i:i + len(s)], s)
            if 2 * k > len(s) and k > best_k:
                best_k, best_s = k, s
        if best_s is None:
            i += 1
            continue
        # 前缀 u（超过一半）替换为补段的逆；自由约化可能一直消到 i 左侧，
        # 从第一个改动位置往回一个关系子长度重新扫描
        replaced = _free_reduce_text(text[:i] + _invert_text(best_s[best_k:]) + text[i + best_k:])
        changed_at = _common_prefix(text, replaced)
        text = replaced
        i = max(0, min(i, changed_at) - back)
    return text


def dehn_reduce(ctx: GroupContext, w: Word) -> Word:
    """
    Dehn 约化：反复把超过关系子循环置换一半的子字替换为较短的补段

    自由群上下文等价于 free_reduce。结果在 G 中与 w 相等且长度不增；
    w 为单位元当且仅当结果为空。
    """
    return Word(dehn_reduce_text(ctx, w.text))


def is_trivial(ctx: GroupContext, w: Word) -> bool:
    """w 在 G 中是否为单位元"""
    return not dehn_reduce_text(ctx, w.text)


def are_equal(ctx: GroupContext, u: Word, v: Word) -> bool:
    """u 与 v 在 G 中是否相等（判定 u·v⁻¹ 是否平凡）"""
    return not dehn_reduce_text(ctx, u.text + _invert_text(v.text))


def geodesic_length(ctx: GroupContext, w: Word) -> int:
    """
    元素的字长（与 w 相等的最短字的长度）

    Raises:
        BudgetExceeded: 所需的球超出节点上限
    """
    return ctx.explorer.geodesic_length(w.text)
