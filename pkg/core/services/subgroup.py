"""
拟凸子群

成员判定有两种后端：
    - Stallings 折叠图（仅自由群）
    - 球闭包：在工作半径 R_w = |w| + 3μ + 1 的球内求乘积与取逆的不动点
"""

import logging
import threading
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from core.errors import BudgetExceeded, InputError, TrivialGenerator, UnsupportedPresentation
from core.models.word import EMPTY_WORD, Alphabet, Word, _free_reduce_text, _invert_text, invert_char
from core.services.normalizer import GroupContext, dehn_reduce_text, geodesic_length

logger = logging.getLogger(__name__)


class MembershipBackend(Enum):
    STALLINGS = "stallings"
    BALL_CLOSURE = "ball-closure"


Edge = Tuple[int, str, int]


@dataclass(frozen=True)
class CoreGraph:
    """
    Stallings 核心图

    edges 为 (起点, 生成元, 终点)，生成元一律小写；逆字母沿边反向读取。
    顶点按从基点出发的 BFS 顺序编号，基点为 0。
    """
    num_vertices: int
    edges: Tuple[Edge, ...]
    base: int = 0
    folded: bool = True

    @cached_property
    def transitions(self) -> Dict[Tuple[int, str], int]:
        trans: Dict[Tuple[int, str], int] = {}
        for s, x, t in self.edges:
            trans[(s, x)] = t
            trans[(t, x.upper())] = s
        return trans

    def read(self, text: str) -> Optional[int]:
        """从基点读入 text，走不通时返回 None"""
        state = self.base
        trans = self.transitions
        for c in text:
            state = trans.get((state, c))
            if state is None:
                return None
        return state

    def accepts(self, text: str) -> bool:
        return self.read(_free_reduce_text(text)) == self.base

    def to_networkx(self) -> nx.MultiGraph:
        """底层无向多重图"""
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.num_vertices))
        graph.add_edges_from((s, t, {"label": x}) for s, x, t in self.edges)
        return graph

    def to_dict(self) -> Dict:
        return {
            "vertices": self.num_vertices,
            "base": self.base,
            "edges": [[s, x, t] for s, x, t in self.edges],
        }


class BallClosure:
    """
    球闭包缓存

    保存迄今最大工作半径下的不动点集合（正规形字符串）；
    大半径的不动点包含小半径的不动点，因此可直接复用。
    """

    def __init__(self):
        self.radius = -1
        self.elements: FrozenSet[str] = frozenset({""})
        self._lock = threading.Lock()

    def elements_at(self, ctx: GroupContext, generators: Sequence[Word], radius: int) -> FrozenSet[str]:
        if radius <= self.radius:
            return self.elements
        with self._lock:
            if radius > self.radius:
                self.elements = frozenset(_closure_fixpoint(ctx, generators, radius, self.elements))
                self.radius = radius
            return self.elements


def _closure_fixpoint(ctx: GroupContext, generators: Sequence[Word], radius: int,
                      seed: Iterable[str]) -> Set[str]:
    """S ↦ S·S ∪ S⁻¹ ∪ 生成元 ∪ {1} 在 Ball(radius) 内的不动点（半朴素迭代）"""
    explorer = ctx.explorer
    text_key = ctx.alphabet.text_key

    elements: Set[str] = {""}
    frontier: Set[str] = set()
    for t in seed:
        if t not in elements:
            elements.add(t)
            frontier.add(t)
    for g in generators:
        for t in (g.text, _invert_text(g.text)):
            nf = explorer.normal_form(t, max_len=radius)
            if nf is not None and nf not in elements:
                elements.add(nf)
                frontier.add(nf)

    rounds = 0
    while frontier:
        rounds += 1
        fresh: Set[str] = set()
        ordered = sorted(frontier, key=text_key)
        snapshot = sorted(elements, key=text_key)
        for a in ordered:
            candidates = [_invert_text(a)]
            for b in snapshot:
                candidates.append(a + b)
                candidates.append(b + a)
            for c in candidates:
                nf = explorer.normal_form(c, max_len=radius)
                if nf is None or nf in elements or nf in fresh:
                    continue
                fresh.add(nf)
            if len(elements) + len(fresh) > ctx.node_limit:
                raise BudgetExceeded(
                    f"球闭包超过节点上限 {ctx.node_limit}（半径 {radius}）",
                    limit=ctx.node_limit, partial=len(elements),
                )
        elements |= fresh
        frontier = fresh
        logger.debug(f"球闭包第 {rounds} 轮: 新增 {len(fresh)}，累计 {len(elements)}")

    logger.debug(f"球闭包完成: 半径 {radius}, {len(elements)} 个元素, {rounds} 轮")
    return elements


@dataclass(frozen=True)
class Subgroup:
    """
    子群：生成元 + 拟凸常数 μ（≥ 1）+ 成员判定后端

    请通过 make_subgroup / cyclic_subgroup 构造。
    """
    generators: Tuple[Word, ...]
    mu: int
    backend: MembershipBackend
    core: Optional[CoreGraph] = None
    closure: Optional[BallClosure] = field(default=None, compare=False, repr=False)

    def describe(self) -> str:
        gens = ", ".join(g.text or "ε" for g in self.generators)
        return f"⟨{gens}⟩ μ={self.mu} ({self.backend.value})"


# ---------- Stallings 折叠 ----------

def stallings_graph(alphabet: Alphabet, generators: Sequence[Word]) -> CoreGraph:
    """
    生成元环的楔和，折叠到稳定，再剪去基点以外的悬挂树

    Args:
        alphabet: 字母表（决定重新编号时的遍历顺序）
        generators: 生成元（内部先自由约化，空字忽略）
    """
    edges: List[Edge] = []
    count = 1
    for g in generators:
        text = _free_reduce_text(g.text)
        if not text:
            continue
        loop, count = _path_edges(text, 0, 0, count)
        edges.extend(loop)

    folded, _, folds = _fold(edges, count)
    folded = _prune_hanging_trees(folded)
    graph = _relabel(alphabet, folded)
    logger.debug(f"Stallings 折叠: {folds} 次合并，{graph.num_vertices} 个顶点，{len(graph.edges)} 条边")
    return graph


def _path_edges(text: str, start: int, end: int, first_free: int) -> Tuple[List[Edge], int]:
    """从 start 到 end 读出 text 的路径（text 非空），中间顶点从 first_free 开始编号"""
    path = [start] + list(range(first_free, first_free + len(text) - 1)) + [end]
    edges: List[Edge] = []
    for i, c in enumerate(text):
        a, b = path[i], path[i + 1]
        edges.append((a, c, b) if c.islower() else (b, c.lower(), a))
    return edges, first_free + len(text) - 1


def _fold(edges: List[Edge], count: int,
          identify: Sequence[Tuple[int, int]] = ()) -> Tuple[List[Edge], Callable[[int], int], int]:
    """
    折叠到稳定：同一顶点出发（或到达）的同标签边合并其另一端

    Args:
        identify: 折叠前先粘合的顶点对

    Returns:
        (折叠后的边, 顶点 -> 代表顶点, 合并次数)
    """
    parent = list(range(count))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a: int, b: int) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        # 保持较小编号为根，基点 0 始终是自己的代表
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb
        return True

    for a, b in identify:
        union(a, b)

    folds = 0
    changed = True
    while changed:
        changed = False
        outgoing: Dict[Tuple[int, str], int] = {}
        incoming: Dict[Tuple[int, str], int] = {}
        for s, x, t in edges:
            s, t = find(s), find(t)
            seen_t = outgoing.setdefault((s, x), t)
            if union(seen_t, t):
                changed = True
                folds += 1
            seen_s = incoming.setdefault((find(t), x), find(s))
            if union(seen_s, s):
                changed = True
                folds += 1

    folded = sorted({(find(s), x, find(t)) for s, x, t in edges})
    return folded, find, folds


def _prune_hanging_trees(edges: List[Edge]) -> List[Edge]:
    while True:
        degree: Dict[int, int] = {}
        for s, _, t in edges:
            degree[s] = degree.get(s, 0) + 1
            degree[t] = degree.get(t, 0) + 1
        leaves = {v for v, d in degree.items() if d == 1 and v != 0}
        if not leaves:
            return edges
        edges = [e for e in edges if e[0] not in leaves and e[2] not in leaves]


def _relabel(alphabet: Alphabet, edges: List[Edge]) -> CoreGraph:
    trans: Dict[Tuple[int, str], int] = {}
    for s, x, t in edges:
        trans[(s, x)] = t
        trans[(t, x.upper())] = s

    order = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for c in alphabet.letters:
            t = trans.get((v, c))
            if t is not None and t not in order:
                order[t] = len(order)
                queue.append(t)

    relabeled = tuple(sorted((order[s], x, order[t]) for s, x, t in edges))
    return CoreGraph(len(order), relabeled, 0, True)


def estimate_mu_free(core: CoreGraph) -> int:
    """max(1, 基点在无向核心图中的离心率)"""
    eccentricity = nx.eccentricity(core.to_networkx(), v=core.base)
    return max(1, int(eccentricity))


# ---------- 构造 ----------

def _resolve_backend(ctx: GroupContext, backend: Union[None, str, MembershipBackend]) -> MembershipBackend:
    if backend is None:
        return MembershipBackend.STALLINGS if ctx.is_free else MembershipBackend.BALL_CLOSURE
    if isinstance(backend, str):
        try:
            backend = MembershipBackend(backend)
        except ValueError:
            raise InputError(f"未知的成员判定后端: {backend}")
    if backend is MembershipBackend.STALLINGS and not ctx.is_free:
        raise UnsupportedPresentation("Stallings 后端只能用于自由群")
    return backend


def make_subgroup(ctx: GroupContext, generators: Sequence[Word], mu: Optional[int] = None,
                  backend: Union[None, str, MembershipBackend] = None) -> Subgroup:
    """
    构造子群

    Args:
        generators: 生成元，可以为空（平凡子群）
        mu: 拟凸常数；自由群可省略（由核心图计算），其余情形必须给出
        backend: stallings / ball-closure，缺省按上下文选择

    Raises:
        UnknownLetter: 生成元含未知字母
        TrivialGenerator: 生成元在 G 中平凡
        UnsupportedPresentation: 非自由群上请求 Stallings 后端
        InputError: 非自由群缺少 μ
    """
    resolved = _resolve_backend(ctx, backend)
    reduced: List[Word] = []
    for g in generators:
        ctx.alphabet.check(g)
        text = dehn_reduce_text(ctx, g.text)
        if not text:
            raise TrivialGenerator(f"生成元 {g.text or 'ε'} 在群中平凡")
        reduced.append(Word(text))

    core = stallings_graph(ctx.alphabet, reduced) if ctx.is_free else None
    if mu is None:
        if core is None:
            raise InputError("非自由群中的子群必须给出 mu")
        mu = estimate_mu_free(core)
    if mu < 1:
        logger.info(f"μ = {mu} 按正整数约定提升为 1")
        mu = 1

    closure = BallClosure() if resolved is MembershipBackend.BALL_CLOSURE else None
    subgroup = Subgroup(tuple(reduced), mu, resolved, core, closure)
    logger.debug(f"子群已构造: {subgroup.describe()}")
    return subgroup


def cyclic_subgroup(ctx: GroupContext, u: Word, mu: Optional[int] = None,
                    backend: Union[None, str, MembershipBackend] = None) -> Subgroup:
    """
    由单个元素生成的循环子群

    自由群：Stallings 图为“尾巴 + 环”，μ 取基点离心率；
    其余：球闭包，μ 缺省为 |u| + 2δ。

    Raises:
        TrivialGenerator: u 平凡
    """
    ctx.alphabet.check(u)
    if not dehn_reduce_text(ctx, u.text):
        raise TrivialGenerator(f"{u.text or 'ε'} 在群中平凡，不能生成循环子群")
    if mu is None and not ctx.is_free:
        mu = geodesic_length(ctx, u) + 2 * ctx.delta
    return make_subgroup(ctx, [u], mu, backend)


# ---------- 成员判定与子群球 ----------

def member(ctx: GroupContext, K: Subgroup, w: Word) -> bool:
    """
    w 是否属于 K

    Raises:
        UnknownLetter
        BudgetExceeded: 球闭包超过节点上限
    """
    ctx.alphabet.check(w)
    return member_text(ctx, K, w.text)


def member_text(ctx: GroupContext, K: Subgroup, text: str) -> bool:
    """member 的字符串版本，供搜索热路径使用"""
    if K.backend is MembershipBackend.STALLINGS:
        return K.core.accepts(text)
    explorer = ctx.explorer
    nf = explorer.normal_form(text)
    radius = len(nf) + 3 * K.mu + 1
    return nf in K.closure.elements_at(ctx, K.generators, radius)


def _stallings_elements(alphabet: Alphabet, core: CoreGraph, radius: int) -> List[str]:
    found: List[str] = []
    trans = core.transitions
    stack: List[Tuple[int, str]] = [(core.base, "")]
    while stack:
        v, text = stack.pop()
        if v == core.base:
            found.append(text)
        if len(text) == radius:
            continue
        last = invert_char(text[-1]) if text else ""
        for c in alphabet.letters:
            if c == last:
                continue
            t = trans.get((v, c))
            if t is not None:
                stack.append((t, text + c))
    return found


def subgroup_ball(ctx: GroupContext, H: Subgroup, radius: int) -> Tuple[Word, ...]:
    """
    H 中字长不超过 radius 的元素（正规形，ShortLex 序）

    Stallings 后端直接沿核心图枚举约化路径，结果与逐个筛选球元素相同。

    Raises:
        BudgetExceeded
    """
    return tuple(Word(t) for t in subgroup_ball_texts(ctx, H, radius))


def subgroup_ball_texts(ctx: GroupContext, H: Subgroup, radius: int) -> Tuple[str, ...]:
    if radius < 0:
        raise InputError(f"半径必须非负: {radius}")
    if H.backend is MembershipBackend.STALLINGS:
        texts = _stallings_elements(ctx.alphabet, H.core, radius)
    else:
        closure = H.closure.elements_at(ctx, H.generators, radius + 3 * H.mu + 1)
        texts = [t for t in closure if len(t) <= radius]
    return tuple(sorted(texts, key=ctx.alphabet.text_key))


# ---------- 双陪集代表 ----------

TRIVIAL_CORE = CoreGraph(1, ())


def double_coset_multipliers(ctx: GroupContext, K: Subgroup, H: Subgroup, sides: str = "both",
                             radius_boost: int = 0) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """
    局部乘子：K、H 中半径 2μ+2δ+1（+radius_boost）的元素

    sides="left" 时右侧只取单位元
    """
    _check_sides(sides)
    delta = ctx.delta
    left = subgroup_ball_texts(ctx, K, 2 * K.mu + 2 * delta + 1 + radius_boost)
    if sides == "left":
        return left, ("",)
    right = subgroup_ball_texts(ctx, H, 2 * H.mu + 2 * delta + 1 + radius_boost)
    return left, right


def _check_sides(sides: str):
    if sides not in ("both", "left"):
        raise InputError(f"sides 必须是 both 或 left: {sides}")


def shorter_representative(ctx: GroupContext, g_text: str,
                           multipliers: Tuple[Sequence[str], Sequence[str]]) -> Optional[str]:
    """k·g·h 中比 g 短的 ShortLex 最小者；没有时返回 None"""
    if not g_text:
        return None
    explorer = ctx.explorer
    text_key = ctx.alphabet.text_key
    best: Optional[str] = None
    limit = len(g_text) - 1
    left, right = multipliers
    for k in left:
        for h in right:
            cand = explorer.normal_form(k + g_text + h, max_len=limit)
            if cand is not None and (best is None or text_key(cand) < text_key(best)):
                best = cand
    return best


def double_coset_minimum(alphabet: Alphabet, K_core: CoreGraph, g_text: str, H_core: CoreGraph) -> str:
    """
    自由群中 K·g·H 的 ShortLex 最小元

    K 的核心图与 H 的核心图之间接一条读出 g 的路径并折叠；K·g·H 的元素恰是
    从 K 的基点到 H 的基点的约化路径的标签。最短路径不回溯，其标签已经约化，
    逐步取能缩短剩余距离的最小字母即得 ShortLex 最小的最短标签。
    """
    text = _free_reduce_text(g_text)
    offset = K_core.num_vertices
    edges: List[Edge] = list(K_core.edges)
    edges.extend((s + offset, x, t + offset) for s, x, t in H_core.edges)
    start, end = K_core.base, H_core.base + offset
    count = offset + H_core.num_vertices

    identify: List[Tuple[int, int]] = []
    if text:
        bridge, count = _path_edges(text, start, end, count)
        edges.extend(bridge)
    else:
        identify.append((start, end))

    folded, find, _ = _fold(edges, count, identify)
    start, end = find(start), find(end)

    graph = nx.MultiGraph()
    graph.add_nodes_from((start, end))
    graph.add_edges_from((s, t) for s, _, t in folded)
    remaining = nx.single_source_shortest_path_length(graph, end)

    trans: Dict[Tuple[int, str], int] = {}
    for s, x, t in folded:
        trans[(s, x)] = t
        trans[(t, x.upper())] = s

    letters: List[str] = []
    v = start
    while v != end:
        for c in alphabet.letters:
            t = trans.get((v, c))
            if t is not None and remaining.get(t) == remaining[v] - 1:
                letters.append(c)
                v = t
                break
    return "".join(letters)


def exact_double_coset_minimum(ctx: GroupContext, K: Subgroup, g_text: str, H: Subgroup,
                               sides: str = "both") -> Optional[str]:
    """
    K·g·H（sides="left" 时为 K·g）的全局 ShortLex 最小元

    需要两侧都有 Stallings 核心图（自由群上下文），否则返回 None
    """
    _check_sides(sides)
    right = H.core if sides == "both" else TRIVIAL_CORE
    if K.core is None or right is None:
        return None
    return double_coset_minimum(ctx.alphabet, K.core, g_text, right)


def reduce_double_coset(ctx: GroupContext, K: Subgroup, g: Word, H: Subgroup, budget: int,
                        sides: str = "both", radius_boost: int = 0,
                        exhaustive: bool = False) -> Tuple[Word, bool]:
    """
    在 K·g·H 中下降到更短的代表

    每一轮在局部乘子范围内取最短（ShortLex 最小）的更短乘积，直到没有改进。

    Args:
        budget: 允许计算的乘积总数
        sides: both（双陪集）或 left（只左乘 K）
        radius_boost: 乘子半径的额外增量
        exhaustive: 全局认证。自由群中直接在折叠图上求 K·g·H 的最小元（不消耗预算）；
            其余情形乘子半径再加 |g|，认证范围为 |k|、|h| ≤ |g| + 2μ + 2δ + 1 + radius_boost

    Returns:
        (rep, certified)：预算耗尽时返回目前最好的代表与 certified=False
    """
    explorer = ctx.explorer
    current = explorer.normal_form(g.text)
    if not current:
        return EMPTY_WORD, True

    if exhaustive:
        exact = exact_double_coset_minimum(ctx, K, current, H, sides)
        if exact is not None:
            logger.debug(f"双陪集全局最小元: {current} -> {exact or 'ε'}")
            return Word(exact), True
        radius_boost += len(current)

    left, right = double_coset_multipliers(ctx, K, H, sides, radius_boost)
    per_pass = len(left) * len(right)
    used = 0
    while True:
        if used + per_pass > budget:
            logger.info(f"双陪集约化预算 {budget} 耗尽，当前代表 {current}")
            return Word(current), False
        used += per_pass
        better = shorter_representative(ctx, current, (left, right))
        if better is None:
            return Word(current), True
        logger.debug(f"双陪集约化: {current} -> {better or 'ε'}")
        current = better
        if not current:
            return EMPTY_WORD, True
