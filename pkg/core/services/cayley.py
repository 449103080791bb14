"""
有界 Cayley 图几何

球、测地线、共轭四边形、同行检查以及经验 δ 估计。

正规形统一取 ShortLex 最小的测地字。自由群中即自由约化结果；
Dehn 上下文中由 CayleyExplorer 按层构造球并查表得到：
    - 每个元素带一个桶键：加性不变量（指数和与奇偶）加上它在若干有限置换商中的像，
      相等的元素桶键相同；
    - 桶内相等性由 Dehn 算法判定，每次判定都计入节点预算；
    - 超出已构造半径的元素用折半拼接（前半段取自已知球面）定位。
"""

import itertools
import logging
import math
import threading
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import BudgetExceeded, InputError, NotInSubgroup
from core.models.reports import Ball, DeltaEstimate, Lemma3Report, QuadrilateralTrace
from core.models.word import Presentation, Word, _free_reduce_text, _invert_text, invert_char
from core.services.normalizer import GroupContext, dehn_reduce_text, is_trivial

logger = logging.getLogger(__name__)

Key = Tuple[int, ...]
Bucket = Tuple[Key, bytes]

# 有限商搜索：在 S_5、S_6 中随机取置换，最多保留 3 个非交换的像
QUOTIENT_DEGREES = (5, 6)
QUOTIENT_COUNT = 3
QUOTIENT_TRIALS = 2000
# 一层球面或一次正规形查询内允许的 Dehn 等式判定次数 = node_limit × 该系数
COMPARISONS_PER_NODE = 4


def _evaluate_permutation(images: Dict[str, np.ndarray], text: str, degree: int) -> np.ndarray:
    state = np.arange(degree)
    for c in text:
        state = images[c][state]
    return state


def permutation_quotients(presentation: Presentation,
                          degrees: Sequence[int] = QUOTIENT_DEGREES,
                          wanted: int = QUOTIENT_COUNT,
                          trials: int = QUOTIENT_TRIALS,
                          seed: int = 0) -> List[Dict[str, np.ndarray]]:
    """
    随机搜索展示到对称群的非交换同态

    每个生成元取一个随机置换，所有关系子都映成恒等置换时即得到 G 的一个有限商。
    交换的像不比指数和提供更多信息，直接丢弃。

    Returns:
        字母 -> 置换 的字典列表（含逆字母）；找不到时为空列表
    """
    rng = np.random.default_rng(seed)
    generators = presentation.generators
    found: List[Dict[str, np.ndarray]] = []
    seen = set()
    for degree in degrees:
        identity = np.arange(degree)
        for _ in range(trials):
            if len(found) >= wanted:
                return found
            images: Dict[str, np.ndarray] = {}
            for g in generators:
                p = rng.permutation(degree)
                images[g] = p
                images[g.upper()] = np.argsort(p)
            if not all(np.array_equal(_evaluate_permutation(images, r.text, degree), identity)
                       for r in presentation.relators):
                continue
            perms = [images[g] for g in generators]
            if all(np.array_equal(p[q], q[p]) for p, q in itertools.combinations(perms, 2)):
                continue
            signature = b"".join(p.astype(np.uint8).tobytes() for p in perms)
            if signature in seen:
                continue
            seen.add(signature)
            found.append(images)
    return found


class CayleyExplorer:
    """
    单个群上下文的球缓存与正规形计算

    球面按 ShortLex 序保存；所有可变状态由一把可重入锁保护，
    自由群的正规形查询不需要加锁。
    """

    def __init__(self, ctx: GroupContext):
        self.ctx = ctx
        self.letters: Tuple[str, ...] = ctx.alphabet.letters
        self._lock = threading.RLock()
        self._spheres: List[List[str]] = [[""]]
        self._lengths: Dict[str, int] = {}
        self._comparisons = 0

        relators = ctx.presentation.relators
        # 奇偶：所有关系子长度为偶数时，字长奇偶是元素的不变量
        self._use_parity = bool(relators) and all(len(r) % 2 == 0 for r in relators)
        # 自由列：在所有关系子中指数和为 0 的生成元
        self._columns: List[str] = [
            g for g in ctx.presentation.generators
            if all(r.text.count(g) == r.text.count(g.upper()) for r in relators)
        ]
        self._letter_keys: Dict[str, Key] = {c: self._key_of_letter(c) for c in self.letters}

        self._quotients = [] if ctx.is_free else permutation_quotients(ctx.presentation)
        self._letter_tables, self._identity_image = self._image_tables()
        if self._quotients:
            logger.debug(f"找到 {len(self._quotients)} 个有限置换商，用于球元素分桶")
        elif not ctx.is_free:
            logger.info("未找到非交换的有限置换商，球元素只按指数和分桶")

        zero = self._zero_key()
        self._keys: Dict[str, Key] = {"": zero}
        self._images: Dict[str, bytes] = {"": self._identity_image}
        self._index: Dict[Bucket, List[str]] = {(zero, self._identity_image): [""]}

    # ---------- 桶键 ----------

    def _zero_key(self) -> Key:
        return (0,) * (len(self._columns) + (1 if self._use_parity else 0))

    def _key_of_letter(self, c: str) -> Key:
        sign = -1 if c.isupper() else 1
        parts = [1] if self._use_parity else []
        parts.extend(sign if c.lower() == g else 0 for g in self._columns)
        return tuple(parts)

    def _add_keys(self, a: Key, b: Key) -> Key:
        out = [x + y for x, y in zip(a, b)]
        if self._use_parity:
            out[0] %= 2
        return tuple(out)

    def _sub_keys(self, a: Key, b: Key) -> Key:
        out = [x - y for x, y in zip(a, b)]
        if self._use_parity:
            out[0] %= 2
        return tuple(out)

    def key_of(self, text: str) -> Key:
        key = self._zero_key()
        for c in text:
            key = self._add_keys(key, self._letter_keys[c])
        return key

    def _image_tables(self) -> Tuple[Dict[str, bytes], bytes]:
        """
        各有限商拼成不交并上的一个置换；字母的作用写成 bytes.translate 的 256 字节查找表
        """
        tables = {c: bytearray(range(256)) for c in self.letters}
        offset = 0
        for images in self._quotients:
            degree = len(images[self.letters[0]])
            for c in self.letters:
                for i, j in enumerate(images[c]):
                    tables[c][offset + i] = offset + int(j)
            offset += degree
        return {c: bytes(t) for c, t in tables.items()}, bytes(range(offset))

    def image_of(self, text: str) -> bytes:
        """元素在有限商中的像；相等的元素像相同"""
        state = self._identity_image
        for c in text:
            state = state.translate(self._letter_tables[c])
        return state

    def lower_bound(self, key: Key) -> int:
        """由桶键得到的字长下界（指数和的 L1 范数，必要时按奇偶上调）"""
        if not self._use_parity:
            return sum(abs(x) for x in key)
        bound = sum(abs(x) for x in key[1:])
        if (bound - key[0]) % 2:
            bound += 1
        return bound

    # ---------- 球构造 ----------

    @property
    def radius(self) -> int:
        return len(self._spheres) - 1

    def ball_size(self) -> int:
        return sum(len(s) for s in self._spheres)

    def ensure_radius(self, radius: int):
        """
        把球扩展到给定半径

        Raises:
            BudgetExceeded: 元素总数超过 node_limit，或 Dehn 等式判定次数超限
        """
        if radius <= self.radius:
            return
        with self._lock:
            while self.radius < radius:
                n = self.radius + 1
                if self.ctx.is_free:
                    sphere = self._next_free_sphere()
                else:
                    sphere = self._next_dehn_sphere(n)
                self._spheres.append(sphere)
                logger.debug(f"球面 {n} 构造完成: {len(sphere)} 个元素，累计 {self.ball_size()}")

    def _check_limit(self, pending: int, n: int):
        total = self.ball_size() + pending
        if total > self.ctx.node_limit:
            raise BudgetExceeded(
                f"半径 {n} 的球超过节点上限 {self.ctx.node_limit}",
                limit=self.ctx.node_limit, partial=self.radius,
            )

    def _charge(self):
        self._comparisons += 1
        limit = self.ctx.node_limit * COMPARISONS_PER_NODE
        if self._comparisons > limit:
            raise BudgetExceeded(
                f"Dehn 等式判定超过 {limit} 次（节点上限 {self.ctx.node_limit}）",
                limit=limit, partial=self.radius,
            )

    def _next_free_sphere(self) -> List[str]:
        sphere: List[str] = []
        n = self.radius + 1
        for u in self._spheres[-1]:
            last = invert_char(u[-1]) if u else ""
            for x in self.letters:
                if x != last:
                    sphere.append(u + x)
            self._check_limit(len(sphere), n)
        return sphere

    def _next_dehn_sphere(self, n: int) -> List[str]:
        self._comparisons = 0
        sphere: List[str] = []
        pending: Dict[Bucket, List[str]] = {}
        labels: Dict[str, Bucket] = {}
        # u 是长度 n−1 的测地字，u·x 的字长不小于 n−2
        lo = max(0, n - 2)
        for u in self._spheres[-1]:
            ku, iu = self._keys[u], self._images[u]
            last = invert_char(u[-1]) if u else ""
            for x in self.letters:
                if x == last:
                    continue
                c = u + x
                if len(dehn_reduce_text(self.ctx, c)) < n:
                    continue
                bucket = (self._add_keys(ku, self._letter_keys[x]), iu.translate(self._letter_tables[x]))
                if self._find(c, bucket, lo, n - 1) is not None:
                    continue
                if self._find_in(pending.get(bucket, ()), c) is not None:
                    continue
                sphere.append(c)
                pending.setdefault(bucket, []).append(c)
                labels[c] = bucket
            self._check_limit(len(sphere), n)

        # 整层成功后再提交
        for c in sphere:
            key, image = labels[c]
            self._keys[c] = key
            self._images[c] = image
            self._index.setdefault((key, image), []).append(c)
        return sphere

    def _find_in(self, bucket: Sequence[str], text: str) -> Optional[str]:
        for e in bucket:
            self._charge()
            if not dehn_reduce_text(self.ctx, text + _invert_text(e)):
                return e
        return None

    def _find(self, text: str, bucket: Bucket, lo: int, hi: int) -> Optional[str]:
        """在已构造的球中查找与 text 相等、长度在 [lo, hi] 的正规形"""
        candidates = [e for e in self._index.get(bucket, ()) if lo <= len(e) <= hi]
        return self._find_in(candidates, text)

    def sphere(self, n: int) -> Tuple[str, ...]:
        self.ensure_radius(n)
        return tuple(self._spheres[n])

    def ball_texts(self, radius: int) -> List[str]:
        self.ensure_radius(radius)
        out: List[str] = []
        for n in range(radius + 1):
            out.extend(self._spheres[n])
        return out

    # ---------- 正规形 ----------

    def normal_form(self, text: str, max_len: Optional[int] = None) -> Optional[str]:
        """
        ShortLex 最小测地字

        Args:
            text: 任意字
            max_len: 只在长度不超过它的范围内查找，超出时返回 None

        Raises:
            BudgetExceeded: 所需球超过节点上限，或 Dehn 等式判定次数超限
        """
        if self.ctx.is_free:
            reduced = _free_reduce_text(text)
            if max_len is not None and len(reduced) > max_len:
                return None
            return reduced

        with self._lock:
            self._comparisons = 0
            reduced = dehn_reduce_text(self.ctx, text)
            if not reduced:
                return ""
            key = self.key_of(reduced)
            bucket = (key, self.image_of(reduced))
            hi = len(reduced) if max_len is None else min(len(reduced), max_len)
            for n in range(self.lower_bound(key), hi + 1):
                if self._use_parity and n % 2 != key[0]:
                    continue
                found = self._locate_at(reduced, bucket, n)
                if found is not None:
                    self._lengths[reduced] = len(found)
                    return found
            if max_len is None:
                # Dehn 约化后的字本身就是长度 len(reduced) 的代表
                raise RuntimeError(f"未能定位 {reduced} 的正规形")
            return None

    def _locate_at(self, text: str, bucket: Bucket, n: int) -> Optional[str]:
        if n <= max(self.radius, self.ctx.direct_radius):
            self.ensure_radius(n)
            return self._find(text, bucket, n, n)

        # 折半：正规形的前 h 个字母本身是球面 h 上的正规形
        h = (n + 1) // 2
        rest = n - h
        self.ensure_radius(h)
        key = bucket[0]
        for u in self._spheres[h]:
            kr = self._sub_keys(key, self._keys[u])
            if self.lower_bound(kr) > rest:
                continue
            shifted = _invert_text(u) + text
            tail_bucket = (kr, self.image_of(shifted))
            if tail_bucket not in self._index:
                continue
            self._charge()
            r = dehn_reduce_text(self.ctx, shifted)
            if len(r) < rest:
                continue
            tail = self._find(r, tail_bucket, rest, rest)
            if tail is not None:
                return u + tail
        return None

    def geodesic_length(self, text: str) -> int:
        if self.ctx.is_free:
            return len(_free_reduce_text(text))
        reduced = dehn_reduce_text(self.ctx, text)
        cached = self._lengths.get(reduced)
        if cached is not None:
            return cached
        return len(self.normal_form(reduced))

    def distance(self, x: str, y: str) -> int:
        """d(x, y) = |x⁻¹·y|"""
        return self.geodesic_length(_invert_text(x) + y)


# ---------- 对外操作 ----------

def ball(ctx: GroupContext, radius: int) -> Ball:
    """
    半径 radius 的球，每个元素一个 ShortLex 最小正规形

    Raises:
        BudgetExceeded: 超过节点上限
    """
    if radius < 0:
        raise InputError(f"半径必须非负: {radius}")
    texts = ctx.explorer.ball_texts(radius)
    return Ball(radius, tuple(Word(t) for t in texts))


def normal_form(ctx: GroupContext, w: Word) -> Word:
    """元素的 ShortLex 最小测地字"""
    return Word(ctx.explorer.normal_form(w.text))


def a_geodesic(ctx: GroupContext, frm: Word, to: Word) -> Word:
    """
    从 frm 到 to 的测地线标签（ShortLex 最小）

    Raises:
        BudgetExceeded
    """
    return Word(ctx.explorer.normal_form(_invert_text(frm.text) + to.text))


def _path_vertices(explorer: CayleyExplorer, start: str, label: str) -> Tuple[Word, ...]:
    return tuple(Word(explorer.normal_form(start + label[:i])) for i in range(len(label) + 1))


def build_quadrilateral(ctx: GroupContext, g: Word, h: Word) -> QuadrilateralTrace:
    """
    构造共轭四边形 p, p_h, p′, p_k

    Raises:
        InputError: h 平凡
        BudgetExceeded
    """
    if is_trivial(ctx, h):
        raise InputError("h 必须是非平凡元素")
    explorer = ctx.explorer
    g_nf = explorer.normal_form(g.text)
    h_nf = explorer.normal_form(h.text)
    k_nf = explorer.normal_form(g_nf + h_nf + _invert_text(g_nf))

    p = tuple(Word(g_nf[:i]) for i in range(len(g_nf) + 1))
    p_prime = _path_vertices(explorer, k_nf, g_nf)
    ph = _path_vertices(explorer, g_nf, h_nf)
    pk = tuple(Word(k_nf[:i]) for i in range(len(k_nf) + 1))
    distances = tuple(explorer.distance(v.text, w.text) for v, w in zip(p, p_prime))

    return QuadrilateralTrace(Word(g_nf), Word(h_nf), Word(k_nf), p, p_prime, ph, pk, distances)


def _polygon_thinness(explorer: CayleyExplorer, sides: List[List[str]]) -> int:
    """多边形的瘦度：各边顶点到其余各边并集的最小距离，取最大值"""
    points = [(side_id, v) for side_id, side in enumerate(sides) for v in side]
    count = len(points)
    if count == 0:
        return 0
    side_ids = np.array([s for s, _ in points])
    dist = np.zeros((count, count), dtype=np.int64)
    for i in range(count):
        for j in range(i + 1, count):
            if side_ids[i] != side_ids[j]:
                d = explorer.distance(points[i][1], points[j][1])
                dist[i, j] = d
                dist[j, i] = d
    same_side = side_ids[:, None] == side_ids[None, :]
    masked = np.where(same_side, np.iinfo(np.int64).max, dist)
    return int(masked.min(axis=1).max())


def quadrilateral_thinness(ctx: GroupContext, trace: QuadrilateralTrace) -> int:
    """四边形的实测瘦度（双曲时不超过 2δ）"""
    sides = [
        [v.text for v in trace.p_vertices],
        [v.text for v in trace.ph_vertices],
        [v.text for v in trace.p_prime_vertices],
        [v.text for v in trace.pk_vertices],
    ]
    return _polygon_thinness(ctx.explorer, sides)


def check_lemma3(ctx: GroupContext, H, K, g: Word, h: Word,
                 double_coset_budget: int = 20000, exhaustive: bool = False) -> Lemma3Report:
    """
    同行检查：在 [2δ+μ, n−2δ−μ] 上验证 d(vᵢ, v′ᵢ) < 8δ+μ

    仅当 ghg⁻¹ ∈ K 且 g 被认证为 K·g·H 中最短时适用；默认只做局部认证，
    exhaustive 时改为全局认证（见 reduce_double_coset）。

    Raises:
        NotInSubgroup: h ∉ H
        InputError: h 平凡
        BudgetExceeded
    """
    from core.services.subgroup import member, reduce_double_coset

    if is_trivial(ctx, h):
        raise InputError("h 必须是非平凡元素")
    if not member(ctx, H, h):
        raise NotInSubgroup(f"h = {h.text} 不在 H 中")

    delta = ctx.delta
    mu = max(H.mu, K.mu)
    bound = 8 * delta + mu
    trace = build_quadrilateral(ctx, g, h)
    n = trace.n
    checked = (2 * delta + mu, n - 2 * delta - mu)

    def not_applicable(reason: str, representative: Optional[Word] = None) -> Lemma3Report:
        logger.info(f"同行检查不适用: {reason}")
        return Lemma3Report(False, reason, checked, 0, bound, mu=mu, delta=delta,
                            representative=representative, trace=trace)

    if not member(ctx, K, trace.k):
        return not_applicable(f"ghg⁻¹ = {trace.k.text} 不在 K 中")

    rep, certified = reduce_double_coset(ctx, K, trace.g, H, double_coset_budget, exhaustive=exhaustive)
    if not certified:
        return not_applicable("双陪集约化未在预算内完成认证", rep)
    if len(rep) < n:
        return not_applicable(f"K·g·H 中存在更短的代表 {rep.text}", rep)

    lo, hi = checked
    window = trace.distances[lo:hi + 1] if lo <= hi else ()
    violations = tuple(i for i in range(lo, hi + 1) if trace.distances[i] >= bound)
    max_distance = max(window, default=0)
    b_distance = trace.distances[hi] if lo <= hi else None
    thinness = quadrilateral_thinness(ctx, trace)

    if violations:
        logger.warning(f"同行检查发现违例: g={trace.g.text}, h={trace.h.text}, 下标 {list(violations)}")
    return Lemma3Report(
        True, "ok", checked, max_distance, bound, violations, mu=mu, delta=delta,
        representative=rep, trace=trace, b_distance=b_distance, b_bound=4 * delta + mu,
        quadrilateral_thinness=thinness,
    )


def estimate_delta(ctx: GroupContext, radius: int, triangle_cap: int = 1000000) -> DeltaEstimate:
    """
    经验 δ 下界

    三角形取 (1, y, z)，y、z 为球内不同元素（左平移不变，只取无序对）；
    数量超过 triangle_cap 时按固定步长抽样。
    三个顶点都在球内、但平移到单位元后另两点离开球的三角形不在扫描范围内，
    因此结果是有效下界，但可能小于对球内全部三角形扫描的值。

    Raises:
        BudgetExceeded
    """
    explorer = ctx.explorer
    elements = ball(ctx, radius).elements
    total = len(elements) * (len(elements) - 1) // 2
    stride = max(1, math.ceil(total / triangle_cap)) if triangle_cap > 0 else 1
    if stride > 1:
        logger.info(f"三角形共 {total} 个，按步长 {stride} 抽样")

    worst = 0
    examined = 0
    pairs = itertools.islice(itertools.combinations(elements, 2), 0, None, stride)
    for y, z in pairs:
        yz = explorer.normal_form(_invert_text(y.text) + z.text)
        sides = [
            [y.text[:i] for i in range(len(y) + 1)],
            [y.text + yz[:i] for i in range(len(yz) + 1)],
            [z.text[:i] for i in range(len(z) + 1)],
        ]
        worst = max(worst, _polygon_thinness(explorer, sides))
        examined += 1

    logger.info(f"δ 估计: 半径 {radius}, 三角形 {examined} 个, 下界 {worst}")
    return DeltaEstimate(radius, worst, examined, stride > 1)
