"""
共轭判定

- decide_subgroup_conjugacy: 子群 H 的某个非平凡元素是否共轭进 K
- decide_conjugate_into: 元素 u 是否共轭进 K
- decide_power_conjugacy: u 是否共轭于 v 的某个幂
- decide_some_power_conjugate_into: u 的某个非平凡幂是否共轭进 K
- 两个独立的验证用判定器（自由群循环字、不剪枝穷举）

裁决三值：YES（附证据）/ NO_CERTIFIED（搜索覆盖了 C−1、C′−1）/ UNKNOWN。
"""

import logging
import time
from dataclasses import replace
from typing import Callable, List, Optional, Tuple

from core.errors import BudgetExceeded, ExponentNotRecovered, InputError
from core.models.decision import Budget, Decision, PruningMode, Verdict, Witness
from core.models.reports import BoundReport
from core.models.word import Word, _invert_text, cyclic_reduce
from core.services.bounds import ball_size_at_most, compute_bounds
from core.services.normalizer import GroupContext, are_equal
from core.services.subgroup import (
    Subgroup, cyclic_subgroup, double_coset_multipliers, exact_double_coset_minimum, member_text,
    shorter_representative, subgroup_ball_texts,
)
from core.workers.search_worker import SearchWorker

logger = logging.getLogger(__name__)


class _Infeasible(Exception):
    """完整界下的搜索规模超过节点上限"""
    pass


def _elapsed_ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0


def _search_radii(ctx: GroupContext, bounds: BoundReport, budget: Budget) -> Tuple[int, int]:
    """
    实际搜索半径

    完整界模式取 (C−1, C′−1)，候选数超过 node_limit 时拒绝启动
    """
    g_cap, h_cap = bounds.C - 1, bounds.Cprime - 1
    if not budget.paper_mode:
        return min(budget.max_conjugator_len, g_cap), min(budget.max_element_len, h_cap)

    limit = budget.node_limit
    if ball_size_at_most(ctx, g_cap, limit) is None:
        raise _Infeasible(f"完整界模式需要枚举半径 C−1 = {g_cap} 的球，超过节点上限 {limit}")
    if ball_size_at_most(ctx, h_cap, limit) is None:
        raise _Infeasible(f"完整界模式需要枚举半径 C′−1 = {h_cap} 的子群球，超过节点上限 {limit}")
    return g_cap, h_cap


def _verdict(found: bool, bounds: BoundReport, g_radius: int, h_radius: int) -> Verdict:
    if found:
        return Verdict.YES
    if g_radius >= bounds.C - 1 and h_radius >= bounds.Cprime - 1:
        return Verdict.NO_CERTIFIED
    return Verdict.UNKNOWN


def _pruner(ctx: GroupContext, K: Subgroup, H: Subgroup, budget: Budget,
            g_radius: int) -> Optional[Callable[[str], bool]]:
    """
    返回“应跳过 g”的判定函数；不剪枝时返回 None

    exhaustive_double_coset 时：自由群按全局最小元剪枝，其余情形乘子半径加上 g_radius
    """
    mode = budget.effective_pruning
    if mode is PruningMode.NONE:
        return None
    sides = "both" if mode is PruningMode.DOUBLE_COSET else "left"
    boost = 0
    if budget.exhaustive_double_coset:
        if K.core is not None and (sides == "left" or H.core is not None):
            logger.debug(f"剪枝 {mode.value}: 按全局最短代表")
            return lambda g: len(exact_double_coset_minimum(ctx, K, g, H, sides)) < len(g)
        boost = g_radius

    multipliers = double_coset_multipliers(ctx, K, H, sides, boost)
    per_pass = len(multipliers[0]) * len(multipliers[1])
    if per_pass > budget.double_coset_budget:
        logger.warning(f"剪枝检查每个 g 需要 {per_pass} 个乘积，超过 double_coset_budget "
                       f"{budget.double_coset_budget}，本次搜索不剪枝")
        return None
    logger.debug(f"剪枝 {mode.value}: 左乘子 {len(multipliers[0])} 个，右乘子 {len(multipliers[1])} 个")
    return lambda g: shorter_representative(ctx, g, multipliers) is not None


def _run_search(ctx: GroupContext, K: Subgroup, g_radius: int, h_candidates: List[str],
                skip: Optional[Callable[[str], bool]], budget: Budget):
    g_candidates = ctx.explorer.ball_texts(g_radius)
    logger.info(f"开始搜索: g 候选 {len(g_candidates)} 个，h 候选 {len(h_candidates)} 个，"
                f"线程 {budget.threads}")

    def evaluate(g: str):
        if skip is not None and skip(g):
            return None, 0
        g_inv = _invert_text(g)
        examined = 0
        for h in h_candidates:
            examined += 1
            if member_text(ctx, K, g + h + g_inv):
                return (g, h), examined
        return None, examined

    return SearchWorker(g_candidates, evaluate, budget.threads, budget.chunk_size).run()


def _make_witness(ctx: GroupContext, g: str, h: str) -> Witness:
    k = ctx.explorer.normal_form(g + h + _invert_text(g))
    return Witness(Word(g), Word(h), Word(k))


def decide_subgroup_conjugacy(ctx: GroupContext, H: Subgroup, K: Subgroup, budget: Budget) -> Decision:
    """
    H 的某个非平凡元素能否共轭进 K

    g 取 ball(min(B_g, C−1)) 的 ShortLex 序，h 取 H 中长度 ≤ min(B_h, C′−1) 的非平凡元素；
    第一个命中即为 (|g|, g, |h|, h) 序下最小的证据。预算耗尽以 UNKNOWN 返回。
    """
    start = time.perf_counter()
    bounds = compute_bounds(ctx, H, K)
    try:
        g_radius, h_radius = _search_radii(ctx, bounds, budget)
    except _Infeasible as e:
        logger.warning(str(e))
        return Decision(Verdict.UNKNOWN, budget, bounds=bounds, diagnostics=str(e),
                        runtime_ms=_elapsed_ms(start))

    used = budget.with_lengths(g_radius, h_radius)
    try:
        h_candidates = [h for h in subgroup_ball_texts(ctx, H, h_radius) if h]
        outcome = _run_search(ctx, K, g_radius, h_candidates, _pruner(ctx, K, H, budget, g_radius), budget)
    except BudgetExceeded as e:
        logger.warning(f"搜索预算耗尽: {e}")
        return Decision(Verdict.UNKNOWN, used, bounds=bounds, searched_g_radius=g_radius,
                        searched_h_radius=h_radius, diagnostics=str(e), runtime_ms=_elapsed_ms(start))

    witness = _make_witness(ctx, *outcome.found) if outcome.found else None
    verdict = _verdict(witness is not None, bounds, g_radius, h_radius)
    logger.info(f"子群共轭判定: {verdict.value}, 检查 {outcome.examined} 个乘积")
    return Decision(verdict, used, outcome.examined, witness, bounds, g_radius, h_radius,
                    runtime_ms=_elapsed_ms(start))


def decide_conjugate_into(ctx: GroupContext, u: Word, K: Subgroup, budget: Budget) -> Decision:
    """
    u 能否共轭进 K：扫描 g ∈ ball(min(B_g, C−1))，检查 g·u·g⁻¹ ∈ K

    Raises:
        TrivialGenerator: u 平凡
    """
    start = time.perf_counter()
    H = cyclic_subgroup(ctx, u)
    u_nf = ctx.explorer.normal_form(u.text)
    bounds = compute_bounds(ctx, H, K)
    try:
        g_radius, _ = _search_radii(ctx, bounds, budget)
    except _Infeasible as e:
        logger.warning(str(e))
        return Decision(Verdict.UNKNOWN, budget, bounds=bounds, diagnostics=str(e),
                        runtime_ms=_elapsed_ms(start))

    h_radius = len(u_nf)
    used = budget.with_lengths(g_radius, budget.max_element_len)
    try:
        outcome = _run_search(ctx, K, g_radius, [u_nf], _pruner(ctx, K, H, budget, g_radius), budget)
    except BudgetExceeded as e:
        logger.warning(f"搜索预算耗尽: {e}")
        return Decision(Verdict.UNKNOWN, used, bounds=bounds, searched_g_radius=g_radius,
                        searched_h_radius=h_radius, diagnostics=str(e), runtime_ms=_elapsed_ms(start))

    witness = _make_witness(ctx, *outcome.found) if outcome.found else None
    if witness is not None:
        verdict = Verdict.YES
    elif g_radius >= bounds.C - 1:
        verdict = Verdict.NO_CERTIFIED
    else:
        verdict = Verdict.UNKNOWN
    logger.info(f"元素共轭判定: {verdict.value}, 检查 {outcome.examined} 个共轭")
    return Decision(verdict, used, outcome.examined, witness, bounds, g_radius, h_radius,
                    runtime_ms=_elapsed_ms(start))


def _exponent_order(max_exponent: int):
    for n in range(1, max_exponent + 1):
        yield n
        yield -n


def decide_power_conjugacy(ctx: GroupContext, u: Word, v: Word, budget: Budget,
                           max_exponent: int = 6) -> Decision:
    """
    u 是否共轭于 v 的某个幂

    YES 时额外给出指数 n（g·u·g⁻¹ = vⁿ，按 1, −1, 2, −2, … 扫描）

    Raises:
        TrivialGenerator: u 或 v 平凡
        ExponentNotRecovered: 成员关系成立但 |n| ≤ max_exponent 内找不到指数
    """
    K = cyclic_subgroup(ctx, v)
    decision = decide_conjugate_into(ctx, u, K, budget)
    if decision.verdict is not Verdict.YES:
        return decision

    k = decision.witness.k
    for n in _exponent_order(max_exponent):
        if are_equal(ctx, k, v.power(n)):
            return replace(decision, witness=replace(decision.witness, exponent=n))
    raise ExponentNotRecovered(
        f"g·u·g⁻¹ = {k.text} 属于 ⟨{v.text}⟩，但 |n| ≤ {max_exponent} 内没有对应的幂，请增大 max_exponent"
    )


def decide_some_power_conjugate_into(ctx: GroupContext, u: Word, K: Subgroup, budget: Budget) -> Decision:
    """
    u 的某个非平凡幂是否共轭进 K（H = ⟨u⟩ 的子群共轭判定）

    YES 时在 |j| ≤ 2|h| 内恢复 h = uʲ 的指数，恢复不到时不给出
    """
    H = cyclic_subgroup(ctx, u)
    decision = decide_subgroup_conjugacy(ctx, H, K, budget)
    if decision.verdict is not Verdict.YES:
        return decision
    h = decision.witness.h
    for j in _exponent_order(max(1, 2 * len(h))):
        if are_equal(ctx, h, u.power(j)):
            return replace(decision, witness=replace(decision.witness, exponent=j))
    return decision


def oracle_free_conjugacy(u: Word, v: Word) -> bool:
    """自由群共轭：循环约化核心互为循环置换"""
    core_u, _ = cyclic_reduce(u)
    core_v, _ = cyclic_reduce(v)
    if len(core_u) != len(core_v):
        return False
    return core_u.text in core_v.text + core_v.text


def oracle_brute_force(ctx: GroupContext, H: Subgroup, K: Subgroup, g_radius: int, h_radius: int) -> Decision:
    """
    不剪枝、不使用界常数的穷举判定器

    与主求解器使用相同的证据顺序，只给出 YES 或 UNKNOWN

    Raises:
        BudgetExceeded
    """
    start = time.perf_counter()
    if g_radius < 0 or h_radius < 0:
        raise InputError("搜索半径必须非负")
    budget = Budget(g_radius, h_radius, ctx.node_limit, pruning=PruningMode.NONE)
    explorer = ctx.explorer
    h_candidates = [h for h in subgroup_ball_texts(ctx, H, h_radius) if h]

    examined = 0
    for g in explorer.ball_texts(g_radius):
        g_inv = _invert_text(g)
        for h in h_candidates:
            examined += 1
            if member_text(ctx, K, g + h + g_inv):
                witness = _make_witness(ctx, g, h)
                logger.info(f"穷举判定: 找到证据 g={g or 'ε'}, h={h}")
                return Decision(Verdict.YES, budget, examined, witness, None, g_radius, h_radius,
                                runtime_ms=_elapsed_ms(start))
    logger.info(f"穷举判定: 半径 ({g_radius}, {h_radius}) 内无证据")
    return Decision(Verdict.UNKNOWN, budget, examined, None, None, g_radius, h_radius,
                    runtime_ms=_elapsed_ms(start))
