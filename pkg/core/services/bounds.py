"""
界常数的精确大整数计算

全部使用 Python 任意精度整数，不涉及浮点。
"""

import logging
from typing import Optional

from core.errors import BudgetExceeded, InputError
from core.models.reports import BoundReport
from core.services.normalizer import GroupContext

logger = logging.getLogger(__name__)


def count_words(alphabet_size: int, max_len_exclusive: int) -> int:
    """
    长度小于 max_len_exclusive 的所有字（含未约化字与空字）的个数

    即 Σ_{i=0}^{n−1} sⁱ
    """
    if alphabet_size < 0 or max_len_exclusive < 0:
        raise InputError("字母表大小与长度必须非负")
    n = max_len_exclusive
    if n == 0:
        return 0
    if alphabet_size == 0:
        return 1
    if alphabet_size == 1:
        return n
    return (alphabet_size ** n - 1) // (alphabet_size - 1)


def free_ball_size(rank: int, radius: int) -> int:
    """秩为 rank 的自由群中半径 radius 的球的元素个数"""
    if radius < 0:
        raise InputError(f"半径必须非负: {radius}")
    if rank == 0:
        return 1
    if rank == 1:
        return 2 * radius + 1
    # 1 + 2k((2k−1)ⁿ−1)/(2k−2)
    return 1 + rank * ((2 * rank - 1) ** radius - 1) // (rank - 1)


def ball_size_at_most(ctx: GroupContext, radius: int, cap: int) -> Optional[int]:
    """
    半径 radius 的球的元素个数；超过 cap 时返回 None

    不会对巨大的半径做幂运算
    """
    rank = ctx.presentation.rank
    if rank >= 1 and radius > cap:
        return None
    if ctx.is_free:
        size = free_ball_size(rank, radius)
        return size if size <= cap else None
    if free_ball_size(rank, radius) <= cap:
        return len(ctx.explorer.ball_texts(radius))
    return None


def count_elements(ctx: GroupContext, max_len_inclusive: int) -> int:
    """
    长度不超过 n 的群元素个数

    自由群用闭式；其余由 BFS 构造球计数

    Raises:
        BudgetExceeded: 非自由群且球超过节点上限
    """
    if ctx.is_free:
        return free_ball_size(ctx.presentation.rank, max_len_inclusive)
    if free_ball_size(ctx.presentation.rank, max_len_inclusive) > ctx.node_limit:
        raise BudgetExceeded(
            f"半径 {max_len_inclusive} 的球无法在节点上限 {ctx.node_limit} 内枚举",
            limit=ctx.node_limit,
        )
    return len(ctx.explorer.ball_texts(max_len_inclusive))


def bound_report(ctx: GroupContext, mu: int) -> BoundReport:
    """
    给定 μ 计算 L、L′、m、C、C′

    μ 按正整数约定提升到至少 1；非自由群中 m 无法枚举时改用
    count_words(2|X|, n+1) 作为上界并打上标记
    """
    if mu < 1:
        logger.info(f"μ = {mu} 按正整数约定提升为 1")
        mu = 1
    delta = ctx.delta
    s = 2 * ctx.presentation.rank

    L = count_words(s, 8 * delta + mu)
    Lprime = count_words(s, 2 * delta + 2 * mu)

    m_radius = 42 * delta + 12 * mu
    m_is_upper_bound = False
    try:
        m = count_elements(ctx, m_radius)
    except BudgetExceeded as e:
        logger.info(f"m 无法精确计算（{e}），使用字数上界")
        m = count_words(s, m_radius + 1)
        m_is_upper_bound = True

    C = 4 * delta + 2 * mu + (m * m + 1) * L
    Cprime = (Lprime + 2) * 2 * mu + 8 * delta
    report = BoundReport(
        delta=delta, mu=mu, L=L, Lprime=Lprime, m=m, C=C, Cprime=Cprime,
        m_is_upper_bound=m_is_upper_bound,
        short_conjugator_h_bound=3 * mu + 8 * delta,
        reduction_h_bound=2 * mu * (Lprime + 2),
    )
    logger.debug(f"界常数: δ={delta}, μ={mu}, L={L}, L′={Lprime}, C′={Cprime}")
    return report


def compute_bounds(ctx: GroupContext, H, K) -> BoundReport:
    """μ = max(μ_H, μ_K)，至少为 1"""
    return bound_report(ctx, max(H.mu, K.mu, 1))
