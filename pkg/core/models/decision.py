"""
判定结果类型：预算、证据与三值裁决
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional

from core.models.reports import BoundReport
from core.models.word import Word


class Verdict(Enum):
    YES = "yes"
    NO_CERTIFIED = "no-certified"
    UNKNOWN = "unknown"


class PruningMode(Enum):
    """
    候选共轭元剪枝方式

    DOUBLE_COSET: 在 K·g·H 的局部邻域内存在更短代表则跳过 g
    LEFT_COSET: 只考虑 k·g，保证最小证据与不剪枝的穷举一致
    NONE: 不剪枝
    """
    DOUBLE_COSET = "double-coset"
    LEFT_COSET = "left-coset"
    NONE = "none"


@dataclass(frozen=True)
class Budget:
    """
    搜索预算；paper_mode 时 B_g、B_h 由界常数 C−1、C′−1 给出

    double_coset_budget 是剪枝检查单个 g 时允许计算的乘积数，一次检查超出时不剪枝；
    exhaustive_double_coset 时剪枝改用全局最短代表
    """
    max_conjugator_len: int = 4
    max_element_len: int = 6
    node_limit: int = 200000
    paper_mode: bool = False
    pruning: Optional[PruningMode] = None
    double_coset_budget: int = 20000
    exhaustive_double_coset: bool = False
    threads: int = 1
    chunk_size: int = 32

    @property
    def effective_pruning(self) -> PruningMode:
        if self.pruning is not None:
            return self.pruning
        return PruningMode.DOUBLE_COSET if self.paper_mode else PruningMode.LEFT_COSET

    def with_lengths(self, max_conjugator_len: int, max_element_len: int) -> "Budget":
        return replace(self, max_conjugator_len=max_conjugator_len, max_element_len=max_element_len)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_conjugator_len": str(self.max_conjugator_len),
            "max_element_len": str(self.max_element_len),
            "paper_mode": self.paper_mode,
            "pruning": self.effective_pruning.value,
            "exhaustive_double_coset": self.exhaustive_double_coset,
        }


@dataclass(frozen=True)
class Witness:
    """共轭证据：g·h·g⁻¹ = k，h ∈ H 非平凡，k ∈ K；exponent 仅幂共轭时给出"""
    g: Word
    h: Word
    k: Word
    exponent: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"g": self.g.text, "h": self.h.text, "k": self.k.text}
        if self.exponent is not None:
            data["exponent"] = self.exponent
        return data


@dataclass(frozen=True)
class Decision:
    """判定结果"""
    verdict: Verdict
    budget_used: Budget
    candidates_examined: int = 0
    witness: Optional[Witness] = None
    bounds: Optional[BoundReport] = None
    searched_g_radius: int = 0
    searched_h_radius: int = 0
    diagnostics: str = ""
    runtime_ms: Optional[float] = None

    @property
    def is_decided(self) -> bool:
        return self.verdict is not Verdict.UNKNOWN

    def to_dict(self, with_timing: bool = False) -> Dict[str, Any]:
        """
        机器可读文档；字段顺序固定

        runtime_ms 仅在 with_timing 时输出，默认输出对同一输入逐字节一致
        """
        data: Dict[str, Any] = {
            "verdict": self.verdict.value,
            "witness": self.witness.to_dict() if self.witness else None,
            "budget": self.budget_used.to_dict(),
            "bounds": None,
            "searched": {"g_radius": str(self.searched_g_radius),
                         "h_radius": str(self.searched_h_radius)},
            "candidates_examined": self.candidates_examined,
        }
        if self.bounds is not None:
            data["bounds"] = {
                "C": str(self.bounds.C),
                "Cprime": str(self.bounds.Cprime),
                "upper_bound": self.bounds.m_is_upper_bound,
            }
        if self.diagnostics:
            data["diagnostics"] = self.diagnostics
        if with_timing and self.runtime_ms is not None:
            data["runtime_ms"] = round(self.runtime_ms, 3)
        return data
