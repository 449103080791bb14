"""
几何与界的报告类型

BoundReport 中的大整数在序列化时一律写成十进制字符串。
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from core.models.word import Word


@dataclass(frozen=True)
class Ball:
    """半径 radius 的球：每个元素一个 ShortLex 最小正规形，按 ShortLex 排列"""
    radius: int
    elements: Tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, w: Word) -> bool:
        return w in self._members

    def __iter__(self):
        return iter(self.elements)

    @property
    def _members(self) -> frozenset:
        cached = self.__dict__.get("_member_set")
        if cached is None:
            cached = frozenset(self.elements)
            self.__dict__["_member_set"] = cached
        return cached

    def sphere(self, n: int) -> Tuple[Word, ...]:
        return tuple(w for w in self.elements if len(w) == n)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "radius": self.radius,
            "count": len(self.elements),
            "elements": [w.text for w in self.elements],
        }


@dataclass(frozen=True)
class QuadrilateralTrace:
    """
    共轭四边形

    p 从 1 到 g，p′ 从 ghg⁻¹ 到 gh（标签同为 g 的测地字），
    p_h 从 g 到 gh，p_k 从 1 到 ghg⁻¹。顶点均以正规形给出。
    """
    g: Word
    h: Word
    k: Word
    p_vertices: Tuple[Word, ...]
    p_prime_vertices: Tuple[Word, ...]
    ph_vertices: Tuple[Word, ...]
    pk_vertices: Tuple[Word, ...]
    distances: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.g)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "g": self.g.text,
            "h": self.h.text,
            "k": self.k.text,
            "n": self.n,
            "p": [v.text for v in self.p_vertices],
            "p_prime": [v.text for v in self.p_prime_vertices],
            "p_h": [v.text for v in self.ph_vertices],
            "p_k": [v.text for v in self.pk_vertices],
            "distances": list(self.distances),
        }


@dataclass(frozen=True)
class Lemma3Report:
    """
    同行检查报告

    checked_range 为闭区间 (lo, hi)，lo > hi 时为空（检查平凡通过）。
    b_distance / b_bound 对应区间右端点 b = n−2δ−μ 处的距离与 4δ+μ。
    """
    applicable: bool
    reason: str
    checked_range: Tuple[int, int]
    max_distance: int
    bound: int
    violations: Tuple[int, ...] = ()
    mu: int = 1
    delta: int = 0
    representative: Optional[Word] = None
    trace: Optional[QuadrilateralTrace] = None
    b_distance: Optional[int] = None
    b_bound: Optional[int] = None
    quadrilateral_thinness: Optional[int] = None

    @property
    def range_is_empty(self) -> bool:
        return self.checked_range[0] > self.checked_range[1]

    @property
    def passed(self) -> bool:
        return self.applicable and not self.violations

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "applicable": self.applicable,
            "reason": self.reason,
            "delta": self.delta,
            "mu": self.mu,
            "checked_range": list(self.checked_range),
            "max_distance": self.max_distance,
            "bound": self.bound,
            "violations": list(self.violations),
            "passed": self.passed,
        }
        if self.representative is not None:
            data["representative"] = self.representative.text
        if self.trace is not None:
            data["quadrilateral"] = self.trace.to_dict()
        data["b_distance"] = self.b_distance
        data["b_bound"] = self.b_bound
        data["quadrilateral_thinness"] = self.quadrilateral_thinness
        data["thinness_expectation"] = 2 * self.delta
        return data


@dataclass(frozen=True)
class DeltaEstimate:
    """经验 δ 下界：采样测地三角形的最大瘦度缺陷"""
    radius: int
    thinness_lower_bound: int
    triangles_examined: int = 0
    sampled: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "radius": self.radius,
            "thinness_lower_bound": self.thinness_lower_bound,
            "triangles_examined": self.triangles_examined,
            "sampled": self.sampled,
        }


_BIG_FIELDS = ("L", "Lprime", "m", "C", "Cprime", "short_conjugator_h_bound", "reduction_h_bound")


@dataclass(frozen=True)
class BoundReport:
    """
    界常数报告

    L: 长度 < 8δ+μ 的字数；Lprime: 长度 < 2δ+2μ 的字数；
    m: 长度 ≤ 42δ+12μ 的元素数（m_is_upper_bound 为真时是上界）；
    C = 4δ+2μ+(m²+1)·L；Cprime = (L′+2)·2μ+8δ
    """
    delta: int
    mu: int
    L: int
    Lprime: int
    m: int
    C: int
    Cprime: int
    m_is_upper_bound: bool = False
    short_conjugator_h_bound: int = 0
    reduction_h_bound: int = 0

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"delta": self.delta, "mu": self.mu}
        for name in _BIG_FIELDS:
            data[name] = str(getattr(self, name))
        data["m_is_upper_bound"] = self.m_is_upper_bound
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoundReport":
        kwargs: Dict[str, Any] = {
            "delta": int(data["delta"]),
            "mu": int(data["mu"]),
            "m_is_upper_bound": bool(data.get("m_is_upper_bound", False)),
        }
        for name in _BIG_FIELDS:
            if name in data:
                kwargs[name] = int(data[name])
        return cls(**kwargs)
