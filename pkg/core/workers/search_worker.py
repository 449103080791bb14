"""
Search Worker - 分块并行候选扫描

候选按 ShortLex 顺序切块，每一波并行处理 threads 个块；
取编号最小的命中块作为结果，保证与线程数无关。
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Generic, List, Optional, Sequence, Tuple, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")

# evaluate(candidate) -> (命中结果或 None, 本候选消耗的检查次数)
Evaluator = Callable[[str], Tuple[Optional[T], int]]


@dataclass
class ChunkResult(Generic[T]):
    index: int
    found: Optional[T]
    examined: int


@dataclass
class SearchOutcome(Generic[T]):
    found: Optional[T]
    examined: int
    chunks_done: int
    total_chunks: int


class SearchWorker(Generic[T]):
    """
    确定性并行扫描

    Args:
        candidates: 已按 ShortLex 排好序的候选
        evaluate: 单个候选的检查函数，必须只读共享状态
        threads: 并行线程数
        chunk_size: 每块候选数
    """

    def __init__(self, candidates: Sequence[str], evaluate: Evaluator,
                 threads: int = 1, chunk_size: int = 32):
        self.candidates = candidates
        self.evaluate = evaluate
        self.threads = max(1, threads)
        self.chunk_size = max(1, chunk_size)

    def _chunks(self) -> List[Sequence[str]]:
        return [self.candidates[i:i + self.chunk_size]
                for i in range(0, len(self.candidates), self.chunk_size)]

    def _scan_chunk(self, index: int, chunk: Sequence[str]) -> ChunkResult:
        examined = 0
        for candidate in chunk:
            found, cost = self.evaluate(candidate)
            examined += cost
            if found is not None:
                return ChunkResult(index, found, examined)
        return ChunkResult(index, None, examined)

    def run(self) -> SearchOutcome:
        """执行扫描；块内异常按块顺序原样抛出"""
        chunks = self._chunks()
        total = len(chunks)
        examined = 0

        if self.threads == 1:
            for index, chunk in enumerate(chunks):
                result = self._scan_chunk(index, chunk)
                examined += result.examined
                if result.found is not None:
                    return SearchOutcome(result.found, examined, index + 1, total)
            return SearchOutcome(None, examined, total, total)

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            for wave_start in range(0, total, self.threads):
                wave = range(wave_start, min(wave_start + self.threads, total))
                futures = [pool.submit(self._scan_chunk, i, chunks[i]) for i in wave]
                # 按块顺序收集，命中后更靠后的块不计入
                for future in futures:
                    result = future.result()
                    examined += result.examined
                    if result.found is not None:
                        for rest in futures:
                            rest.cancel()
                        return SearchOutcome(result.found, examined, result.index + 1, total)
                logger.debug(f"第 {wave_start // self.threads + 1} 波完成: 块 {wave.stop}/{total}")
        return SearchOutcome(None, examined, total, total)
