"""
后台 Worker 模块

提供候选搜索的分块并行执行
"""

from .search_worker import SearchOutcome, SearchWorker

__all__ = ['SearchWorker', 'SearchOutcome']
