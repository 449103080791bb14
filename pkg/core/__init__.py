"""
ggc - Core Module
核心判定逻辑层：字、展示、Cayley 图、子群、界常数与求解器
"""

__version__ = "1.0.0"
