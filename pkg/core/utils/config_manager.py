"""
配置管理模块

config/settings.json 按段合并内置默认值；search 段的数值项做类型检查，
非法值记录警告并回退到默认值
"""

import copy
import json
import logging
import os
from typing import Any, Dict, Optional

from core.utils.utils import get_project_root

logger = logging.getLogger(__name__)


DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "search": {
        "node_limit": 200000,
        "threads": 1,
        "max_conjugator_len": 4,
        "max_element_len": 6,
        "max_exponent": 6,
        "double_coset_budget": 20000,
        "triangle_cap": 1000000,
        "direct_radius": 4,
        "chunk_size": 32
    },
    "output": {
        "format": "machine",
        "with_timing": False
    },
    "advanced": {
        "log_level": "INFO",
        "log_to_file": False
    }
}

# 必须 ≥ 1 的 search 项，其余数值项只要求 ≥ 0
_POSITIVE_KEYS = ("node_limit", "threads", "max_exponent", "triangle_cap", "chunk_size")


def default_settings_path() -> str:
    return os.path.join(get_project_root(), 'config', 'settings.json')


class ConfigManager:
    """配置管理器"""

    def __init__(self, config_file: Optional[str] = None):
        self.config_file = config_file or default_settings_path()
        self.config: Dict[str, Any] = {}

    def load(self) -> Dict[str, Any]:
        """读取配置文件；文件缺失或不是 JSON 对象时使用内置默认值"""
        if not os.path.exists(self.config_file):
            logger.debug(f"配置文件不存在，使用默认配置: {self.config_file}")
            self.config = copy.deepcopy(DEFAULT_CONFIG)
            return self.config

        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, ValueError) as e:
            logger.error(f"加载配置失败，使用默认配置: {e}")
            data = None

        if data is not None and not isinstance(data, dict):
            logger.error(f"配置文件顶层必须是对象: {self.config_file}")
            data = None
        self.config = data if data is not None else copy.deepcopy(DEFAULT_CONFIG)
        return self.config

    def get_section(self, name: str) -> Dict[str, Any]:
        """
        获取配置段：文件中的值覆盖内置默认值

        Args:
            name: search / output / advanced

        Returns:
            合并后的字典副本
        """
        defaults = DEFAULT_CONFIG.get(name, {})
        merged = dict(defaults)
        section = self.config.get(name, {})
        if not isinstance(section, dict):
            logger.warning(f"配置段 {name} 不是对象，已忽略")
            return merged

        for key, value in section.items():
            if name == "search" and key in defaults and not self._valid_search_value(key, value):
                logger.warning(f"search.{key} = {value!r} 不合法，使用默认值 {defaults[key]}")
                continue
            merged[key] = value
        return merged

    @staticmethod
    def _valid_search_value(key: str, value: Any) -> bool:
        if isinstance(value, bool) or not isinstance(value, int):
            return False
        return value >= (1 if key in _POSITIVE_KEYS else 0)


# 全局配置管理器实例
_config_manager: Optional[ConfigManager] = None


def get_config_manager(config_file: Optional[str] = None) -> ConfigManager:
    """
    获取全局配置管理器实例

    Args:
        config_file: 指定配置文件时重新创建实例（--config）
    """
    global _config_manager
    if _config_manager is None or (config_file and config_file != _config_manager.config_file):
        _config_manager = ConfigManager(config_file)
        _config_manager.load()
    return _config_manager
