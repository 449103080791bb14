import importlib
import inspect
import logging
import os
from typing import Dict, List, Optional

from .base import BaseTool

logger = logging.getLogger(__name__)


class ToolManager:
    """
    工具管理器
    负责扫描 tools/ 目录，加载子命令插件并按子命令名索引
    """

    def __init__(self, hub):
        self.hub = hub
        self.tools: Dict[str, BaseTool] = {}  # {command: tool_instance}

    def discover_tools(self, tools_dir: str):
        """
        扫描 tools/<dir>/entry.py

        每个 entry 模块取第一个在本模块中定义的 BaseTool 子类；
        子命令名取自其元数据 name，重名时保留先发现的插件
        """
        if not os.path.isdir(tools_dir):
            logger.warning(f"工具目录不存在: {tools_dir}")
            return

        for item in sorted(os.listdir(tools_dir)):
            if item.startswith(('_', '.')):
                continue
            if os.path.isfile(os.path.join(tools_dir, item, "entry.py")):
                self._register(item)
        logger.debug(f"共发现 {len(self.tools)} 个子命令: {', '.join(self.list_available_tools())}")

    def _register(self, package: str):
        module_path = f"tools.{package}.entry"
        try:
            module = importlib.import_module(module_path)
        except Exception as e:
            logger.error(f"加载工具 {package} 失败: {e}")
            return

        classes = [cls for _, cls in inspect.getmembers(module, inspect.isclass)
                   if issubclass(cls, BaseTool) and cls is not BaseTool
                   and cls.__module__ == module.__name__]
        if not classes:
            logger.warning(f"在 {module_path} 中未找到合法的 BaseTool 实现")
            return

        try:
            tool = classes[0](self.hub)
            command = tool.get_metadata().name
        except Exception as e:
            logger.error(f"实例化工具 {package} 失败: {e}")
            return

        if command in self.tools:
            logger.warning(f"子命令 {command} 重复定义，忽略 {module_path}")
            return
        self.tools[command] = tool

    def get_tool(self, command: str) -> Optional[BaseTool]:
        """按子命令名取插件实例"""
        return self.tools.get(command)

    def list_available_tools(self) -> List[str]:
        """返回已发现的子命令列表"""
        return sorted(self.tools)
