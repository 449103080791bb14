import logging
import sys
from typing import Any, Dict, Optional, TextIO

from core.utils.config_manager import DEFAULT_CONFIG
from core.utils.exporters import DataExporter

logger = logging.getLogger(__name__)


class SharedHub:
    """
    资源共享中心 (SharedHub)
    管理所有子命令共用的资源：
    - 全局配置
    - 输出格式与输出流
    """

    def __init__(self, stdout: Optional[TextIO] = None):
        self.config = None
        self.output_format = "machine"
        self.with_timing = False
        self.report_path: Optional[str] = None
        self.stdout = stdout if stdout is not None else sys.stdout

    def set_config(self, config_manager):
        """设置全局配置管理器"""
        self.config = config_manager
        logger.debug(f"已绑定配置文件: {config_manager.config_file}")

    def search_settings(self) -> Dict[str, Any]:
        """search 配置段（未设置配置管理器时返回内置默认值）"""
        if self.config is None:
            return dict(DEFAULT_CONFIG["search"])
        return self.config.get_section("search")

    def emit(self, document: Dict[str, Any]):
        """把结果文档写到标准输出，可选另存一份 JSON"""
        self.stdout.write(DataExporter.render(document, self.output_format))
        self.stdout.write("\n")
        if self.report_path:
            DataExporter.export_json_report(document, self.report_path)
