import logging
import logging.handlers
import os
import sys
from datetime import datetime
from typing import Optional

from core.utils.config_manager import ConfigManager
from core.utils.utils import get_project_root

LOG_FORMAT = '%(asctime)s [%(name)s] %(levelname)s: %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def _attach_file_handler(root_logger: logging.Logger, formatter: logging.Formatter, level: int):
    """按日期写 logs/log(YYYY-MM-DD).txt，单文件 10MB 轮转"""
    log_dir = os.path.join(get_project_root(), "logs")
    log_file = os.path.join(log_dir, f"log({datetime.now():%Y-%m-%d}).txt")
    try:
        os.makedirs(log_dir, exist_ok=True)
        handler = logging.handlers.RotatingFileHandler(
            log_file, maxBytes=10 * 1024 * 1024, backupCount=10, encoding='utf-8'
        )
    except OSError as e:
        sys.stderr.write(f"无法创建日志文件 {log_file}: {e}\n")
        return
    handler.setFormatter(formatter)
    handler.setLevel(level)
    root_logger.addHandler(handler)
    logging.info(f"日志已初始化，会话文件: {log_file}")


def setup_logging(config_path: Optional[str] = None, level_override: Optional[str] = None):
    """
    配置全局日志

    控制台输出走 stderr（stdout 只留给结果文档）；
    仅当 advanced.log_to_file 为 true 时才写入日志文件

    Args:
        config_path: 配置文件路径，缺省时使用 config/settings.json
        level_override: 命令行 --log-level，优先于配置
    """
    manager = ConfigManager(config_path)
    manager.load()
    advanced = manager.get_section("advanced")

    level_name = str(level_override or advanced.get("log_level", "INFO")).upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        sys.stderr.write(f"未知日志级别 {level_name}，改用 INFO\n")
        level = logging.INFO

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)
    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    # 重复调用时替换旧 handler
    root_logger.handlers.clear()

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(formatter)
    console.setLevel(level)
    root_logger.addHandler(console)

    if advanced.get("log_to_file", False):
        _attach_file_handler(root_logger, formatter, level)
