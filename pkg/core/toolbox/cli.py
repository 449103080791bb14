"""
命令行前端

退出码：0 = 已判定（YES / NO_CERTIFIED）或普通子命令成功；
        1 = 用法或输入错误；2 = UNKNOWN / 预算耗尽
"""

import argparse
import logging
import os
import sys
from typing import List, Optional, Sequence, TextIO

from core.errors import BudgetExceeded, InputError
from core.toolbox.base import EXIT_INPUT_ERROR, EXIT_UNDECIDED
from core.toolbox.hub import SharedHub
from core.toolbox.manager import ToolManager
from core.utils.config_manager import default_settings_path, get_config_manager
from core.utils.logger import setup_logging
from core.utils.utils import get_project_root

logger = logging.getLogger(__name__)

PROG = "ggc"


class UsageError(Exception):
    pass


class ToolArgumentParser(argparse.ArgumentParser):
    """用法错误不直接退出（argparse 默认退出码 2 与“未判定”冲突）"""

    def error(self, message):
        raise UsageError(message)


def build_parser(manager: ToolManager) -> ToolArgumentParser:
    parser = ToolArgumentParser(prog=PROG, description="拟凸子群共轭判定工具箱")
    parser.add_argument("--config", default=None, help="配置文件路径（默认 config/settings.json）")
    parser.add_argument("--log-level", default=None, help="日志级别，覆盖配置")
    parser.add_argument("--output", choices=["human", "machine"], default=None, help="输出格式")
    parser.add_argument("--with-timing", action="store_true", help="在机器输出中附带 runtime_ms")
    parser.add_argument("--report", default=None, help="另存一份 JSON 结果文档")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for command in manager.list_available_tools():
        tool = manager.get_tool(command)
        if tool is None:
            continue
        meta = tool.get_metadata()
        sub = subparsers.add_parser(command, help=f"[{meta.category}] {meta.description}",
                                     description=meta.display_name)
        tool.add_arguments(sub)
    return parser


def _pre_parse(argv: Sequence[str]) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    pre.add_argument("--log-level", default=None)
    known, _ = pre.parse_known_args(list(argv))
    return known


def run(argv: Sequence[str], stdout: Optional[TextIO] = None) -> int:
    """
    解析参数并分派到子命令

    Args:
        argv: 不含程序名的参数列表
        stdout: 结果文档输出流（默认 sys.stdout）

    Returns:
        退出码
    """
    argv: List[str] = list(argv)
    pre = _pre_parse(argv)
    config_path = pre.config or default_settings_path()
    setup_logging(config_path, pre.log_level)

    hub = SharedHub(stdout)
    config_manager = get_config_manager(config_path)
    hub.set_config(config_manager)

    manager = ToolManager(hub)
    manager.discover_tools(os.path.join(get_project_root(), "tools"))
    parser = build_parser(manager)

    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        logger.error(f"参数错误: {e}")
        return EXIT_INPUT_ERROR
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    output = config_manager.get_section("output")
    hub.output_format = args.output or output.get("format", "machine")
    hub.with_timing = bool(args.with_timing or output.get("with_timing", False))
    hub.report_path = args.report

    tool = manager.get_tool(args.command)
    if tool is None:
        logger.error(f"未知子命令: {args.command}")
        return EXIT_INPUT_ERROR

    try:
        return tool.run(args)
    except InputError as e:
        logger.error(f"输入错误: {e}")
        return EXIT_INPUT_ERROR
    except BudgetExceeded as e:
        logger.error(f"预算耗尽: {e}")
        return EXIT_UNDECIDED
    except OSError as e:
        logger.error(f"文件读取失败: {e}")
        return EXIT_INPUT_ERROR
