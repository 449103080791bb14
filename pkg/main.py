"""
ggc - 命令行入口

拟凸子群共轭判定工具箱
"""

import sys

from core.toolbox.cli import run


def main():
    """工具箱入口：解析参数、发现插件并分派子命令"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
