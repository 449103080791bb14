import argparse
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from core.models.decision import Budget, Decision, PruningMode, Verdict
from core.models.word import Word
from core.parsers.presentation_parser import load_group_file, load_subgroup_file, parse_word
from core.services.normalizer import GroupContext, build_context
from core.services.subgroup import Subgroup, make_subgroup

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_UNDECIDED = 2


class ToolMetadata:
    """工具元数据"""
    def __init__(self,
                 name: str,
                 display_name: str,
                 description: str,
                 category: str = "General"):
        self.name = name
        self.display_name = display_name
        self.description = description
        self.category = category


class BaseTool(ABC):
    """
    工具基类 - 每个子命令对应一个插件
    """

    def __init__(self, hub: Any):
        """
        初始化工具
        :param hub: SharedHub 实例，用于访问全局资源
        """
        self.hub = hub

    @abstractmethod
    def get_metadata(self) -> ToolMetadata:
        """返回工具的展示元数据（name 即子命令名）"""
        pass

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser):
        """向子命令解析器注册参数"""
        pass

    @abstractmethod
    def run(self, args: argparse.Namespace) -> int:
        """执行子命令并输出结果文档，返回退出码"""
        pass

    # ---------- 公共参数 ----------

    @staticmethod
    def add_group_arguments(parser: argparse.ArgumentParser):
        parser.add_argument("-G", "--group", required=True, help="展示文件")
        parser.add_argument("--delta", type=int, default=None, help="覆盖展示文件中的 δ")
        parser.add_argument("--node-limit", type=int, default=None, help="球构造节点上限")

    @staticmethod
    def add_search_arguments(parser: argparse.ArgumentParser):
        parser.add_argument("--max-conjugator", type=int, default=None, help="B_g：共轭元最大长度")
        parser.add_argument("--max-element", type=int, default=None, help="B_h：子群元素最大长度")
        parser.add_argument("--paper-bounds", action="store_true", help="使用 C−1、C′−1 作为搜索界")
        parser.add_argument("--pruning", choices=[m.value for m in PruningMode], default=None,
                            help="候选剪枝方式")
        parser.add_argument("--exhaustive-double-coset", action="store_true",
                            help="剪枝时全局认证 K·g·H 的最短代表（自由群精确，其余情形放大乘子半径）")
        parser.add_argument("--threads", type=int, default=None, help="并行线程数")

    # ---------- 加载 ----------

    def _setting(self, args: argparse.Namespace, attr: str, key: str) -> Any:
        value = getattr(args, attr, None)
        if value is not None:
            return value
        return self.hub.search_settings().get(key)

    def load_context(self, args: argparse.Namespace) -> GroupContext:
        document = load_group_file(args.group)
        delta = args.delta if args.delta is not None else document.delta
        settings = self.hub.search_settings()
        node_limit = self._setting(args, "node_limit", "node_limit")
        return build_context(document.presentation, delta,
                             node_limit=node_limit,
                             direct_radius=settings.get("direct_radius", 4))

    def load_subgroup(self, ctx: GroupContext, path: str) -> Subgroup:
        spec = load_subgroup_file(path, ctx.alphabet)
        return make_subgroup(ctx, spec.generators, spec.mu, spec.backend)

    def parse_word(self, ctx: GroupContext, text: str) -> Word:
        return parse_word(text.strip(), ctx.alphabet)

    def make_budget(self, args: argparse.Namespace) -> Budget:
        pruning = getattr(args, "pruning", None)
        return Budget(
            max_conjugator_len=self._setting(args, "max_conjugator", "max_conjugator_len"),
            max_element_len=self._setting(args, "max_element", "max_element_len"),
            node_limit=self._setting(args, "node_limit", "node_limit"),
            paper_mode=bool(getattr(args, "paper_bounds", False)),
            pruning=PruningMode(pruning) if pruning else None,
            double_coset_budget=self.hub.search_settings().get("double_coset_budget", 20000),
            exhaustive_double_coset=bool(getattr(args, "exhaustive_double_coset", False)),
            threads=self._setting(args, "threads", "threads"),
            chunk_size=self.hub.search_settings().get("chunk_size", 32),
        )

    # ---------- 输出 ----------

    def emit(self, document: Dict[str, Any]) -> int:
        self.hub.emit(document)
        return EXIT_OK

    def emit_decision(self, decision: Decision, extra: Optional[Dict[str, Any]] = None) -> int:
        document = decision.to_dict(with_timing=self.hub.with_timing)
        if extra:
            document.update(extra)
        self.hub.emit(document)
        return EXIT_UNDECIDED if decision.verdict is Verdict.UNKNOWN else EXIT_OK
