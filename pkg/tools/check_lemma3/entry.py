import logging

from core.services.cayley import check_lemma3
from core.toolbox.base import BaseTool, ToolMetadata
from core.utils.exporters import DataExporter

logger = logging.getLogger(__name__)


class CheckLemma3Tool(BaseTool):
    """
    共轭四边形的同行检查

    --dot 给出时把四边形写成 DOT 文件，便于离线可视化
    """

    def get_metadata(self) -> ToolMetadata:
        return ToolMetadata(
            name="check-lemma3",
            display_name="四边形同行检查",
            description="在 [2δ+μ, n−2δ−μ] 上检查 d(vᵢ, v′ᵢ) < 8δ+μ",
            category="cayley"
        )

    def add_arguments(self, parser):
        self.add_group_arguments(parser)
        parser.add_argument("-H", "--subgroup-h", required=True, help="子群 H 文件")
        parser.add_argument("-K", "--subgroup-k", required=True, help="子群 K 文件")
        parser.add_argument("-g", "--conjugator", required=True, help="共轭元 g")
        parser.add_argument("-e", "--element", required=True, help="H 中的非平凡元素 h")
        parser.add_argument("--dot", default=None, help="四边形 DOT 输出路径")
        parser.add_argument("--double-coset-budget", type=int, default=None, help="双陪集约化的乘积预算")
        parser.add_argument("--exhaustive-double-coset", action="store_true",
                            help="全局认证 g 在 K·g·H 中最短")

    def run(self, args) -> int:
        ctx = self.load_context(args)
        H = self.load_subgroup(ctx, args.subgroup_h)
        K = self.load_subgroup(ctx, args.subgroup_k)
        g = self.parse_word(ctx, args.conjugator)
        h = self.parse_word(ctx, args.element)
        budget = self._setting(args, "double_coset_budget", "double_coset_budget")

        report = check_lemma3(ctx, H, K, g, h, budget, exhaustive=args.exhaustive_double_coset)
        if args.dot and report.trace is not None:
            ok, message = DataExporter.export_dot(report.trace, args.dot)
            if not ok:
                logger.warning(message)
        return self.emit(report.to_dict())
