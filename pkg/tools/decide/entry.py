from core.services.solver import decide_subgroup_conjugacy
from core.toolbox.base import BaseTool, ToolMetadata


class DecideTool(BaseTool):
    """子群共轭判定：H 的某个非平凡元素能否共轭进 K"""

    def get_metadata(self) -> ToolMetadata:
        return ToolMetadata(
            name="decide",
            display_name="子群共轭判定",
            description="判定 H 的非平凡元素能否共轭进 K，给出最小证据 (g, h, k)",
            category="solver"
        )

    def add_arguments(self, parser):
        self.add_group_arguments(parser)
        parser.add_argument("-H", "--subgroup-h", required=True, help="子群 H 文件")
        parser.add_argument("-K", "--subgroup-k", required=True, help="子群 K 文件")
        self.add_search_arguments(parser)

    def run(self, args) -> int:
        ctx = self.load_context(args)
        H = self.load_subgroup(ctx, args.subgroup_h)
        K = self.load_subgroup(ctx, args.subgroup_k)
        decision = decide_subgroup_conjugacy(ctx, H, K, self.make_budget(args))
        return self.emit_decision(decision)
