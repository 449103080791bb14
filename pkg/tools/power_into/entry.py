from core.services.solver import decide_some_power_conjugate_into
from core.toolbox.base import BaseTool, ToolMetadata


class PowerIntoTool(BaseTool):
    """u 的某个非平凡幂能否共轭进 K"""

    def get_metadata(self) -> ToolMetadata:
        return ToolMetadata(
            name="power-into",
            display_name="幂共轭进子群",
            description="判定 u 的某个非平凡幂是否共轭于 K 中的元素",
            category="solver"
        )

    def add_arguments(self, parser):
        self.add_group_arguments(parser)
        parser.add_argument("-u", "--word", required=True, help="元素 u")
        parser.add_argument("-K", "--subgroup-k", required=True, help="子群 K 文件")
        self.add_search_arguments(parser)

    def run(self, args) -> int:
        ctx = self.load_context(args)
        u = self.parse_word(ctx, args.word)
        K = self.load_subgroup(ctx, args.subgroup_k)
        decision = decide_some_power_conjugate_into(ctx, u, K, self.make_budget(args))
        return self.emit_decision(decision)
