from core.services.solver import decide_power_conjugacy
from core.toolbox.base import BaseTool, ToolMetadata


class PowerConjugacyTool(BaseTool):
    """幂共轭：u 是否共轭于 v 的某个幂，YES 时给出指数"""

    def get_metadata(self) -> ToolMetadata:
        return ToolMetadata(
            name="power-conj",
            display_name="幂共轭判定",
            description="判定 u 是否共轭于 vⁿ，并恢复指数 n",
            category="solver"
        )

    def add_arguments(self, parser):
        self.add_group_arguments(parser)
        parser.add_argument("-u", "--word", required=True, help="元素 u")
        parser.add_argument("-v", "--base-word", required=True, help="元素 v")
        parser.add_argument("--max-exponent", type=int, default=None, help="指数扫描范围 |n|")
        self.add_search_arguments(parser)

    def run(self, args) -> int:
        ctx = self.load_context(args)
        u = self.parse_word(ctx, args.word)
        v = self.parse_word(ctx, args.base_word)
        max_exponent = self._setting(args, "max_exponent", "max_exponent")
        decision = decide_power_conjugacy(ctx, u, v, self.make_budget(args), max_exponent)
        return self.emit_decision(decision)
