from core.services.cayley import estimate_delta
from core.toolbox.base import BaseTool, ToolMetadata


class EstimateDeltaTool(BaseTool):
    """经验 δ 下界（只用于检查用户给出的 δ 是否过小）"""

    def get_metadata(self) -> ToolMetadata:
        return ToolMetadata(
            name="estimate-delta",
            display_name="δ 估计",
            description="在半径 r 的球内扫描测地三角形，给出 δ 的经验下界",
            category="cayley"
        )

    def add_arguments(self, parser):
        self.add_group_arguments(parser)
        parser.add_argument("-r", "--radius", type=int, required=True, help="半径")
        parser.add_argument("--triangle-cap", type=int, default=None, help="超过该数量时步长抽样")

    def run(self, args) -> int:
        ctx = self.load_context(args)
        cap = self._setting(args, "triangle_cap", "triangle_cap")
        estimate = estimate_delta(ctx, args.radius, cap)
        document = estimate.to_dict()
        document["declared_delta"] = ctx.delta
        return self.emit(document)
