from core.services.bounds import bound_report, compute_bounds
from core.toolbox.base import BaseTool, ToolMetadata


class BoundsTool(BaseTool):
    """
    界常数计算：L、L′、m、C、C′

    给出 -H/-K 时 μ 取两者的最大值，否则使用 --mu
    """

    def get_metadata(self) -> ToolMetadata:
        return ToolMetadata(
            name="bounds",
            display_name="界常数",
            description="计算共轭元长度界 C 与子群元素长度界 C′（精确大整数）",
            category="bounds"
        )

    def add_arguments(self, parser):
        self.add_group_arguments(parser)
        parser.add_argument("--mu", type=int, default=None, help="拟凸常数 μ（小于 1 时按 1 计）")
        parser.add_argument("-H", "--subgroup-h", default=None, help="子群 H 文件")
        parser.add_argument("-K", "--subgroup-k", default=None, help="子群 K 文件")

    def run(self, args) -> int:
        ctx = self.load_context(args)
        if args.subgroup_h and args.subgroup_k:
            H = self.load_subgroup(ctx, args.subgroup_h)
            K = self.load_subgroup(ctx, args.subgroup_k)
            report = compute_bounds(ctx, H, K)
        else:
            report = bound_report(ctx, args.mu if args.mu is not None else 1)
        return self.emit(report.to_dict())
