from core.errors import InputError
from core.services.solver import oracle_brute_force, oracle_free_conjugacy
from core.toolbox.base import BaseTool, ToolMetadata


class OracleTool(BaseTool):
    """
    独立判定器

    brute-force: 不剪枝、不用界常数的穷举；
    free-conjugacy: 自由群中按循环字判定 u 与 v 是否共轭
    """

    def get_metadata(self) -> ToolMetadata:
        return ToolMetadata(
            name="oracle",
            display_name="验证用判定器",
            description="穷举判定或自由群循环字共轭判定，用于交叉验证",
            category="solver"
        )

    def add_arguments(self, parser):
        self.add_group_arguments(parser)
        parser.add_argument("--kind", choices=["brute-force", "free-conjugacy"], default="brute-force")
        parser.add_argument("-H", "--subgroup-h", default=None, help="子群 H 文件")
        parser.add_argument("-K", "--subgroup-k", default=None, help="子群 K 文件")
        parser.add_argument("--g-radius", type=int, default=None, help="共轭元半径")
        parser.add_argument("--h-radius", type=int, default=None, help="子群元素半径")
        parser.add_argument("-u", "--word", default=None, help="free-conjugacy 的 u")
        parser.add_argument("-v", "--other-word", default=None, help="free-conjugacy 的 v")

    def run(self, args) -> int:
        ctx = self.load_context(args)
        if args.kind == "free-conjugacy":
            if not ctx.is_free:
                raise InputError("free-conjugacy 只适用于自由群")
            if args.word is None or args.other_word is None:
                raise InputError("free-conjugacy 需要 -u 与 -v")
            u = self.parse_word(ctx, args.word)
            v = self.parse_word(ctx, args.other_word)
            return self.emit({"u": u.text, "v": v.text, "conjugate": oracle_free_conjugacy(u, v)})

        if not (args.subgroup_h and args.subgroup_k):
            raise InputError("brute-force 需要 -H 与 -K")
        H = self.load_subgroup(ctx, args.subgroup_h)
        K = self.load_subgroup(ctx, args.subgroup_k)
        g_radius = self._setting(args, "g_radius", "max_conjugator_len")
        h_radius = self._setting(args, "h_radius", "max_element_len")
        return self.emit_decision(oracle_brute_force(ctx, H, K, g_radius, h_radius))
