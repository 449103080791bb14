from core.services.subgroup import member
from core.toolbox.base import BaseTool, ToolMetadata


class MemberTool(BaseTool):
    """子群成员判定"""

    def get_metadata(self) -> ToolMetadata:
        return ToolMetadata(
            name="member",
            display_name="成员判定",
            description="判定元素 w 是否属于子群 K（Stallings 图或球闭包）",
            category="subgroup"
        )

    def add_arguments(self, parser):
        self.add_group_arguments(parser)
        parser.add_argument("-K", "--subgroup-k", required=True, help="子群 K 文件")
        parser.add_argument("-w", "--word", required=True, help="待判定的元素")

    def run(self, args) -> int:
        ctx = self.load_context(args)
        K = self.load_subgroup(ctx, args.subgroup_k)
        w = self.parse_word(ctx, args.word)
        return self.emit({
            "word": w.text,
            "subgroup": [g.text for g in K.generators],
            "mu": K.mu,
            "backend": K.backend.value,
            "member": member(ctx, K, w),
        })
