from core.services.cayley import ball
from core.toolbox.base import BaseTool, ToolMetadata


class BallTool(BaseTool):

    def get_metadata(self) -> ToolMetadata:
        return ToolMetadata(
            name="ball",
            display_name="Cayley 球",
            description="按 ShortLex 正规形枚举半径 r 的球",
            category="cayley"
        )

    def add_arguments(self, parser):
        self.add_group_arguments(parser)
        parser.add_argument("-r", "--radius", type=int, required=True, help="半径")
        parser.add_argument("--elements", action="store_true", help="列出全部元素")

    def run(self, args) -> int:
        ctx = self.load_context(args)
        result = ball(ctx, args.radius)
        document = result.to_dict()
        if not args.elements:
            document.pop("elements")
        return self.emit(document)
