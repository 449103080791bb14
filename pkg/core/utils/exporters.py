"""
结果导出模块
负责把判定结果与报告渲染为机器可读文档、人类可读表格与 DOT 图
"""
import os
import json
import logging
from typing import Any, Dict, List, Tuple

from core.models.reports import QuadrilateralTrace

logger = logging.getLogger(__name__)


class DataExporter:
    """数据导出工具类"""

    @staticmethod
    def render_machine(document: Dict[str, Any]) -> str:
        """单个自包含 JSON 文档；字段顺序即插入顺序"""
        return json.dumps(document, indent=2, ensure_ascii=False)

    @staticmethod
    def _flatten(data: Any, prefix: str = "") -> List[Tuple[str, str]]:
        rows: List[Tuple[str, str]] = []
        if isinstance(data, dict):
            for key, value in data.items():
                name = f"{prefix}.{key}" if prefix else str(key)
                rows.extend(DataExporter._flatten(value, name))
        elif isinstance(data, list):
            if all(not isinstance(v, (dict, list)) for v in data):
                text = " ".join(str(v) if v != "" else "ε" for v in data)
                rows.append((prefix, text or "-"))
            else:
                for i, value in enumerate(data):
                    rows.extend(DataExporter._flatten(value, f"{prefix}[{i}]"))
        elif data is None:
            rows.append((prefix, "-"))
        elif data == "":
            rows.append((prefix, "ε"))
        else:
            rows.append((prefix, str(data)))
        return rows

    @staticmethod
    def render_human(document: Dict[str, Any]) -> str:
        """对齐的键值表"""
        rows = DataExporter._flatten(document)
        if not rows:
            return ""
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)

    @staticmethod
    def render(document: Dict[str, Any], output_format: str) -> str:
        if output_format == "human":
            return DataExporter.render_human(document)
        return DataExporter.render_machine(document)

    @staticmethod
    def quadrilateral_dot(trace: QuadrilateralTrace) -> str:
        """四边形的 DOT 描述：节点以正规形命名，四条边分别标注 p, p′, p_h, p_k"""
        def node(w) -> str:
            return json.dumps(w.text or "ε", ensure_ascii=False)

        lines = ["digraph quadrilateral {", "  rankdir=LR;"]
        nodes = []
        for side in (trace.p_vertices, trace.p_prime_vertices, trace.ph_vertices, trace.pk_vertices):
            for v in side:
                if v not in nodes:
                    nodes.append(v)
        for v in nodes:
            lines.append(f"  {node(v)};")
        for tag, side in (("p", trace.p_vertices), ("p′", trace.p_prime_vertices),
                          ("p_h", trace.ph_vertices), ("p_k", trace.pk_vertices)):
            for a, b in zip(side, side[1:]):
                lines.append(f"  {node(a)} -> {node(b)} [label=\"{tag}\"];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def export_dot(trace: QuadrilateralTrace, file_path: str):
        """写出四边形 DOT 文件"""
        try:
            dirname = os.path.dirname(file_path)
            if dirname:
                os.makedirs(dirname, exist_ok=True)
            with open(file_path, 'w', encoding='utf-8') as f:
                f.write(DataExporter.quadrilateral_dot(trace))
            logger.info(f"已导出四边形 DOT: {file_path}")
            return True, f"已导出 DOT: {os.path.basename(file_path)}"
        except Exception as e:
            logger.error(f"导出 DOT 失败: {e}")
            return False, str(e)

    @staticmethod
    def export_json_report(document: Dict[str, Any], file_path: str):
        """把结果文档另存为 JSON 文件"""
        try:
            with open(file_path, 'w', encoding='utf-8') as f:
                f.write(DataExporter.render_machine(document))
                f.write("\n")
            logger.info(f"已导出JSON报告: {file_path}")
            return True, f"已导出JSON报告: {os.path.basename(file_path)}"
        except Exception as e:
            logger.error(f"导出JSON失败: {e}")
            return False, str(e)
