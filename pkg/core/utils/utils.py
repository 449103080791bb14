import logging
import os
from typing import Tuple

from charset_normalizer import from_bytes

logger = logging.getLogger(__name__)

# 依次尝试的严格解码；都失败时交给 charset-normalizer
PREFERRED_ENCODINGS = ("utf-8-sig", "gb18030")


def get_project_root() -> str:
    """
    获取项目根目录绝对路径

    Returns:
        项目根目录路径
    """
    # utils.py (core/utils/) -> core/ -> root/
    return os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


def decode_bytes(raw: bytes) -> Tuple[str, str]:
    """
    解码输入文件内容

    Returns:
        (文本, 使用的编码)
    """
    for encoding in PREFERRED_ENCODINGS:
        try:
            return raw.decode(encoding), encoding
        except UnicodeDecodeError:
            continue

    best = from_bytes(raw).best()
    if best is not None and best.encoding:
        return str(best), best.encoding
    logger.warning("无法识别输入编码，按 UTF-8 替换非法字节")
    return raw.decode("utf-8", errors="replace"), "utf-8"


def read_text_file(file_path: str) -> str:
    """
    按检测到的编码读取整个文本文件（BOM 已去除）

    Raises:
        FileNotFoundError: 文件不存在
    """
    with open(file_path, 'rb') as f:
        raw = f.read()
    text, encoding = decode_bytes(raw)
    if encoding != "utf-8-sig":
        logger.debug(f"{os.path.basename(file_path)} 按 {encoding} 解码")
    return text.lstrip('﻿')
