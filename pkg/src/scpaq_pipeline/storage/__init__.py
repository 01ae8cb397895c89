"""
Raw video and artifact persistence.
"""

from .yuv import iter_yuv, read_yuv, write_yuv
from .artifacts import (
    load_artifact,
    write_curve,
    write_qpmap,
    write_report,
    write_summary,
)

__all__ = [
    "iter_yuv",
    "read_yuv",
    "write_yuv",
    "write_qpmap",
    "write_report",
    "write_curve",
    "write_summary",
    "load_artifact",
]
