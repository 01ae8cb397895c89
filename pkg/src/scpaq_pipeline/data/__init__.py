"""
Data models and containers for the SC-PAQ pipeline.
"""

from .models import *
from .frames import Block, BlockGrid, VideoFrame

__all__ = [
    "SUPPORTED_BIT_DEPTHS",
    "SUPPORTED_BLOCK_SIZES",
    "CHANNELS",
    "EVALUATION_QPS",
    "MaskingModel",
    "OffsetMode",
    "Component",
    "MaskingParams",
    "BlockStats",
    "QpConfig",
    "BlockQp",
    "QpCell",
    "QpMap",
    "SimConfig",
    "ChannelReport",
    "SimReport",
    "RawVideoSpec",
    "VideoFrame",
    "Block",
    "BlockGrid",
]
