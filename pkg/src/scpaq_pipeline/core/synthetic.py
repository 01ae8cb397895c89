"""
Synthetic 4:4:4 test clips, so experiments run without external sequences.
"""

from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config.logging import get_logger
from ..data.frames import VideoFrame
from ..data.models import SUPPORTED_BIT_DEPTHS
from ..errors import DomainError

logger = get_logger(__name__)


class Pattern(str, Enum):
    """Synthetic clip pattern."""
    FLAT = "flat"
    GRADIENT = "gradient"
    DARK_BRIGHT = "dark-bright"


# 8-bit (Y, Cb, Cr) levels, scaled by 2^(b-8) at higher bit depths
DARK_LEVELS = (30, 16, 16)
BRIGHT_LEVELS = (240, 240, 240)
DEFAULT_NOISE = 12


def _flat_value(value: Optional[Union[int, Sequence[int]]], scale: int) -> Tuple[int, int, int]:
    if value is None:
        return (128 * scale,) * 3
    if isinstance(value, (int, np.integer)):
        return (int(value),) * 3
    y, cb, cr = value
    return int(y), int(cb), int(cr)


def _split_column(width: int) -> int:
    """Left/right region boundary, on a multiple of 64 when the frame allows it."""
    if width >= 128:
        return max(64, (width // 2) // 64 * 64)
    return max(1, width // 2)


def generate_clip(
    pattern: Union[Pattern, str],
    width: int,
    height: int,
    bit_depth: int = 8,
    frames: int = 1,
    seed: int = 0,
    value: Optional[Union[int, Sequence[int]]] = None,
    noise: int = DEFAULT_NOISE,
) -> List[VideoFrame]:
    """Generate a synthetic clip.

    Args:
        pattern: ``flat``, ``gradient`` or ``dark-bright``.
        width: Frame width.
        height: Frame height.
        bit_depth: Sample bit depth.
        frames: Number of frames.
        seed: Seed for the texture noise of ``dark-bright``.
        value: Sample value(s) for ``flat``; one int or a (Y, Cb, Cr) triple.
        noise: Peak texture amplitude at 8 bits for ``dark-bright``.

    Returns:
        List of frames.
    """
    pattern = Pattern(pattern)
    if bit_depth not in SUPPORTED_BIT_DEPTHS:
        raise DomainError(f"Unsupported bit depth {bit_depth}")
    if width <= 0 or height <= 0 or frames < 0:
        raise DomainError(f"Invalid clip geometry {width}x{height}x{frames}")

    scale = 1 << (bit_depth - 8)
    max_value = (1 << bit_depth) - 1
    rng = np.random.default_rng(seed)
    clip: List[VideoFrame] = []

    for _ in range(frames):
        if pattern is Pattern.FLAT:
            levels = _flat_value(value, scale)
            planes = [np.full((height, width), v, dtype=np.int64) for v in levels]
        elif pattern is Pattern.GRADIENT:
            ramp_x = np.linspace(0, max_value, width).round().astype(np.int64)
            ramp_y = np.linspace(0, max_value, height).round().astype(np.int64)
            planes = [
                np.tile(ramp_x, (height, 1)),
                np.tile(ramp_y[:, None], (1, width)),
                np.tile(ramp_y[::-1, None], (1, width)),
            ]
        else:
            split = _split_column(width)
            amplitude = noise * scale
            planes = []
            for dark, bright in zip(DARK_LEVELS, BRIGHT_LEVELS):
                plane = np.empty((height, width), dtype=np.int64)
                plane[:, :split] = dark * scale
                plane[:, split:] = bright * scale
                plane += rng.integers(-amplitude, amplitude + 1, size=(height, width))
                planes.append(plane)
        planes = [np.clip(p, 0, max_value) for p in planes]
        clip.append(VideoFrame.from_planes(*planes, bit_depth=bit_depth))

    logger.info(f"Generated {frames} {pattern.value} frame(s) at {width}x{height}, b={bit_depth}")
    return clip
