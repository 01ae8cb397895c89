"""
Frame and block containers backed by numpy arrays.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Tuple

import numpy as np

from ..errors import DomainError, PartitionError, VideoFormatError
from .models import CHANNELS, SUPPORTED_BIT_DEPTHS


@dataclass
class VideoFrame:
    """A planar 4:4:4 YCbCr frame.

    Attributes:
        width: Frame width in pixels.
        height: Frame height in pixels.
        bit_depth: Sample bit depth b.
        plane_y: Luma samples, shape ``(height, width)``.
        plane_cb: Cb samples, same shape as ``plane_y``.
        plane_cr: Cr samples, same shape as ``plane_y``.
    """

    width: int
    height: int
    bit_depth: int
    plane_y: np.ndarray
    plane_cb: np.ndarray
    plane_cr: np.ndarray

    def __post_init__(self):
        if self.bit_depth not in SUPPORTED_BIT_DEPTHS:
            raise DomainError(f"Unsupported bit depth {self.bit_depth}")
        if self.width <= 0 or self.height <= 0:
            raise PartitionError(f"Zero-sized frame {self.width}x{self.height}")
        limit = 1 << self.bit_depth
        for name in CHANNELS:
            plane = np.asarray(self.plane(name))
            if plane.shape != (self.height, self.width):
                raise VideoFormatError(
                    f"Plane {name} has shape {plane.shape}, expected {(self.height, self.width)}",
                    plane=name,
                )
            if not np.issubdtype(plane.dtype, np.integer):
                fractional = np.flatnonzero(plane != np.rint(plane))
                if fractional.size:
                    raise VideoFormatError(
                        f"Plane {name} sample at offset {int(fractional[0])} is not an integer",
                        plane=name,
                        offset=int(fractional[0]),
                    )
            if plane.size and (plane.min() < 0 or plane.max() >= limit):
                offset = int(np.flatnonzero((plane < 0) | (plane >= limit))[0])
                raise VideoFormatError(
                    f"Plane {name} sample at offset {offset} outside [0, {limit - 1}]",
                    plane=name,
                    offset=offset,
                )
            setattr(self, f"plane_{name}", plane.astype(np.uint16, copy=False))

    @classmethod
    def from_planes(cls, y, cb, cr, bit_depth: int) -> "VideoFrame":
        y = np.asarray(y)
        if y.ndim != 2:
            raise VideoFormatError(f"Planes must be 2-D, got shape {y.shape}")
        return cls(
            width=y.shape[1],
            height=y.shape[0],
            bit_depth=bit_depth,
            plane_y=y,
            plane_cb=np.asarray(cb),
            plane_cr=np.asarray(cr),
        )

    def plane(self, channel: str) -> np.ndarray:
        return getattr(self, f"plane_{channel}")

    @property
    def planes(self) -> Dict[str, np.ndarray]:
        return {name: self.plane(name) for name in CHANNELS}

    @property
    def max_value(self) -> int:
        return (1 << self.bit_depth) - 1

    def equals(self, other: "VideoFrame") -> bool:
        return (
            self.width == other.width
            and self.height == other.height
            and self.bit_depth == other.bit_depth
            and all(np.array_equal(self.plane(c), other.plane(c)) for c in CHANNELS)
        )


@dataclass(frozen=True)
class Block:
    """One coding block: grid position, pixel extent and per-plane sample views."""

    bx: int
    by: int
    x0: int
    y0: int
    width: int
    height: int
    views: Dict[str, np.ndarray] = field(compare=False, repr=False)

    @property
    def sample_count(self) -> int:
        return self.width * self.height


@dataclass
class BlockGrid:
    """Row-major grid of blocks covering a frame."""

    block_size: int
    grid_w: int
    grid_h: int
    blocks: List[Block]

    def __iter__(self) -> Iterator[Block]:
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def block(self, bx: int, by: int) -> Block:
        return self.blocks[by * self.grid_w + bx]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.grid_h, self.grid_w
