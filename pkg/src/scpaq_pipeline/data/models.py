"""
Data models for the SC-PAQ pipeline.
"""

from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SUPPORTED_BIT_DEPTHS = (8, 10, 12, 16)
SUPPORTED_BLOCK_SIZES = (8, 16, 32, 64)
CHANNELS = ("y", "cb", "cr")

# Initial QPs of the common test conditions for screen content
EVALUATION_QPS = (22, 27, 32, 37)


class MaskingModel(str, Enum):
    """Perceptual quantization model."""
    NONE = "none"
    IDSQ = "idsq"
    SCPAQ = "scpaq"


class OffsetMode(str, Enum):
    """How chroma QP offsets are derived from the perceptual QPs."""
    LITERAL = "literal"
    DELTA = "delta"


class Component(str, Enum):
    """Threshold curve component."""
    Y = "y"
    CB = "cb"
    CR = "cr"


def check_bit_depth(bit_depth: int) -> int:
    """Return *bit_depth* if supported, raise ``ValueError`` otherwise."""
    if bit_depth not in SUPPORTED_BIT_DEPTHS:
        raise ValueError(f"Bit depth must be one of: {list(SUPPORTED_BIT_DEPTHS)}")
    return bit_depth


class MaskingParams(BaseModel):
    """Luminance (a, c, d, f) and chrominance (g, h, j, k) masking constants."""
    model_config = ConfigDict(frozen=True)

    a: float = Field(2.0, gt=0, description="Dark-side luma weight")
    c: float = Field(0.8, gt=0, description="Bright-side luma weight")
    d: float = Field(3.0, gt=0, description="Dark-side luma exponent")
    f: float = Field(2.0, gt=0, description="Bright-side luma exponent")
    g: float = Field(3.0, ge=1, description="Chroma threshold at zero")
    h: float = Field(85.0, gt=0, description="Lower chroma breakpoint")
    j: float = Field(90.0, gt=0, description="Upper chroma breakpoint")
    k: float = Field(3.0, ge=1, description="Chroma threshold at full scale")
    scale_breakpoints: bool = Field(False, description="Scale h and j by 2^(b-8)")

    @model_validator(mode="after")
    def validate_breakpoints(self):
        """Ensure 0 < h < j."""
        if not self.h < self.j:
            raise ValueError(f"Chroma breakpoints must satisfy h < j, got h={self.h}, j={self.j}")
        return self

    def breakpoints(self, bit_depth: int) -> Tuple[float, float]:
        """Chroma breakpoints (h, j) in effect at *bit_depth*."""
        if self.scale_breakpoints:
            scale = float(2 ** (bit_depth - 8))
            return self.h * scale, self.j * scale
        return self.h, self.j


class BlockStats(BaseModel):
    """Block means and JND visibility thresholds of one coding block."""
    mu_y: float = Field(..., ge=0.0)
    mu_cb: float = Field(..., ge=0.0)
    mu_cr: float = Field(..., ge=0.0)
    l_y: float = Field(..., ge=1.0)
    c_cb: float = Field(..., ge=1.0)
    c_cr: float = Field(..., ge=1.0)
    sample_count: int = Field(..., gt=0)

    def threshold(self, channel: str) -> float:
        """Visibility threshold of *channel* (``y``, ``cb`` or ``cr``)."""
        return {"y": self.l_y, "cb": self.c_cb, "cr": self.c_cr}[channel]


class QpConfig(BaseModel):
    """Base QP, clamp range and offset mode for QP derivation."""
    base_qp: int
    qp_min: int = 0
    qp_max: int = 51
    offset_mode: OffsetMode = OffsetMode.DELTA

    @model_validator(mode="after")
    def validate_range(self):
        if not self.qp_min <= self.base_qp <= self.qp_max:
            raise ValueError(
                f"base_qp {self.base_qp} outside clamp range [{self.qp_min}, {self.qp_max}]"
            )
        return self


class BlockQp(BaseModel):
    """Perceptual QPs and chroma offsets of one coding block.

    ``pqp_*`` and the literal offsets are clamped to the configured QP range;
    ``raw_pqp_*`` keep the unclamped values and delta offsets are never clamped.
    """
    pstep_y: float = Field(..., gt=0.0)
    pqp_y: int
    pqp_cb: int
    pqp_cr: int
    oqp_cb: int
    oqp_cr: int
    oqp_cb_literal: int
    oqp_cb_delta: int
    oqp_cr_literal: int
    oqp_cr_delta: int
    raw_pqp_y: int
    raw_pqp_cb: int
    raw_pqp_cr: int

    def qp(self, channel: str) -> int:
        return {"y": self.pqp_y, "cb": self.pqp_cb, "cr": self.pqp_cr}[channel]


class QpCell(BaseModel):
    """One grid cell of a QP map."""
    bx: int = Field(..., ge=0)
    by: int = Field(..., ge=0)
    stats: BlockStats
    qp: BlockQp

    def to_record(self) -> Dict[str, float]:
        """Flat sidecar record, keys in schema order."""
        return {
            "bx": self.bx,
            "by": self.by,
            "mu_y": self.stats.mu_y,
            "mu_cb": self.stats.mu_cb,
            "mu_cr": self.stats.mu_cr,
            "l": self.stats.l_y,
            "c_cb": self.stats.c_cb,
            "c_cr": self.stats.c_cr,
            "pqp_y": self.qp.pqp_y,
            "pqp_cb": self.qp.pqp_cb,
            "pqp_cr": self.qp.pqp_cr,
            "oqp_cb_literal": self.qp.oqp_cb_literal,
            "oqp_cb_delta": self.qp.oqp_cb_delta,
            "oqp_cr_literal": self.qp.oqp_cr_literal,
            "oqp_cr_delta": self.qp.oqp_cr_delta,
        }


class QpMap(BaseModel):
    """Per-block statistics and QPs for one frame, stored row-major as ``cells[by][bx]``."""
    frame_index: int = Field(..., ge=0)
    block_size: int
    grid_w: int = Field(..., gt=0)
    grid_h: int = Field(..., gt=0)
    base_qp: int
    model: MaskingModel
    offset_mode: OffsetMode = OffsetMode.DELTA
    cells: List[List[QpCell]]

    @model_validator(mode="after")
    def validate_grid(self):
        if len(self.cells) != self.grid_h or any(len(row) != self.grid_w for row in self.cells):
            raise ValueError(f"cells do not form a {self.grid_w}x{self.grid_h} grid")
        return self

    def cell(self, bx: int, by: int) -> QpCell:
        return self.cells[by][bx]

    def iter_cells(self) -> Iterator[QpCell]:
        for row in self.cells:
            yield from row

    def qp_grid(self, channel: str) -> np.ndarray:
        """Perceptual QPs of *channel* as a ``(grid_h, grid_w)`` integer array."""
        return np.array([[c.qp.qp(channel) for c in row] for row in self.cells], dtype=np.int64)

    def threshold_grid(self, channel: str) -> np.ndarray:
        """Real-valued visibility thresholds of *channel* as a ``(grid_h, grid_w)`` array."""
        return np.array([[c.stats.threshold(channel) for c in row] for row in self.cells])

    def mean_qp(self, channel: str) -> float:
        return float(self.qp_grid(channel).mean())

    def raised_fraction(self, channel: str) -> float:
        """Fraction of blocks whose QP was raised above the base QP."""
        return float((self.qp_grid(channel) > self.base_qp).mean())


class SimConfig(BaseModel):
    """Settings of one transform-quantization simulation run."""
    base_qp: int
    block_size: int = 16
    rounding_offset: float = Field(0.5, ge=0.0, lt=1.0)
    model: MaskingModel = MaskingModel.SCPAQ
    bit_depth: int = 8
    offset_mode: OffsetMode = OffsetMode.DELTA
    qp_min: int = 0
    qp_max: int = 51
    bypass_quantization: bool = Field(
        False, description="Reconstruct from unquantized coefficients (harness use)"
    )

    @field_validator("block_size")
    @classmethod
    def validate_block_size(cls, v: int) -> int:
        if v not in SUPPORTED_BLOCK_SIZES:
            raise ValueError(f"Block size must be one of: {list(SUPPORTED_BLOCK_SIZES)}")
        return v

    @field_validator("bit_depth")
    @classmethod
    def validate_bit_depth(cls, v: int) -> int:
        return check_bit_depth(v)

    @model_validator(mode="after")
    def validate_qp(self):
        self.qp_config()
        return self

    def qp_config(self) -> QpConfig:
        return QpConfig(
            base_qp=self.base_qp,
            qp_min=self.qp_min,
            qp_max=self.qp_max,
            offset_mode=self.offset_mode,
        )


class ChannelReport(BaseModel):
    """Aggregated simulation results of one colour channel."""
    channel: str
    estimated_bits: int = Field(..., ge=0)
    coefficient_count: int = Field(..., ge=0)
    sample_count: int = Field(..., ge=0)
    violation_count: int = Field(..., ge=0)
    jnd_violation_fraction: float = Field(..., ge=0.0, le=1.0)
    max_abs_error: float = Field(..., ge=0.0)
    mse: float = Field(..., ge=0.0)
    psnr_db: float
    level_entropy_bits: float = Field(..., ge=0.0)
    mean_qp: float


class SimReport(BaseModel):
    """Rate proxy, PSNR and JND-violation statistics of a simulation run."""
    config: SimConfig
    frame_count: int = Field(..., ge=0)
    channels: Dict[str, ChannelReport]
    total_bits: int = Field(..., ge=0)
    visually_lossless: bool
    qp_maps: List[QpMap] = Field(default_factory=list)

    def channel(self, name: str) -> ChannelReport:
        return self.channels[name]


class RawVideoSpec(BaseModel):
    """Layout of a raw planar 4:4:4 YCbCr file."""
    path: Path
    width: int = Field(..., gt=0)
    height: int = Field(..., gt=0)
    bit_depth: int = 8
    frame_count: int = Field(0, ge=0, description="0 reads to the end of the file")

    @field_validator("bit_depth")
    @classmethod
    def validate_bit_depth(cls, v: int) -> int:
        return check_bit_depth(v)

    @property
    def bytes_per_sample(self) -> int:
        return 1 if self.bit_depth == 8 else 2

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.uint8) if self.bit_depth == 8 else np.dtype("<u2")

    @property
    def plane_samples(self) -> int:
        return self.width * self.height

    @property
    def frame_bytes(self) -> int:
        return 3 * self.plane_samples * self.bytes_per_sample
