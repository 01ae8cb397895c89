"""
Core package: JND model, QP mapping, block analysis and the coding simulator.
"""

from .jnd_model import block_mean, block_stats, chroma_threshold, luma_threshold, threshold_curve
from .qp_mapping import (
    chroma_offset,
    derive_block_qp,
    perceptual_chroma_qp,
    perceptual_step,
    qp_from_step,
    qp_pair_from_step,
    qstep_from_qp,
)
from .block_analysis import analyze_frame, analyze_sequence, partition
from .codec_sim import run_simulation, simulate

__all__ = [
    "block_mean",
    "block_stats",
    "luma_threshold",
    "chroma_threshold",
    "threshold_curve",
    "qstep_from_qp",
    "perceptual_step",
    "qp_from_step",
    "qp_pair_from_step",
    "perceptual_chroma_qp",
    "chroma_offset",
    "derive_block_qp",
    "partition",
    "analyze_frame",
    "analyze_sequence",
    "simulate",
    "run_simulation",
]
