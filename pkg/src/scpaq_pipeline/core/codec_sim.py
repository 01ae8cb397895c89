"""
Desk-scale transform / quantization / reconstruction simulator.

Each block goes through an orthonormal DCT-II, a uniform reconstruction
quantizer driven by the block's effective QStep, and back. Rates are signed
exp-Golomb code lengths of the quantized levels; distortion is measured in
the sample domain against the block's JND visibility threshold.
"""

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.fftpack import dct, idct

from ..config.logging import get_logger
from ..data.frames import VideoFrame
from ..data.models import (
    CHANNELS,
    ChannelReport,
    MaskingModel,
    MaskingParams,
    QpConfig,
    QpMap,
    SimConfig,
    SimReport,
)
from ..errors import DomainError, VideoFormatError
from .block_analysis import analyze_frame
from .jnd_model import DEFAULT_PARAMS
from .qp_mapping import qstep_from_qp

logger = get_logger(__name__)

ArrayLike = Union[float, int, Sequence, np.ndarray]


# ── Transform ────────────────────────────────────────────────────────────────

def _check_square(arr: np.ndarray) -> None:
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise DomainError(f"Transform input must end in a square N x N block, got {arr.shape}")


def dct2_forward(block: ArrayLike) -> np.ndarray:
    """Orthonormal 2-D DCT-II over the last two axes."""
    arr = np.asarray(block, dtype=np.float64)
    _check_square(arr)
    return dct(dct(arr, axis=-1, norm="ortho"), axis=-2, norm="ortho")


def dct2_inverse(coefficients: ArrayLike) -> np.ndarray:
    """Inverse of :func:`dct2_forward`."""
    arr = np.asarray(coefficients, dtype=np.float64)
    _check_square(arr)
    return idct(idct(arr, axis=-2, norm="ortho"), axis=-1, norm="ortho")


# ── Quantization ─────────────────────────────────────────────────────────────

def quantize(coef: ArrayLike, qstep: ArrayLike, theta: float = 0.5):
    """Uniform scalar quantizer ``sign(c) * floor(|c| / qstep + theta)``.

    Works element-wise on scalars or arrays (``qstep`` broadcasts).
    """
    if not 0.0 <= theta < 1.0:
        raise DomainError(f"Rounding offset must lie in [0, 1), got {theta}")
    c = np.asarray(coef, dtype=np.float64)
    q = np.asarray(qstep, dtype=np.float64)
    if np.any(q <= 0):
        raise DomainError("QStep must be positive")
    levels = np.sign(c) * np.floor(np.abs(c) / q + theta)
    return levels.astype(np.int64)[()]


def dequantize(level: ArrayLike, qstep: ArrayLike):
    """Reconstruction ``level * qstep``."""
    return (np.asarray(level, dtype=np.float64) * np.asarray(qstep, dtype=np.float64))[()]


# ── Rate ─────────────────────────────────────────────────────────────────────

def rate_estimate(levels: ArrayLike) -> int:
    """Total signed exp-Golomb length of *levels* in bits.

    ``v > 0`` maps to ``u = 2v - 1`` and ``v <= 0`` to ``u = -2v``; each code
    is ``2 * floor(log2(u + 1)) + 1`` bits long.
    """
    v = np.asarray(levels, dtype=np.int64).ravel()
    if v.size == 0:
        return 0
    u = np.where(v > 0, 2 * v - 1, -2 * v)
    # frexp exponent of an integer x >= 1 is floor(log2(x)) + 1
    _, exponent = np.frexp((u + 1).astype(np.float64))
    return int(np.sum(2 * exponent.astype(np.int64) - 1))


def _entropy_from_counts(counts: Sequence[int]) -> float:
    total = float(sum(counts))
    if total == 0:
        return 0.0
    p = np.asarray(counts, dtype=np.float64) / total
    return float(max(0.0, -np.sum(p * np.log2(p))))


def level_entropy(levels: ArrayLike) -> float:
    """Shannon entropy of the level histogram, in bits per level."""
    _, counts = np.unique(np.asarray(levels, dtype=np.int64), return_counts=True)
    return _entropy_from_counts(counts)


# ── Distortion ───────────────────────────────────────────────────────────────

def mse(reference: ArrayLike, test: ArrayLike) -> float:
    a = np.asarray(reference)
    b = np.asarray(test)
    if a.shape != b.shape:
        raise VideoFormatError(f"Plane dimensions differ: {a.shape} vs {b.shape}")
    return float(np.mean(np.square(np.subtract(a, b, dtype=np.double))))


def psnr_from_mse(value: float, bit_depth: int) -> float:
    if value == 0:
        return float("inf")
    max_val = (1 << bit_depth) - 1
    return 10.0 * math.log10((max_val ** 2) / value)


def psnr(reference: ArrayLike, test: ArrayLike, bit_depth: int) -> float:
    """PSNR in dB with peak ``2^b - 1``; ``inf`` for identical planes."""
    return psnr_from_mse(mse(reference, test), bit_depth)


# ── Simulation ───────────────────────────────────────────────────────────────

@dataclass
class _ChannelTally:
    """Order-independent sums for one channel."""
    bits: int = 0
    coefficients: int = 0
    samples: int = 0
    violations: int = 0
    squared_error: float = 0.0
    max_abs_error: float = 0.0
    qp_sum: int = 0
    blocks: int = 0
    histogram: Counter = field(default_factory=Counter)

    def merge(self, other: "_ChannelTally") -> None:
        self.bits += other.bits
        self.coefficients += other.coefficients
        self.samples += other.samples
        self.violations += other.violations
        self.squared_error += other.squared_error
        self.max_abs_error = max(self.max_abs_error, other.max_abs_error)
        self.qp_sum += other.qp_sum
        self.blocks += other.blocks
        self.histogram.update(other.histogram)


@dataclass
class _FrameResult:
    qp_map: QpMap
    tallies: Dict[str, _ChannelTally]
    reconstructed: VideoFrame


@dataclass
class SimulationRun:
    """Report plus the reconstructed frames it was measured on."""
    report: SimReport
    reconstructed: List[VideoFrame]


def _to_blocks(plane: np.ndarray, n: int, grid_h: int, grid_w: int) -> np.ndarray:
    """Zero-pad *plane* to whole blocks and view it as ``(grid_h, grid_w, n, n)``."""
    padded = np.zeros((grid_h * n, grid_w * n), dtype=np.float64)
    padded[: plane.shape[0], : plane.shape[1]] = plane
    return padded.reshape(grid_h, n, grid_w, n).swapaxes(1, 2)


def _from_blocks(blocks: np.ndarray, height: int, width: int) -> np.ndarray:
    grid_h, grid_w, n, _ = blocks.shape
    return blocks.swapaxes(1, 2).reshape(grid_h * n, grid_w * n)[:height, :width]


def _simulate_channel(
    plane: np.ndarray,
    qsteps: np.ndarray,
    thresholds: np.ndarray,
    qps: np.ndarray,
    cfg: SimConfig,
    max_value: int,
) -> Tuple[_ChannelTally, np.ndarray]:
    n = cfg.block_size
    grid_h, grid_w = qsteps.shape
    height, width = plane.shape

    coef = dct2_forward(_to_blocks(plane, n, grid_h, grid_w))
    step = qsteps[:, :, None, None]
    levels = quantize(coef, step, cfg.rounding_offset)
    rec_coef = coef if cfg.bypass_quantization else dequantize(levels, step)
    recon = np.clip(np.rint(_from_blocks(dct2_inverse(rec_coef), height, width)), 0, max_value)

    error = recon - plane.astype(np.float64)
    abs_error = np.abs(error)
    limit = np.repeat(np.repeat(thresholds, n, axis=0), n, axis=1)[:height, :width]
    values, counts = np.unique(levels, return_counts=True)

    tally = _ChannelTally(
        bits=rate_estimate(levels),
        coefficients=int(levels.size),
        samples=int(plane.size),
        violations=int(np.count_nonzero(abs_error > limit)),
        squared_error=float(np.sum(np.square(error))),
        max_abs_error=float(abs_error.max()) if abs_error.size else 0.0,
        qp_sum=int(qps.sum()),
        blocks=int(qps.size),
        histogram=Counter(dict(zip(values.tolist(), counts.tolist()))),
    )
    return tally, recon.astype(np.uint16)


def _simulate_frame(
    index: int,
    frame: VideoFrame,
    cfg: SimConfig,
    params: MaskingParams,
    qp_cfg: QpConfig,
) -> _FrameResult:
    qp_map = analyze_frame(frame, cfg.block_size, params, qp_cfg, cfg.model, frame_index=index)
    tallies: Dict[str, _ChannelTally] = {}
    planes: Dict[str, np.ndarray] = {}
    for channel in CHANNELS:
        qps = qp_map.qp_grid(channel)
        qsteps = np.vectorize(lambda q: qstep_from_qp(int(q), qp_cfg), otypes=[np.float64])(qps)
        tallies[channel], planes[channel] = _simulate_channel(
            frame.plane(channel),
            qsteps,
            qp_map.threshold_grid(channel),
            qps,
            cfg,
            frame.max_value,
        )
    recon = VideoFrame.from_planes(planes["y"], planes["cb"], planes["cr"], frame.bit_depth)
    return _FrameResult(qp_map=qp_map, tallies=tallies, reconstructed=recon)


def _check_frames(frames: Sequence[VideoFrame], cfg: SimConfig) -> None:
    for index, frame in enumerate(frames):
        if frame.bit_depth != cfg.bit_depth:
            raise VideoFormatError(
                f"Frame {index} has bit depth {frame.bit_depth}, expected {cfg.bit_depth}",
                frame_index=index,
            )
        if (frame.width, frame.height) != (frames[0].width, frames[0].height):
            raise VideoFormatError(
                f"Frame {index} is {frame.width}x{frame.height}, "
                f"expected {frames[0].width}x{frames[0].height}",
                frame_index=index,
            )


def _channel_report(channel: str, tally: _ChannelTally, bit_depth: int) -> ChannelReport:
    channel_mse = tally.squared_error / tally.samples if tally.samples else 0.0
    return ChannelReport(
        channel=channel,
        estimated_bits=tally.bits,
        coefficient_count=tally.coefficients,
        sample_count=tally.samples,
        violation_count=tally.violations,
        jnd_violation_fraction=tally.violations / tally.samples if tally.samples else 0.0,
        max_abs_error=tally.max_abs_error,
        mse=channel_mse,
        psnr_db=psnr_from_mse(channel_mse, bit_depth),
        level_entropy_bits=_entropy_from_counts(
            [tally.histogram[k] for k in sorted(tally.histogram)]
        ),
        mean_qp=tally.qp_sum / tally.blocks if tally.blocks else 0.0,
    )


def run_simulation(
    frames: Sequence[VideoFrame],
    cfg: SimConfig,
    params: MaskingParams = DEFAULT_PARAMS,
    workers: int = 1,
) -> SimulationRun:
    """Simulate coding *frames* and keep the reconstruction.

    Frames may be processed on several threads; results are reduced in frame
    order, so the report is identical for any worker count.
    """
    frames = list(frames)
    _check_frames(frames, cfg)
    qp_cfg = cfg.qp_config()

    def _run(indexed):
        index, frame = indexed
        return _simulate_frame(index, frame, cfg, params, qp_cfg)

    if workers <= 1 or len(frames) <= 1:
        results = [_run(item) for item in enumerate(frames)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run, enumerate(frames)))

    totals = {channel: _ChannelTally() for channel in CHANNELS}
    for result in results:
        for channel in CHANNELS:
            totals[channel].merge(result.tallies[channel])

    channels = {c: _channel_report(c, totals[c], cfg.bit_depth) for c in CHANNELS}
    report = SimReport(
        config=cfg,
        frame_count=len(frames),
        channels=channels,
        total_bits=sum(r.estimated_bits for r in channels.values()),
        visually_lossless=all(r.violation_count == 0 for r in channels.values()),
        qp_maps=[r.qp_map for r in results],
    )
    logger.info(
        f"Simulated {len(frames)} frame(s) at QP {cfg.base_qp} with model={cfg.model.value}: "
        f"bits Y/Cb/Cr = {channels['y'].estimated_bits}/"
        f"{channels['cb'].estimated_bits}/{channels['cr'].estimated_bits}"
    )
    return SimulationRun(report=report, reconstructed=[r.reconstructed for r in results])


def simulate(
    frames: Sequence[VideoFrame],
    cfg: SimConfig,
    params: MaskingParams = DEFAULT_PARAMS,
    workers: int = 1,
) -> SimReport:
    """Rate, PSNR and JND-violation statistics of coding *frames* under *cfg*."""
    return run_simulation(frames, cfg, params, workers).report


# ── Comparison ───────────────────────────────────────────────────────────────

def rate_delta_pct(bits_model: int, bits_anchor: int) -> float:
    """Percent rate change versus the anchor; negative means a reduction."""
    if bits_anchor == 0:
        return 0.0
    return 100.0 * (bits_model - bits_anchor) / bits_anchor


def _psnr_delta(model_db: float, anchor_db: float) -> float:
    if math.isinf(model_db) and math.isinf(anchor_db):
        return 0.0
    return model_db - anchor_db


def _overall(report: SimReport) -> Tuple[int, float]:
    samples = sum(r.sample_count for r in report.channels.values())
    squared = sum(r.mse * r.sample_count for r in report.channels.values())
    value = squared / samples if samples else 0.0
    return report.total_bits, psnr_from_mse(value, report.config.bit_depth)


def compare_reports(model: SimReport, anchor: SimReport) -> Dict[str, Dict[str, float]]:
    """Per-channel (and ``total``) rate delta in percent and PSNR delta in dB."""
    comparison: Dict[str, Dict[str, float]] = {}
    for channel in CHANNELS:
        m, a = model.channel(channel), anchor.channel(channel)
        comparison[channel] = {
            "rate_delta_pct": rate_delta_pct(m.estimated_bits, a.estimated_bits),
            "psnr_delta_db": _psnr_delta(m.psnr_db, a.psnr_db),
        }
    (m_bits, m_db), (a_bits, a_db) = _overall(model), _overall(anchor)
    comparison["total"] = {
        "rate_delta_pct": rate_delta_pct(m_bits, a_bits),
        "psnr_delta_db": _psnr_delta(m_db, a_db),
    }
    return comparison


SUMMARY_COLUMNS = [
    "qp",
    "channel",
    "bits_model",
    "bits_none",
    "rate_delta_none_pct",
    "psnr_delta_none_db",
    "bits_idsq",
    "rate_delta_idsq_pct",
    "psnr_delta_idsq_db",
]


def _bits(report: SimReport, channel: str) -> int:
    return report.total_bits if channel == "total" else report.channel(channel).estimated_bits


def build_summary(
    reports: Mapping[int, Mapping[MaskingModel, SimReport]],
    model: Union[MaskingModel, str],
) -> pd.DataFrame:
    """Rate-delta table of *model* against the ``none`` and ``idsq`` anchors.

    *reports* maps each base QP to the reports of every model run at that QP.
    One row per QP and channel, followed by ``avg`` rows averaged over QPs.
    """
    model = MaskingModel(model)
    rows = []
    for qp in sorted(reports):
        by_model = reports[qp]
        subject = by_model[model]
        vs_none = compare_reports(subject, by_model[MaskingModel.NONE])
        vs_idsq = compare_reports(subject, by_model[MaskingModel.IDSQ])
        for channel in (*CHANNELS, "total"):
            rows.append({
                "qp": str(qp),
                "channel": channel,
                "bits_model": _bits(subject, channel),
                "bits_none": _bits(by_model[MaskingModel.NONE], channel),
                "rate_delta_none_pct": vs_none[channel]["rate_delta_pct"],
                "psnr_delta_none_db": vs_none[channel]["psnr_delta_db"],
                "bits_idsq": _bits(by_model[MaskingModel.IDSQ], channel),
                "rate_delta_idsq_pct": vs_idsq[channel]["rate_delta_pct"],
                "psnr_delta_idsq_db": vs_idsq[channel]["psnr_delta_db"],
            })
    table = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    if table.empty:
        return table

    numeric = SUMMARY_COLUMNS[2:]
    averages = table.groupby("channel", sort=False)[numeric].mean().reset_index()
    averages.insert(0, "qp", "avg")
    return pd.concat([table, averages[SUMMARY_COLUMNS]], ignore_index=True)
