"""
QP <-> QStep conversion, perceptual step scaling and chroma QP offsets.
"""

import math
from typing import Optional, Tuple, Union

from ..data.models import (
    BlockQp,
    BlockStats,
    MaskingModel,
    OffsetMode,
    QpConfig,
)
from ..errors import DomainError

QP_MIN = 0
QP_MAX = 51


def round_half_away(x: float) -> int:
    """Nearest integer, halves rounded away from zero."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def clamp_qp(qp: int, cfg: Optional[QpConfig] = None) -> int:
    low, high = (cfg.qp_min, cfg.qp_max) if cfg else (QP_MIN, QP_MAX)
    return max(low, min(high, qp))


def qstep_from_qp(qp: int, cfg: Optional[QpConfig] = None) -> float:
    """Quantization step of *qp*: ``2^((qp - 4) / 6)``, doubling every 6 QP.

    Raises:
        DomainError: *qp* lies outside the clamp range.
    """
    low, high = (cfg.qp_min, cfg.qp_max) if cfg else (QP_MIN, QP_MAX)
    if not low <= qp <= high:
        raise DomainError(f"QP {qp} outside [{low}, {high}]")
    return 2.0 ** ((qp - 4) / 6.0)


def perceptual_step(qstep: float, threshold: float) -> float:
    """Scale *qstep* by the threshold rounded to the nearest integer."""
    if qstep <= 0:
        raise DomainError(f"QStep must be positive, got {qstep}")
    if threshold < 1:
        raise DomainError(f"Threshold must be >= 1, got {threshold}")
    return qstep * round_half_away(threshold)


def qp_from_step(step: float) -> int:
    """Unclamped QP of a step size: ``[6 * log2(step)] + 4``.

    :func:`qp_pair_from_step` also returns the value clamped to a
    :class:`QpConfig` range.
    """
    if step <= 0:
        raise DomainError(f"Step size must be positive, got {step}")
    return round_half_away(6.0 * math.log2(step)) + 4


def qp_pair_from_step(step: float, cfg: Optional[QpConfig] = None) -> Tuple[int, int]:
    """QP of a step size as ``(unclamped, clamped)``, clamped to the range of *cfg*."""
    raw = qp_from_step(step)
    return raw, clamp_qp(raw, cfg)


def perceptual_chroma_qp(qstep_c: float, threshold_c: float) -> int:
    """Unclamped perceptual chroma QP from the chroma step and threshold."""
    return qp_from_step(perceptual_step(qstep_c, threshold_c))


def chroma_offset(
    pqp_y: int,
    pqp_c: int,
    mode: Union[OffsetMode, str] = OffsetMode.DELTA,
    cfg: Optional[QpConfig] = None,
) -> int:
    """Chroma QP offset of a block.

    ``literal`` sums the two QPs and clamps the result; ``delta`` returns the
    unclamped difference so that ``pqp_y + offset == pqp_c``.
    """
    if OffsetMode(mode) is OffsetMode.LITERAL:
        return clamp_qp(pqp_y + pqp_c, cfg)
    return pqp_c - pqp_y


def derive_block_qp(
    stats: BlockStats,
    cfg: QpConfig,
    model: Union[MaskingModel, str] = MaskingModel.SCPAQ,
) -> BlockQp:
    """Perceptual QPs and chroma offsets of one block under *model*.

    ``none`` keeps the base QP everywhere, ``idsq`` scales only the luma step
    and ``scpaq`` scales luma and both chroma steps. Chroma steps start from
    the base QStep, without a chroma QP mapping table.
    """
    model = MaskingModel(model)
    qstep = qstep_from_qp(cfg.base_qp, cfg)

    l_y = stats.l_y if model is not MaskingModel.NONE else 1.0
    c_cb, c_cr = (stats.c_cb, stats.c_cr) if model is MaskingModel.SCPAQ else (1.0, 1.0)

    pstep_y = perceptual_step(qstep, l_y)
    raw_y, pqp_y = qp_pair_from_step(pstep_y, cfg)
    raw_cb, pqp_cb = qp_pair_from_step(perceptual_step(qstep, c_cb), cfg)
    raw_cr, pqp_cr = qp_pair_from_step(perceptual_step(qstep, c_cr), cfg)

    literal_cb = chroma_offset(pqp_y, pqp_cb, OffsetMode.LITERAL, cfg)
    literal_cr = chroma_offset(pqp_y, pqp_cr, OffsetMode.LITERAL, cfg)
    delta_cb = chroma_offset(pqp_y, pqp_cb, OffsetMode.DELTA, cfg)
    delta_cr = chroma_offset(pqp_y, pqp_cr, OffsetMode.DELTA, cfg)
    use_literal = cfg.offset_mode is OffsetMode.LITERAL

    return BlockQp(
        pstep_y=pstep_y,
        pqp_y=pqp_y,
        pqp_cb=pqp_cb,
        pqp_cr=pqp_cr,
        oqp_cb=literal_cb if use_literal else delta_cb,
        oqp_cr=literal_cr if use_literal else delta_cr,
        oqp_cb_literal=literal_cb,
        oqp_cb_delta=delta_cb,
        oqp_cr_literal=literal_cr,
        oqp_cr_delta=delta_cr,
        raw_pqp_y=raw_y,
        raw_pqp_cb=raw_cb,
        raw_pqp_cr=raw_cr,
    )
