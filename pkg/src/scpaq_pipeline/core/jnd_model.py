"""
Luminance and chrominance JND visibility thresholds.

All functions are pure. Thresholds are real-valued multipliers of the
quantization step; rounding to the nearest integer happens in ``qp_mapping``.
"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..data.models import SUPPORTED_BIT_DEPTHS, BlockStats, Component, MaskingParams
from ..errors import DomainError, PartitionError

DEFAULT_PARAMS = MaskingParams()

Number = Union[int, float]


def _check_bit_depth(bit_depth: int) -> None:
    if bit_depth not in SUPPORTED_BIT_DEPTHS:
        raise DomainError(
            f"Bit depth must be one of {list(SUPPORTED_BIT_DEPTHS)}, got {bit_depth}"
        )


def _check_mean(mu: Number, bit_depth: int) -> None:
    _check_bit_depth(bit_depth)
    max_value = (1 << bit_depth) - 1
    if not 0 <= mu <= max_value:
        raise DomainError(f"Mean sample value {mu} outside [0, {max_value}] for b={bit_depth}")


def block_mean(samples: Union[Sequence[Number], np.ndarray], bit_depth: Optional[int] = None) -> float:
    """Arithmetic mean of a block's raw samples.

    The divisor is the actual sample count, so truncated edge blocks are
    averaged over the samples they really contain.

    Args:
        samples: Block samples in any shape.
        bit_depth: When given, every sample must lie in ``[0, 2^b - 1]``.

    Raises:
        PartitionError: The block is empty.
        DomainError: A sample is outside the bit-depth range.
    """
    values = np.asarray(samples, dtype=np.float64)
    if values.size == 0:
        raise PartitionError("Cannot take the mean of an empty block")
    if bit_depth is not None:
        _check_bit_depth(bit_depth)
        if values.min() < 0 or values.max() > (1 << bit_depth) - 1:
            raise DomainError(f"Block samples outside [0, {(1 << bit_depth) - 1}]")
    return float(values.sum() / values.size)


def luma_threshold(mu: Number, bit_depth: int, params: MaskingParams = DEFAULT_PARAMS) -> float:
    """Luminance masking threshold L(mu).

    A parabola falling from ``a + 1`` at black to exactly 1 at mid-grey
    ``2^(b-1)``, then rising to roughly ``c + 1`` at peak white. The curve
    is a function of ``2*mu / 2^b`` only, so its shape is identical for
    every bit depth.
    """
    _check_mean(mu, bit_depth)
    x = 2.0 * mu / float(1 << bit_depth)
    if x <= 1.0:
        return params.a * (1.0 - x) ** params.d + 1.0
    return params.c * (x - 1.0) ** params.f + 1.0


def chroma_threshold(mu: Number, bit_depth: int, params: MaskingParams = DEFAULT_PARAMS) -> float:
    """Chrominance masking threshold C(mu), shared by Cb and Cr.

    Piecewise linear: ``g`` at zero falling to 1 at ``h``, flat at 1 on
    ``(h, j)``, rising to ``k`` at ``2^b - 1``.
    """
    _check_mean(mu, bit_depth)
    h, j = params.breakpoints(bit_depth)
    max_value = (1 << bit_depth) - 1
    if not j < max_value:
        raise DomainError(f"Upper chroma breakpoint {j} must lie below {max_value}")
    if mu <= h:
        return -mu * (params.g - 1.0) / h + params.g
    if mu < j:
        return 1.0
    return (mu - j) * (params.k - 1.0) / (max_value - j) + 1.0


def threshold(
    component: Union[Component, str],
    mu: Number,
    bit_depth: int,
    params: MaskingParams = DEFAULT_PARAMS,
) -> float:
    """Dispatch to the luma or chroma threshold by component name."""
    if Component(component) is Component.Y:
        return luma_threshold(mu, bit_depth, params)
    return chroma_threshold(mu, bit_depth, params)


def block_stats(
    y: np.ndarray,
    cb: np.ndarray,
    cr: np.ndarray,
    bit_depth: int,
    params: MaskingParams = DEFAULT_PARAMS,
) -> BlockStats:
    """Means and thresholds of one co-located Y/Cb/Cr block triple."""
    mu_y = block_mean(y)
    mu_cb = block_mean(cb)
    mu_cr = block_mean(cr)
    return BlockStats(
        mu_y=mu_y,
        mu_cb=mu_cb,
        mu_cr=mu_cr,
        l_y=luma_threshold(mu_y, bit_depth, params),
        c_cb=chroma_threshold(mu_cb, bit_depth, params),
        c_cr=chroma_threshold(mu_cr, bit_depth, params),
        sample_count=int(np.asarray(y).size),
    )


def threshold_curve(
    component: Union[Component, str],
    bit_depth: int,
    params: MaskingParams = DEFAULT_PARAMS,
    step: int = 1,
) -> Tuple[np.ndarray, np.ndarray]:
    """Threshold of *component* sampled at ``0, step, 2*step, ... <= 2^b - 1``."""
    _check_bit_depth(bit_depth)
    if step < 1:
        raise DomainError(f"Curve step must be a positive integer, got {step}")
    mu = np.arange(0, 1 << bit_depth, step, dtype=np.int64)
    values = np.array([threshold(component, int(m), bit_depth, params) for m in mu])
    return mu, values
