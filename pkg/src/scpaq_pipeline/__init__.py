"""
SC-PAQ Pipeline

JND-based perceptual quantization for 4:4:4 YCbCr video: per-block
luminance and chrominance visibility thresholds, perceptual QP maps with
chroma QP offsets, and a transform-quantization simulator that measures rate
and JND-violation statistics against uniform quantization and the luma-only
IDSQ anchor.
"""

__version__ = "1.0.0"


def __getattr__(name):
    """Lazy import to keep package init light."""
    if name in ("simulate", "run_simulation"):
        from .core import codec_sim
        return getattr(codec_sim, name)
    if name in ("analyze_frame", "analyze_sequence"):
        from .core import block_analysis
        return getattr(block_analysis, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = ["simulate", "run_simulation", "analyze_frame", "analyze_sequence"]
