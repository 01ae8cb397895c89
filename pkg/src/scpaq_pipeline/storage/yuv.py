"""
Raw planar 4:4:4 YCbCr readers and writers.

8-bit samples take one byte; higher bit depths take two little-endian bytes
with the sample in the low bits. Each frame is the Y plane followed by Cb
and Cr, row-major.
"""

from pathlib import Path
from typing import Iterator, List, Sequence

import numpy as np

from ..config.logging import get_logger
from ..data.frames import VideoFrame
from ..data.models import CHANNELS, RawVideoSpec
from ..errors import ArtifactError, VideoFormatError

logger = get_logger(__name__)


def _frames_in_file(spec: RawVideoSpec) -> int:
    path = Path(spec.path)
    if not path.is_file():
        raise VideoFormatError(f"Video file not found: {path}")
    size = path.stat().st_size
    complete, remainder = divmod(size, spec.frame_bytes)

    if spec.frame_count:
        if spec.frame_count > complete:
            raise VideoFormatError(
                f"{path}: frame {complete} is truncated or missing "
                f"({size} bytes, {spec.frame_bytes} per frame, {spec.frame_count} requested)",
                frame_index=complete,
            )
        return spec.frame_count
    if remainder:
        raise VideoFormatError(
            f"{path}: frame {complete} is truncated "
            f"({remainder} of {spec.frame_bytes} bytes present)",
            frame_index=complete,
        )
    return complete


def _check_samples(planes: np.ndarray, spec: RawVideoSpec, frame_index: int) -> None:
    limit = 1 << spec.bit_depth
    if spec.bit_depth == 16 or planes.max(initial=0) < limit:
        return
    for plane_index, name in enumerate(CHANNELS):
        bad = np.flatnonzero(planes[plane_index] >= limit)
        if bad.size:
            offset = int(bad[0])
            raise VideoFormatError(
                f"{spec.path}: frame {frame_index}, plane {name}, offset {offset}: "
                f"sample {int(planes[plane_index].flat[offset])} >= 2^{spec.bit_depth}",
                frame_index=frame_index,
                plane=name,
                offset=offset,
            )


def iter_yuv(spec: RawVideoSpec) -> Iterator[VideoFrame]:
    """Yield the frames of a raw file in file order.

    Raises:
        VideoFormatError: Truncated file or a sample outside the bit depth.
    """
    count = _frames_in_file(spec)
    with open(spec.path, "rb") as fh:
        for index in range(count):
            data = np.frombuffer(fh.read(spec.frame_bytes), dtype=spec.dtype)
            planes = data.reshape(3, spec.height, spec.width)
            _check_samples(planes, spec, index)
            yield VideoFrame(
                width=spec.width,
                height=spec.height,
                bit_depth=spec.bit_depth,
                plane_y=planes[0].astype(np.uint16),
                plane_cb=planes[1].astype(np.uint16),
                plane_cr=planes[2].astype(np.uint16),
            )


def read_yuv(spec: RawVideoSpec) -> List[VideoFrame]:
    """Read every requested frame of a raw file."""
    frames = list(iter_yuv(spec))
    logger.info(
        f"Read {len(frames)} frame(s) of {spec.width}x{spec.height} b={spec.bit_depth} from {spec.path}"
    )
    return frames


def write_yuv(frames: Sequence[VideoFrame], spec: RawVideoSpec) -> Path:
    """Write *frames* in the layout described by *spec*; the inverse of :func:`read_yuv`."""
    path = Path(spec.path)
    chunks = []
    for index, frame in enumerate(frames):
        if (frame.width, frame.height, frame.bit_depth) != (spec.width, spec.height, spec.bit_depth):
            raise VideoFormatError(
                f"Frame {index} is {frame.width}x{frame.height} b={frame.bit_depth}, "
                f"expected {spec.width}x{spec.height} b={spec.bit_depth}",
                frame_index=index,
            )
        for name in CHANNELS:
            chunks.append(np.ascontiguousarray(frame.plane(name), dtype=spec.dtype).tobytes())
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(b"".join(chunks))
    except OSError as e:
        raise ArtifactError(f"Cannot write {path}: {e}") from e
    logger.info(f"Wrote {len(frames)} frame(s) to {path}")
    return path
