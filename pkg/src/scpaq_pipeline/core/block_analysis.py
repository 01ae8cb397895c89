"""
Fixed-grid block partitioning and per-frame QP map assembly.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence, Tuple, Union

from ..config.logging import get_logger
from ..data.frames import Block, BlockGrid, VideoFrame
from ..data.models import (
    CHANNELS,
    SUPPORTED_BLOCK_SIZES,
    MaskingModel,
    MaskingParams,
    QpCell,
    QpConfig,
    QpMap,
)
from ..errors import PartitionError
from .jnd_model import block_stats
from .qp_mapping import derive_block_qp

logger = get_logger(__name__)


def grid_dimensions(width: int, height: int, n: int) -> Tuple[int, int]:
    """Block counts ``(grid_w, grid_h)`` covering a ``width x height`` frame."""
    return -(-width // n), -(-height // n)


def partition(frame: VideoFrame, n: int) -> BlockGrid:
    """Split *frame* into a row-major grid of ``n x n`` blocks.

    Blocks on the right and bottom edges are truncated to the frame bounds.
    The sample views share memory with the frame planes.

    Raises:
        PartitionError: Unsupported block size or zero-sized frame.
    """
    if n not in SUPPORTED_BLOCK_SIZES:
        raise PartitionError(f"Block size must be one of {list(SUPPORTED_BLOCK_SIZES)}, got {n}")
    if frame.width <= 0 or frame.height <= 0:
        raise PartitionError(f"Cannot partition a zero-sized frame {frame.width}x{frame.height}")
    if n > frame.width and n > frame.height:
        logger.warning(
            f"Block size {n} exceeds frame {frame.width}x{frame.height}; using one partial block"
        )

    grid_w, grid_h = grid_dimensions(frame.width, frame.height, n)
    planes = frame.planes
    blocks: List[Block] = []
    for by in range(grid_h):
        y0 = by * n
        y1 = min(y0 + n, frame.height)
        for bx in range(grid_w):
            x0 = bx * n
            x1 = min(x0 + n, frame.width)
            blocks.append(
                Block(
                    bx=bx,
                    by=by,
                    x0=x0,
                    y0=y0,
                    width=x1 - x0,
                    height=y1 - y0,
                    views={name: planes[name][y0:y1, x0:x1] for name in CHANNELS},
                )
            )
    return BlockGrid(block_size=n, grid_w=grid_w, grid_h=grid_h, blocks=blocks)


def analyze_frame(
    frame: VideoFrame,
    n: int,
    params: MaskingParams,
    cfg: QpConfig,
    model: Union[MaskingModel, str] = MaskingModel.SCPAQ,
    frame_index: int = 0,
) -> QpMap:
    """Block statistics and perceptual QPs for every block of *frame*."""
    model = MaskingModel(model)
    grid = partition(frame, n)

    cells: List[List[QpCell]] = []
    for block in grid:
        if block.bx == 0:
            cells.append([])
        stats = block_stats(
            block.views["y"], block.views["cb"], block.views["cr"], frame.bit_depth, params
        )
        cells[-1].append(
            QpCell(bx=block.bx, by=block.by, stats=stats, qp=derive_block_qp(stats, cfg, model))
        )

    qp_map = QpMap(
        frame_index=frame_index,
        block_size=n,
        grid_w=grid.grid_w,
        grid_h=grid.grid_h,
        base_qp=cfg.base_qp,
        model=model,
        offset_mode=cfg.offset_mode,
        cells=cells,
    )
    logger.debug(
        f"Frame {frame_index}: {grid.grid_w}x{grid.grid_h} blocks, "
        f"mean PQP Y/Cb/Cr = {qp_map.mean_qp('y'):.2f}/"
        f"{qp_map.mean_qp('cb'):.2f}/{qp_map.mean_qp('cr'):.2f}"
    )
    return qp_map


def analyze_sequence(
    frames: Sequence[VideoFrame],
    n: int,
    params: MaskingParams,
    cfg: QpConfig,
    model: Union[MaskingModel, str] = MaskingModel.SCPAQ,
    workers: int = 1,
) -> List[QpMap]:
    """QP maps for every frame, in frame order regardless of *workers*."""
    def _analyze(indexed):
        index, frame = indexed
        return analyze_frame(frame, n, params, cfg, model, frame_index=index)

    if workers <= 1 or len(frames) <= 1:
        maps = [_analyze(item) for item in enumerate(frames)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            maps = list(pool.map(_analyze, enumerate(frames)))
    logger.info(f"Analyzed {len(maps)} frame(s) with model={MaskingModel(model).value}, N={n}")
    return maps
