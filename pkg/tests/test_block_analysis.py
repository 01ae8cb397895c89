"""
Tests for frame containers, block partitioning and QP map assembly.
"""

import numpy as np
import pytest

from src.scpaq_pipeline.core.block_analysis import (
    analyze_frame,
    analyze_sequence,
    grid_dimensions,
    partition,
)
from src.scpaq_pipeline.core.jnd_model import DEFAULT_PARAMS
from src.scpaq_pipeline.core.synthetic import generate_clip
from src.scpaq_pipeline.data.frames import VideoFrame
from src.scpaq_pipeline.data.models import MaskingModel, QpConfig
from src.scpaq_pipeline.errors import DomainError, PartitionError, VideoFormatError


def _frame(width, height, value=16, bit_depth=8):
    plane = np.full((height, width), value)
    return VideoFrame.from_planes(plane, plane, plane, bit_depth=bit_depth)


class TestVideoFrame:
    """Test frame validation."""

    def test_from_planes(self):
        frame = _frame(40, 24)
        assert (frame.width, frame.height) == (40, 24)
        assert frame.plane_y.dtype == np.uint16
        assert frame.max_value == 255

    def test_shape_mismatch(self):
        with pytest.raises(VideoFormatError) as exc:
            VideoFrame.from_planes(np.zeros((4, 4)), np.zeros((4, 4)), np.zeros((4, 5)), 8)
        assert exc.value.plane == "cr"

    def test_sample_out_of_range(self):
        y = np.zeros((2, 2), dtype=np.int64)
        cb = y.copy()
        cb[1, 0] = 1024
        with pytest.raises(VideoFormatError) as exc:
            VideoFrame.from_planes(y, cb, y, 10)
        assert exc.value.plane == "cb"
        assert exc.value.offset == 2

    def test_fractional_samples_rejected(self):
        y = np.full((8, 8), 10.0)
        cr = y.copy()
        cr[0, 3] = 10.7
        with pytest.raises(VideoFormatError) as exc:
            VideoFrame.from_planes(y, y, cr, 8)
        assert exc.value.plane == "cr"
        assert exc.value.offset == 3

    def test_nan_samples_rejected(self):
        y = np.zeros((4, 4))
        y[2, 2] = np.nan
        with pytest.raises(VideoFormatError) as exc:
            VideoFrame.from_planes(y, np.zeros((4, 4)), np.zeros((4, 4)), 8)
        assert exc.value.plane == "y"

    def test_integral_float_samples_accepted(self):
        plane = np.full((4, 4), 37.0)
        frame = VideoFrame.from_planes(plane, plane, plane, 8)
        assert frame.plane_y.dtype == np.uint16
        assert np.all(frame.plane_y == 37)

    def test_unsupported_bit_depth(self):
        with pytest.raises(DomainError):
            _frame(4, 4, bit_depth=9)

    def test_equals(self):
        assert _frame(8, 8).equals(_frame(8, 8))
        assert not _frame(8, 8).equals(_frame(8, 8, value=17))


class TestPartition:
    """Test fixed-grid partitioning."""

    def test_grid_dimensions(self):
        assert grid_dimensions(1920, 1080, 16) == (120, 68)
        assert grid_dimensions(64, 64, 16) == (4, 4)

    def test_truncated_edge_blocks(self):
        grid = partition(_frame(40, 24), 16)
        assert (grid.grid_w, grid.grid_h) == (3, 2)
        assert len(grid) == 6
        edge = grid.block(2, 1)
        assert (edge.x0, edge.y0, edge.width, edge.height) == (32, 16, 8, 8)
        assert edge.views["y"].shape == (8, 8)

    def test_row_major_order(self):
        grid = partition(_frame(32, 32), 16)
        assert [(b.bx, b.by) for b in grid] == [(0, 0), (1, 0), (0, 1), (1, 1)]

    def test_views_share_memory(self):
        frame = _frame(16, 16)
        grid = partition(frame, 8)
        assert np.shares_memory(grid.block(1, 1).views["cb"], frame.plane_cb)

    def test_block_larger_than_frame(self):
        grid = partition(_frame(8, 8), 16)
        assert len(grid) == 1
        assert grid.block(0, 0).sample_count == 64

    def test_edge_blocks_of_70_by_70(self):
        grid = partition(_frame(70, 70), 16)
        assert grid.shape == (5, 5)
        assert [grid.block(bx, 0).width for bx in range(5)] == [16, 16, 16, 16, 6]
        assert [grid.block(0, by).height for by in range(5)] == [16, 16, 16, 16, 6]
        assert grid.block(4, 4).sample_count == 36

    @pytest.mark.parametrize("width,height,n", [(70, 70, 16), (33, 17, 8), (64, 48, 32), (5, 9, 8)])
    def test_every_pixel_visited_once(self, width, height, n):
        visits = np.zeros((height, width), dtype=np.int64)
        for block in partition(_frame(width, height), n):
            visits[block.y0:block.y0 + block.height, block.x0:block.x0 + block.width] += 1
            assert block.views["y"].shape == (block.height, block.width)
        assert np.all(visits == 1)

    @pytest.mark.parametrize("n", [0, 12, 128])
    def test_unsupported_block_size(self, n):
        with pytest.raises(PartitionError):
            partition(_frame(16, 16), n)


class TestAnalyzeFrame:
    """Test per-frame QP maps."""

    def test_dark_frame_map(self):
        qp_map = analyze_frame(_frame(64, 64), 16, DEFAULT_PARAMS, QpConfig(base_qp=22))
        assert (qp_map.grid_w, qp_map.grid_h) == (4, 4)
        assert np.all(qp_map.qp_grid("y") == 28)
        assert np.all(qp_map.qp_grid("cb") == 32)
        assert np.all(qp_map.qp_grid("cr") == 32)
        assert qp_map.raised_fraction("cb") == 1.0

    def test_midgrey_frame_map(self):
        qp_map = analyze_frame(_frame(32, 32, value=128), 16, DEFAULT_PARAMS, QpConfig(base_qp=22))
        assert qp_map.mean_qp("y") == 22.0
        assert qp_map.raised_fraction("y") == 0.0

    def test_partial_block_mean(self):
        y = np.zeros((16, 24), dtype=np.int64)
        y[:, 16:] = 200
        frame = VideoFrame.from_planes(y, y, y, 8)
        qp_map = analyze_frame(frame, 16, DEFAULT_PARAMS, QpConfig(base_qp=22))
        assert qp_map.cell(1, 0).stats.mu_y == 200.0
        assert qp_map.cell(1, 0).stats.sample_count == 128

    def test_model_none(self):
        qp_map = analyze_frame(_frame(32, 32), 16, DEFAULT_PARAMS, QpConfig(base_qp=32), MaskingModel.NONE)
        for cell in qp_map.iter_cells():
            assert (cell.qp.pqp_y, cell.qp.pqp_cb, cell.qp.pqp_cr) == (32, 32, 32)

    @pytest.mark.parametrize("model", [MaskingModel.SCPAQ, MaskingModel.IDSQ])
    @pytest.mark.parametrize("bit_depth", [8, 10])
    def test_perceptual_qp_never_below_base(self, model, bit_depth):
        rng = np.random.default_rng(bit_depth)
        for _ in range(6):
            y, cb, cr = rng.integers(0, 1 << bit_depth, size=(3, 40, 56))
            frame = VideoFrame.from_planes(y, cb, cr, bit_depth)
            for base_qp in (0, 22, 37, 51):
                qp_map = analyze_frame(frame, 16, DEFAULT_PARAMS, QpConfig(base_qp=base_qp), model)
                for channel in ("y", "cb", "cr"):
                    assert qp_map.qp_grid(channel).min() >= base_qp

    def test_record_keys(self):
        qp_map = analyze_frame(_frame(16, 16), 16, DEFAULT_PARAMS, QpConfig(base_qp=22))
        record = qp_map.cell(0, 0).to_record()
        assert list(record) == [
            "bx", "by", "mu_y", "mu_cb", "mu_cr", "l", "c_cb", "c_cr",
            "pqp_y", "pqp_cb", "pqp_cr",
            "oqp_cb_literal", "oqp_cb_delta", "oqp_cr_literal", "oqp_cr_delta",
        ]


class TestAnalyzeSequence:
    """Test multi-frame analysis."""

    def test_order_preserved_across_workers(self):
        frames = [_frame(32, 32, value=v) for v in (16, 128, 240, 64, 30)]
        cfg = QpConfig(base_qp=27)
        serial = analyze_sequence(frames, 16, DEFAULT_PARAMS, cfg, workers=1)
        threaded = analyze_sequence(frames, 16, DEFAULT_PARAMS, cfg, workers=4)
        assert [m.frame_index for m in threaded] == [0, 1, 2, 3, 4]
        assert [m.model_dump() for m in serial] == [m.model_dump() for m in threaded]

    def test_synthetic_clip(self):
        clip = generate_clip("dark-bright", 128, 64, frames=2, seed=3)
        maps = analyze_sequence(clip, 16, DEFAULT_PARAMS, QpConfig(base_qp=22))
        assert len(maps) == 2
        assert np.all(maps[0].qp_grid("y") == 28)
        assert np.all(maps[0].qp_grid("cb") == 32)
