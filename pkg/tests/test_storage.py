"""
Tests for raw video I/O and artifact writers.
"""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from src.scpaq_pipeline.core.block_analysis import analyze_sequence
from src.scpaq_pipeline.core.codec_sim import SUMMARY_COLUMNS, build_summary, simulate
from src.scpaq_pipeline.core.jnd_model import DEFAULT_PARAMS
from src.scpaq_pipeline.core.synthetic import generate_clip
from src.scpaq_pipeline.data.models import MaskingModel, QpConfig, RawVideoSpec, SimConfig
from src.scpaq_pipeline.errors import ArtifactError, VideoFormatError
from src.scpaq_pipeline.storage.artifacts import (
    format_real,
    load_artifact,
    write_curve,
    write_qpmap,
    write_report,
    write_summary,
)
from src.scpaq_pipeline.storage.yuv import iter_yuv, read_yuv, write_yuv


def _spec(path, width=8, height=8, bit_depth=8, frame_count=0):
    return RawVideoSpec(path=path, width=width, height=height, bit_depth=bit_depth, frame_count=frame_count)


class TestRawVideoSpec:
    """Test raw layout descriptions."""

    def test_frame_bytes(self, tmp_path):
        assert _spec(tmp_path / "a.yuv").frame_bytes == 192
        assert _spec(tmp_path / "a.yuv", bit_depth=10).frame_bytes == 384

    def test_invalid(self, tmp_path):
        with pytest.raises(ValidationError):
            _spec(tmp_path / "a.yuv", width=0)
        with pytest.raises(ValidationError):
            _spec(tmp_path / "a.yuv", bit_depth=9)


class TestYuv:
    """Test raw planar 4:4:4 reading and writing."""

    def test_write_then_read(self, tmp_path):
        clip = generate_clip("dark-bright", 8, 8, frames=2, seed=1)
        path = write_yuv(clip, _spec(tmp_path / "clip.yuv"))
        assert path.stat().st_size == 384
        frames = read_yuv(_spec(path))
        assert len(frames) == 2
        assert all(a.equals(b) for a, b in zip(clip, frames))

    def test_plane_order(self, tmp_path):
        path = tmp_path / "order.yuv"
        path.write_bytes(bytes([1, 2, 3]))
        frame = read_yuv(_spec(path, width=1, height=1))[0]
        assert (frame.plane_y[0, 0], frame.plane_cb[0, 0], frame.plane_cr[0, 0]) == (1, 2, 3)

    def test_little_endian_words(self, tmp_path):
        path = tmp_path / "le.yuv"
        path.write_bytes(bytes([0x01, 0x02, 0, 0, 0, 0]))
        frame = read_yuv(_spec(path, width=1, height=1, bit_depth=10))[0]
        assert frame.plane_y[0, 0] == 0x0201

    def test_sample_above_bit_depth(self, tmp_path):
        path = tmp_path / "bad.yuv"
        path.write_bytes(bytes([0x00, 0x04, 0, 0, 0, 0]))
        with pytest.raises(VideoFormatError) as exc:
            read_yuv(_spec(path, width=1, height=1, bit_depth=10))
        assert exc.value.plane == "y"
        assert exc.value.offset == 0
        assert exc.value.frame_index == 0

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "short.yuv"
        path.write_bytes(bytes(192 + 10))
        with pytest.raises(VideoFormatError) as exc:
            read_yuv(_spec(path))
        assert exc.value.frame_index == 1

    def test_frame_count(self, tmp_path):
        path = tmp_path / "two.yuv"
        path.write_bytes(bytes(384))
        assert len(read_yuv(_spec(path, frame_count=1))) == 1
        with pytest.raises(VideoFormatError):
            read_yuv(_spec(path, frame_count=3))

    def test_missing_file(self, tmp_path):
        with pytest.raises(VideoFormatError):
            read_yuv(_spec(tmp_path / "missing.yuv"))

    def test_iter_is_lazy(self, tmp_path):
        path = tmp_path / "lazy.yuv"
        path.write_bytes(bytes(192 * 3))
        frames = iter_yuv(_spec(path))
        first = next(frames)
        assert first.width == 8

    def test_write_layout_mismatch(self, tmp_path):
        clip = generate_clip("flat", 8, 8)
        with pytest.raises(VideoFormatError):
            write_yuv(clip, _spec(tmp_path / "x.yuv", width=16))

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yuv"
        path.write_bytes(b"")
        assert read_yuv(_spec(path)) == []

    def test_zero_frames_written(self, tmp_path):
        path = write_yuv([], _spec(tmp_path / "none.yuv"))
        assert path.stat().st_size == 0

    def test_ten_bit_round_trip(self, tmp_path):
        clip = generate_clip("gradient", 16, 8, bit_depth=10)
        spec = _spec(tmp_path / "ten.yuv", width=16, height=8, bit_depth=10)
        write_yuv(clip, spec)
        assert read_yuv(spec)[0].equals(clip[0])


class TestArtifacts:
    """Test sidecar artifact writers."""

    @pytest.fixture
    def qp_maps(self):
        clip = generate_clip("flat", 40, 24, frames=2, value=16)
        return analyze_sequence(clip, 16, DEFAULT_PARAMS, QpConfig(base_qp=22))

    def test_format_real(self):
        assert format_real(1.0 / 3.0) == 0.333333
        assert format_real(float("inf")) == "inf"
        assert format_real(2.0) == 2.0

    def test_qpmap_document(self, qp_maps, tmp_path):
        path = write_qpmap(qp_maps, tmp_path / "map.json", bit_depth=8)
        data = load_artifact(path)
        assert data["artifact_type"] == "QpMap"
        assert data["model"] == "scpaq"
        assert data["offset_mode"] == "delta"
        assert data["block_size"] == 16
        assert len(data["maps"]) == 2
        frame = data["maps"][0]
        assert (frame["grid_w"], frame["grid_h"]) == (3, 2)
        assert len(frame["cells"]) == 6
        cell = frame["cells"][0]
        assert cell["pqp_y"] == 28
        assert cell["pqp_cb"] == 32
        assert cell["oqp_cb_delta"] == 4
        assert cell["oqp_cb_literal"] == 51
        assert cell["l"] == 2.33984

    def test_report_document(self, tmp_path):
        clip = generate_clip("flat", 32, 32, value=128)
        report = simulate(clip, SimConfig(base_qp=22))
        path = write_report(report, tmp_path / "report.json")
        data = load_artifact(path)
        assert data["artifact_type"] == "SimReport"
        assert data["channels"]["y"]["psnr_db"] == "inf"
        assert "channel" not in data["channels"]["y"]
        assert data["totals"] == {"total_bits": report.total_bits, "frame_count": 1}
        assert data["visually_lossless"] is True
        assert data["config"]["model"] == "scpaq"

    def test_output_is_byte_identical(self, tmp_path):
        clip = generate_clip("dark-bright", 64, 32, seed=2)
        cfg = SimConfig(base_qp=27)
        first = write_report(simulate(clip, cfg), tmp_path / "a.json")
        second = write_report(simulate(clip, cfg, workers=3), tmp_path / "b.json")
        assert first.read_bytes() == second.read_bytes()

    def test_curve_table(self, tmp_path):
        path = write_curve("y", 8, DEFAULT_PARAMS, 1, tmp_path / "curve.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "mu,threshold"
        assert len(lines) == 257
        assert lines[1] == "0,3"
        assert lines[129] == "128,1"

    def test_ten_bit_curve(self, tmp_path):
        path = write_curve("y", 10, DEFAULT_PARAMS, 1, tmp_path / "curve10.csv")
        lines = path.read_text().splitlines()
        assert len(lines) == 1025
        assert lines[513] == "512,1"

    def test_summary_table(self, tmp_path):
        clip = generate_clip("dark-bright", 128, 32)
        reports = {22: {m: simulate(clip, SimConfig(base_qp=22, model=m)) for m in MaskingModel}}
        path = write_summary(build_summary(reports, "scpaq"), tmp_path / "summary.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(SUMMARY_COLUMNS)
        assert len(lines) == 1 + 4 + 4
        assert lines[-1].startswith("avg,total,")

    def test_load_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ArtifactError):
            load_artifact(path)

    def test_load_missing(self, tmp_path):
        with pytest.raises(ArtifactError):
            load_artifact(tmp_path / "nothing.json")

    def test_json_ends_with_newline(self, qp_maps, tmp_path):
        path = write_qpmap(qp_maps[0], tmp_path / "one.json")
        text = path.read_text()
        assert text.endswith("}\n")
        assert json.loads(text)["bit_depth"] is None
