"""
End-to-end checks of the rate savings and determinism of perceptual
quantization on a synthetic dark/bright screen-content clip.
"""

import math

import numpy as np
import pytest
from click.testing import CliRunner

from src.scpaq_pipeline.cli import cli
from src.scpaq_pipeline.core.block_analysis import analyze_frame
from src.scpaq_pipeline.core.codec_sim import compare_reports, dequantize, psnr, quantize, simulate
from src.scpaq_pipeline.core.jnd_model import DEFAULT_PARAMS, block_mean, chroma_threshold, luma_threshold
from src.scpaq_pipeline.core.qp_mapping import qp_from_step
from src.scpaq_pipeline.core.synthetic import generate_clip
from src.scpaq_pipeline.data.models import EVALUATION_QPS, MaskingModel, QpConfig, SimConfig


@pytest.fixture(scope="module")
def clip():
    return generate_clip("dark-bright", 256, 256, frames=10, seed=0)


@pytest.fixture(scope="module")
def reports(clip):
    return {
        qp: {model: simulate(clip, SimConfig(base_qp=qp, model=model), workers=4) for model in MaskingModel}
        for qp in EVALUATION_QPS
    }


@pytest.mark.slow
@pytest.mark.integration
class TestRateReduction:
    """SC-PAQ against the uniform and luma-only anchors."""

    @pytest.mark.parametrize("qp", EVALUATION_QPS)
    def test_chroma_cheaper_than_luma_only(self, reports, qp):
        scpaq, idsq = reports[qp][MaskingModel.SCPAQ], reports[qp][MaskingModel.IDSQ]
        assert scpaq.channel("y").estimated_bits == idsq.channel("y").estimated_bits
        assert scpaq.channel("cb").estimated_bits < idsq.channel("cb").estimated_bits
        assert scpaq.channel("cr").estimated_bits < idsq.channel("cr").estimated_bits
        assert scpaq.total_bits < idsq.total_bits

    @pytest.mark.parametrize("qp", EVALUATION_QPS)
    def test_luma_only_never_costs_more(self, reports, qp):
        idsq, none = reports[qp][MaskingModel.IDSQ], reports[qp][MaskingModel.NONE]
        for channel in ("y", "cb", "cr"):
            assert idsq.channel(channel).estimated_bits <= none.channel(channel).estimated_bits
        assert compare_reports(idsq, none)["total"]["rate_delta_pct"] < 0

    @pytest.mark.parametrize("qp", EVALUATION_QPS)
    def test_chroma_saves_at_least_as_much_as_luma(self, reports, qp):
        comparison = compare_reports(reports[qp][MaskingModel.SCPAQ], reports[qp][MaskingModel.NONE])
        assert comparison["y"]["rate_delta_pct"] < 0
        assert comparison["cb"]["rate_delta_pct"] <= comparison["y"]["rate_delta_pct"]
        assert comparison["cr"]["rate_delta_pct"] <= comparison["y"]["rate_delta_pct"]

    def test_idsq_keeps_chroma_at_base_qp(self, reports):
        for qp in EVALUATION_QPS:
            for qp_map in reports[qp][MaskingModel.IDSQ].qp_maps:
                assert np.all(qp_map.qp_grid("cb") == qp)
                assert np.all(qp_map.qp_grid("cr") == qp)

    def test_chroma_delta_against_anchor(self, reports):
        for qp in EVALUATION_QPS:
            comparison = compare_reports(reports[qp][MaskingModel.SCPAQ], reports[qp][MaskingModel.IDSQ])
            assert comparison["y"]["rate_delta_pct"] == 0.0
            assert comparison["cb"]["rate_delta_pct"] < 0
            assert comparison["cr"]["rate_delta_pct"] < 0


@pytest.mark.integration
class TestHandComputedMaps:
    """Constant frames whose QP maps can be worked out by hand."""

    def test_dark_frame(self):
        frame = generate_clip("flat", 64, 64, value=16)[0]
        qp_map = analyze_frame(frame, 16, DEFAULT_PARAMS, QpConfig(base_qp=22))
        assert np.all(qp_map.qp_grid("y") == 28)
        assert np.all(qp_map.qp_grid("cb") == 32)
        assert np.all(qp_map.qp_grid("cr") == 32)

    def test_midgrey_frame(self):
        frame = generate_clip("flat", 64, 64, value=128)[0]
        qp_map = analyze_frame(frame, 16, DEFAULT_PARAMS, QpConfig(base_qp=22))
        for channel in ("y", "cb", "cr"):
            assert np.all(qp_map.qp_grid(channel) == 22)


@pytest.mark.integration
class TestDeterminism:
    """Identical artifacts for any thread count."""

    def test_reports_byte_identical(self, tmp_path):
        runner = CliRunner()
        clip = tmp_path / "clip.yuv"
        result = runner.invoke(cli, ["generate", str(clip), "-W", "128", "-H", "64", "-n", "4", "--seed", "11"])
        assert result.exit_code == 0, result.output

        outputs = []
        for threads in ("1", "8"):
            out = tmp_path / f"threads{threads}"
            result = runner.invoke(cli, [
                "simulate", str(clip), "-W", "128", "-H", "64", "--qp", "22", "--qp", "37",
                "--threads", threads, "-o", str(out),
            ])
            assert result.exit_code == 0, result.output
            outputs.append(out)

        for name in ("report_scpaq_qp22.json", "report_scpaq_qp37.json", "summary_scpaq.csv"):
            assert (outputs[0] / name).read_bytes() == (outputs[1] / name).read_bytes()


@pytest.mark.unit
class TestNumericalOracles:
    """Library results against brute-force evaluation."""

    def test_block_mean_oracle(self):
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(1000):
            bit_depth = int(rng.choice([8, 10]))
            h, w = rng.integers(1, 65, size=2)
            block = rng.integers(0, 1 << bit_depth, size=(h, w))
            total = 0
            for v in block.ravel().tolist():
                total += v
            worst = max(worst, abs(block_mean(block, bit_depth) - total / block.size))
        assert worst < 1e-9

    def test_psnr_oracle(self):
        rng = np.random.default_rng(7)
        for bit_depth in (8, 10):
            peak = (1 << bit_depth) - 1
            for _ in range(20):
                a = rng.integers(0, peak + 1, size=(16, 16))
                b = rng.integers(0, peak + 1, size=(16, 16))
                squared = 0
                for x, y in zip(a.ravel().tolist(), b.ravel().tolist()):
                    squared += (x - y) ** 2
                expected = 10.0 * math.log10(peak * peak / (squared / a.size))
                assert abs(psnr(a, b, bit_depth) - expected) < 1e-9

    @pytest.mark.parametrize("theta", [1.0 / 3.0, 0.5])
    def test_quantizer_error_bound(self, theta):
        rng = np.random.default_rng(11)
        coef = rng.uniform(-2000.0, 2000.0, size=100_000)
        qstep = rng.uniform(0.5, 100.0, size=100_000)
        error = np.abs(coef - dequantize(quantize(coef, qstep, theta), qstep))
        assert np.all(error <= max(theta, 1.0 - theta) * qstep + 1e-9)

    def test_octave_property(self):
        rng = np.random.default_rng(5)
        for step in rng.uniform(0.5, 200.0, size=100):
            assert qp_from_step(2.0 * step) == qp_from_step(step) + 6

    @pytest.mark.parametrize("bit_depth", [8, 10])
    def test_chroma_continuity(self, bit_depth):
        params = DEFAULT_PARAMS
        top = (1 << bit_depth) - 1
        assert chroma_threshold(0, bit_depth) == params.g
        assert chroma_threshold(top, bit_depth) == pytest.approx(params.k, abs=1e-12)
        for mu in (params.h, params.j):
            assert chroma_threshold(mu - 1e-12, bit_depth) == pytest.approx(1.0, abs=1e-12)
            assert chroma_threshold(mu + 1e-12, bit_depth) == pytest.approx(1.0, abs=1e-12)
        assert all(chroma_threshold(mu, bit_depth) == 1.0 for mu in np.linspace(85.5, 89.5, 9))

    @pytest.mark.parametrize("bit_depth", [8, 10])
    def test_luma_endpoints(self, bit_depth):
        assert luma_threshold(0, bit_depth) == pytest.approx(3.0, abs=1e-9)
        assert luma_threshold(1 << (bit_depth - 1), bit_depth) == pytest.approx(1.0, abs=1e-9)
