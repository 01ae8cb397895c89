"""
Command-line interface for the SC-PAQ pipeline.
"""

import functools
import json
import math
import sys
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import click
from pydantic import ValidationError

from . import __version__
from .config.logging import get_logger, setup_logging
from .config.settings import resolve_workers, settings
from .core.block_analysis import analyze_sequence
from .core.codec_sim import build_summary, mse, psnr_from_mse, run_simulation
from .core.synthetic import Pattern, generate_clip
from .data.frames import VideoFrame
from .data.models import (
    CHANNELS,
    EVALUATION_QPS,
    SUPPORTED_BIT_DEPTHS,
    SUPPORTED_BLOCK_SIZES,
    Component,
    MaskingModel,
    MaskingParams,
    OffsetMode,
    QpConfig,
    RawVideoSpec,
    SimConfig,
    SimReport,
)
from .errors import ScpaqError, VideoFormatError
from .storage.artifacts import (
    FLOAT_FORMAT,
    write_curve,
    write_qpmap,
    write_report,
    write_summary,
)
from .storage.yuv import read_yuv, write_yuv
from .utils.contract_validator import validate_artifact_file

logger = get_logger(__name__)

_BIT_DEPTH_CHOICES = [str(b) for b in SUPPORTED_BIT_DEPTHS]
_BLOCK_SIZE_CHOICES = [str(n) for n in SUPPORTED_BLOCK_SIZES]
_MODEL_CHOICES = [m.value for m in MaskingModel]


def parse_params(ctx, param, value: Optional[str]) -> MaskingParams:
    """Masking parameter overrides from a JSON file or ``key=value,...`` pairs."""
    overrides: Dict[str, object] = {}
    if value:
        path = Path(value)
        try:
            if path.is_file():
                overrides = json.loads(path.read_text(encoding="utf-8"))
                if not isinstance(overrides, dict):
                    raise click.BadParameter("JSON parameter file must hold an object")
            else:
                for item in value.split(","):
                    key, sep, raw = item.partition("=")
                    if not sep:
                        raise click.BadParameter(f"Expected key=value, got '{item}'")
                    overrides[key.strip()] = float(raw)
        except (ValueError, OSError) as e:
            raise click.BadParameter(str(e)) from e
    unknown = set(overrides) - set(MaskingParams.model_fields)
    if unknown:
        raise click.BadParameter(f"Unknown masking parameter(s): {', '.join(sorted(unknown))}")
    overrides.setdefault("scale_breakpoints", settings.scale_chroma_breakpoints)
    try:
        return MaskingParams(**overrides)
    except ValidationError as e:
        raise click.BadParameter(str(e)) from e


def _check_params_fit(params: MaskingParams, bit_depths: Sequence[int]) -> None:
    """Reject masking parameters whose chroma breakpoints do not fit a bit depth."""
    for bit_depth in bit_depths:
        _, j = params.breakpoints(bit_depth)
        max_value = (1 << bit_depth) - 1
        if not j < max_value:
            raise click.BadParameter(
                f"upper chroma breakpoint j={j:g} must lie below {max_value} at b={bit_depth}",
                param_hint="'--params'",
            )


def _runtime_errors(func):
    """Turn runtime failures into exit code 1 with the message on stderr."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ScpaqError, OSError, ValidationError) as e:
            logger.error(f"{func.__name__} failed: {e}")
            click.echo(f"Error: {e}", err=True)
            sys.exit(1)
    return wrapper


def _video_options(func):
    options = [
        click.option("--width", "-W", type=click.IntRange(min=1), required=True, help="Frame width"),
        click.option("--height", "-H", type=click.IntRange(min=1), required=True, help="Frame height"),
        click.option("--bit-depth", "-b", type=click.Choice(_BIT_DEPTH_CHOICES), default="8",
                     show_default=True, help="Sample bit depth"),
        click.option("--frames", "-n", "frame_count", type=click.IntRange(min=0), default=0,
                     help="Frames to read (0 = whole file)"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _analysis_options(func):
    options = [
        click.option("--block-size", type=click.Choice(_BLOCK_SIZE_CHOICES),
                     default=lambda: str(settings.block_size), show_default="16",
                     help="Coding block size N"),
        click.option("--qp", "qps", type=click.IntRange(0, 51), multiple=True,
                     help="Base QP (repeatable; default 22 27 32 37)"),
        click.option("--model", type=click.Choice(_MODEL_CHOICES),
                     default=lambda: settings.default_model, show_default="scpaq",
                     help="Perceptual quantization model"),
        click.option("--offset-mode", type=click.Choice([m.value for m in OffsetMode]),
                     default=OffsetMode.DELTA.value, show_default=True,
                     help="Chroma QP offset convention"),
        click.option("--params", "params", callback=parse_params, default=None,
                     help="Masking parameter overrides: JSON file or 'a=2,c=0.8,...'"),
        click.option("--threads", type=click.IntRange(min=0), envvar="SCPAQ_THREADS",
                     default=None, help="Worker cap (0 = auto; env SCPAQ_THREADS)"),
        click.option("--out", "-o", type=click.Path(path_type=Path), default=None,
                     help="Output directory"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _read_input(path: Path, width: int, height: int, bit_depth: str, frame_count: int):
    spec = RawVideoSpec(
        path=path, width=width, height=height, bit_depth=int(bit_depth), frame_count=frame_count
    )
    return spec, read_yuv(spec)


def _output_dir(out: Optional[Path]) -> Path:
    out = out or Path(settings.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _format_db(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


@click.group()
@click.version_option(version=__version__)
@click.option("--log-level", default=None, help="Override SCPAQ_LOG_LEVEL for this run")
def cli(log_level: Optional[str]):
    """SC-PAQ - JND-based perceptual quantization for 4:4:4 YCbCr video."""
    if log_level:
        setup_logging(level=log_level)


@cli.command()
@click.option("--bit-depth", "-b", "bit_depths", type=click.Choice(_BIT_DEPTH_CHOICES),
              multiple=True, help="Bit depth (repeatable; default 8 and 10)")
@click.option("--component", "-c", type=click.Choice([c.value for c in Component] + ["all"]),
              default="all", show_default=True, help="Threshold curve to export")
@click.option("--step", type=click.IntRange(min=1), default=1, show_default=True,
              help="Spacing of mu values")
@click.option("--params", "params", callback=parse_params, default=None,
              help="Masking parameter overrides: JSON file or 'a=2,c=0.8,...'")
@click.option("--plot", is_flag=True, help="Also write a PNG plot per component")
@click.option("--out", "-o", type=click.Path(path_type=Path), default=None,
              help="Output directory")
@_runtime_errors
def curves(bit_depths, component, step, params, plot, out):
    """Export luma/chroma JND threshold curves as CSV tables."""
    depths = [int(b) for b in bit_depths] or [8, 10]
    _check_params_fit(params, depths)
    out = _output_dir(out)
    components = list(Component) if component == "all" else [Component(component)]

    for comp in components:
        for bit_depth in depths:
            path = write_curve(comp, bit_depth, params, step, out / f"curve_{comp.value}_b{bit_depth}.csv")
            click.echo(f"Curve written to: {path}")
        if plot:
            from .visualization.charts import plot_curves

            path = plot_curves(comp, depths, params, out / f"curve_{comp.value}.png")
            click.echo(f"Plot written to: {path}")


@cli.command()
@click.argument("input_path", metavar="INPUT", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_video_options
@_analysis_options
@_runtime_errors
def analyze(input_path, width, height, bit_depth, frame_count, block_size, qps, model,
            offset_mode, params, threads, out):
    """Write a QP map sidecar per frame and base QP.

    INPUT: Raw planar 4:4:4 YCbCr file
    """
    _check_params_fit(params, [int(bit_depth)])
    out = _output_dir(out)
    spec, frames = _read_input(input_path, width, height, bit_depth, frame_count)
    workers = resolve_workers(threads if threads is not None else settings.threads)

    for qp in qps or EVALUATION_QPS:
        cfg = QpConfig(base_qp=qp, offset_mode=OffsetMode(offset_mode))
        maps = analyze_sequence(frames, int(block_size), params, cfg, model, workers=workers)
        for qp_map in maps:
            path = write_qpmap(
                qp_map, out / f"qpmap_{model}_qp{qp}_f{qp_map.frame_index:04d}.json", spec.bit_depth
            )
            click.echo(f"QP map written to: {path}")
        if maps:
            mean = {c: sum(m.mean_qp(c) for m in maps) / len(maps) for c in CHANNELS}
            raised = {c: sum(m.raised_fraction(c) for m in maps) / len(maps) for c in CHANNELS}
            click.echo(
                f"QP {qp}: mean PQP Y={mean['y']:.2f} Cb={mean['cb']:.2f} Cr={mean['cr']:.2f}; "
                f"raised Y={raised['y']:.1%} Cb={raised['cb']:.1%} Cr={raised['cr']:.1%}"
            )


def _simulate_models(
    source: RawVideoSpec,
    frames: Sequence[VideoFrame],
    qp: int,
    model: MaskingModel,
    base: dict,
    params: MaskingParams,
    workers: int,
    recon_dir: Optional[Path],
) -> Dict[MaskingModel, SimReport]:
    reports: Dict[MaskingModel, SimReport] = {}
    for name in (model, MaskingModel.NONE, MaskingModel.IDSQ):
        if name in reports:
            continue
        cfg = SimConfig(base_qp=qp, model=name, **base)
        run = run_simulation(frames, cfg, params, workers=workers)
        reports[name] = run.report
        if recon_dir is not None and name is model:
            write_yuv(
                run.reconstructed,
                source.model_copy(update={"path": recon_dir / f"recon_{model.value}_qp{qp}.yuv"}),
            )
    return reports


@cli.command()
@click.argument("input_path", metavar="INPUT", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_video_options
@_analysis_options
@click.option("--rounding-offset", type=click.FloatRange(0.0, 1.0, max_open=True), default=0.5,
              show_default=True, help="Quantizer rounding offset theta (HM uses 1/3 intra, 1/6 inter)")
@click.option("--recon", is_flag=True, help="Write the reconstruction of the chosen model as YUV")
@click.option("--plot", is_flag=True, help="Also plot per-channel bits over the base QPs as PNG")
@_runtime_errors
def simulate(input_path, width, height, bit_depth, frame_count, block_size, qps, model,
             offset_mode, params, threads, out, rounding_offset, recon, plot):
    """Simulate transform coding and report rate deltas against the anchors.

    INPUT: Raw planar 4:4:4 YCbCr file
    """
    _check_params_fit(params, [int(bit_depth)])
    out = _output_dir(out)
    spec, frames = _read_input(input_path, width, height, bit_depth, frame_count)
    workers = resolve_workers(threads if threads is not None else settings.threads)
    model = MaskingModel(model)
    base = {
        "block_size": int(block_size),
        "rounding_offset": rounding_offset,
        "bit_depth": spec.bit_depth,
        "offset_mode": OffsetMode(offset_mode),
    }

    results: Dict[int, Dict[MaskingModel, SimReport]] = {}
    for qp in qps or EVALUATION_QPS:
        results[qp] = _simulate_models(
            spec, frames, qp, model, base, params, workers, out if recon else None
        )
        path = write_report(results[qp][model], out / f"report_{model.value}_qp{qp}.json")
        click.echo(f"Report written to: {path}")

    table = build_summary(results, model)
    path = write_summary(table, out / f"summary_{model.value}.csv")
    click.echo(f"Summary written to: {path}\n")
    click.echo(table.to_string(index=False, float_format=lambda v: FLOAT_FORMAT % v))
    if plot:
        from .visualization.charts import plot_rate_curves

        path = plot_rate_curves(table, out / f"rates_{model.value}.png", model)
        click.echo(f"\nPlot written to: {path}")


@cli.command()
@click.argument("reference", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("test", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_video_options
@_runtime_errors
def psnr(reference, test, width, height, bit_depth, frame_count):
    """Per-channel PSNR between two raw files, over all frames.

    REFERENCE: Original raw file
    TEST: Reconstructed raw file
    """
    _, ref_frames = _read_input(reference, width, height, bit_depth, frame_count)
    _, test_frames = _read_input(test, width, height, bit_depth, frame_count)
    if len(ref_frames) != len(test_frames):
        raise VideoFormatError(
            f"{reference} has {len(ref_frames)} frame(s), {test} has {len(test_frames)}"
        )

    for channel in CHANNELS:
        if ref_frames:
            channel_mse = sum(
                mse(r.plane(channel), t.plane(channel)) for r, t in zip(ref_frames, test_frames)
            ) / len(ref_frames)
        else:
            channel_mse = 0.0
        value = psnr_from_mse(channel_mse, int(bit_depth))
        click.echo(f"{channel.upper()}: {_format_db(value)} dB")


@cli.command()
@click.argument("output", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--pattern", type=click.Choice([p.value for p in Pattern]), default="dark-bright",
              show_default=True, help="Clip content")
@click.option("--width", "-W", type=click.IntRange(min=1), default=256, show_default=True)
@click.option("--height", "-H", type=click.IntRange(min=1), default=256, show_default=True)
@click.option("--bit-depth", "-b", type=click.Choice(_BIT_DEPTH_CHOICES), default="8", show_default=True)
@click.option("--frames", "-n", "frame_count", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Texture noise seed")
@click.option("--value", "values", type=click.IntRange(min=0), multiple=True,
              help="Flat pattern sample value: once for all planes or three times for Y Cb Cr")
@click.option("--noise", type=click.IntRange(min=0), default=12, show_default=True,
              help="Texture amplitude at 8 bits (dark-bright)")
@_runtime_errors
def generate(output, pattern, width, height, bit_depth, frame_count, seed, values, noise):
    """Generate a synthetic raw 4:4:4 clip.

    OUTPUT: Destination raw file
    """
    if len(values) not in (0, 1, 3):
        raise click.BadParameter("give --value once or three times", param_hint="--value")
    value = values[0] if len(values) == 1 else (tuple(values) or None)
    frames = generate_clip(pattern, width, height, int(bit_depth), frame_count, seed, value, noise)
    path = write_yuv(
        frames,
        RawVideoSpec(path=output, width=width, height=height, bit_depth=int(bit_depth)),
    )
    click.echo(f"Clip written to: {path} ({frame_count} frame(s), {width}x{height}, b={bit_depth})")


@cli.command("validate")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--contract", default=None, type=click.Path(exists=True),
              help="Path to the artifacts.json contract (auto-detected by default).")
def validate(files: Tuple[str, ...], contract: Optional[str]):
    """Validate QP map and report files against the artifact contract."""
    all_valid = True
    for path in files:
        click.echo(f"Validating: {path}")
        is_valid, errors = validate_artifact_file(path, contract)
        if is_valid:
            click.echo("  ✓ Valid.")
        else:
            click.echo("  ✗ Validation errors:")
            for err in errors[:20]:
                click.echo(f"    - {err}")
            all_valid = False

    if all_valid:
        click.echo("\n✓ All artifacts valid.")
    else:
        click.echo("\n✗ Some artifacts failed validation.")
        sys.exit(1)


@cli.command()
def config():
    """Show current configuration."""
    click.echo("Current Configuration:")
    click.echo(f"  Log level: {settings.log_level}")
    click.echo(f"  Log file: {settings.log_file or '(stderr only)'}")
    click.echo(f"  Threads: {settings.threads} (workers: {settings.workers})")
    click.echo(f"  Block size: {settings.block_size}")
    click.echo(f"  Default model: {settings.default_model}")
    click.echo(f"  Scale chroma breakpoints: {settings.scale_chroma_breakpoints}")
    click.echo(f"  Output directory: {settings.output_dir}")


if __name__ == "__main__":
    cli()
