"""
Sidecar artifact writers: QP maps, simulation reports, threshold curves and
rate-delta summaries.

Outputs are byte-identical for identical inputs: keys keep a fixed order and
reals are rounded to 6 significant digits.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import pandas as pd

from ..config.logging import get_logger
from ..core.jnd_model import DEFAULT_PARAMS, threshold_curve
from ..data.models import CHANNELS, Component, MaskingParams, QpMap, SimReport
from ..errors import ArtifactError

logger = get_logger(__name__)

SCHEMA_VERSION = "1.0.0"
SIGNIFICANT_DIGITS = 6
FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"


def format_real(value: float) -> Union[float, str]:
    """Round to 6 significant digits; non-finite values become strings."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def _normalize(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return format_real(obj)
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return str(obj)


def _write_text(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ArtifactError(f"Cannot write {path}: {e}") from e
    return path


def _write_json(path: Union[str, Path], document: Dict[str, Any]) -> Path:
    return _write_text(path, json.dumps(_normalize(document), indent=2) + "\n")


def qpmap_frame_document(qp_map: QpMap) -> Dict[str, Any]:
    return {
        "frame_index": qp_map.frame_index,
        "grid_w": qp_map.grid_w,
        "grid_h": qp_map.grid_h,
        "cells": [cell.to_record() for cell in qp_map.iter_cells()],
    }


def qpmap_document(
    maps: Union[QpMap, Sequence[QpMap]],
    bit_depth: Optional[int] = None,
) -> Dict[str, Any]:
    """JSON-ready document for one QP map or a sequence sharing the same settings."""
    maps = [maps] if isinstance(maps, QpMap) else list(maps)
    if not maps:
        raise ArtifactError("No QP maps to serialize")
    first = maps[0]
    return {
        "artifact_type": "QpMap",
        "schema_version": SCHEMA_VERSION,
        "model": first.model.value,
        "base_qp": first.base_qp,
        "offset_mode": first.offset_mode.value,
        "bit_depth": bit_depth,
        "block_size": first.block_size,
        "maps": [qpmap_frame_document(m) for m in maps],
    }


def write_qpmap(
    maps: Union[QpMap, Sequence[QpMap]],
    path: Union[str, Path],
    bit_depth: Optional[int] = None,
) -> Path:
    """Write a QP map sidecar file."""
    path = _write_json(path, qpmap_document(maps, bit_depth))
    logger.debug(f"QP map written to {path}")
    return path


def report_document(report: SimReport) -> Dict[str, Any]:
    """JSON-ready document for a simulation report."""
    channels = {}
    for name in CHANNELS:
        data = report.channel(name).model_dump()
        data.pop("channel")
        channels[name] = data
    return {
        "artifact_type": "SimReport",
        "schema_version": SCHEMA_VERSION,
        "config": report.config.model_dump(mode="json"),
        "channels": channels,
        "totals": {
            "total_bits": report.total_bits,
            "frame_count": report.frame_count,
        },
        "visually_lossless": report.visually_lossless,
        "qp_maps": [qpmap_frame_document(m) for m in report.qp_maps],
    }


def write_report(report: SimReport, path: Union[str, Path]) -> Path:
    """Write a simulation report file."""
    path = _write_json(path, report_document(report))
    logger.debug(f"Report written to {path}")
    return path


def write_curve(
    component: Union[Component, str],
    bit_depth: int,
    params: MaskingParams = DEFAULT_PARAMS,
    step: int = 1,
    path: Union[str, Path] = "curve.csv",
) -> Path:
    """Write a ``mu,threshold`` table of the threshold curve of *component*."""
    mu, values = threshold_curve(component, bit_depth, params, step)
    table = pd.DataFrame({"mu": mu, "threshold": values})
    return write_table(table, path)


def write_table(table: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Write a table as CSV with the fixed real formatting."""
    text = table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return _write_text(path, text)


def write_summary(table: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Write the rate-delta summary table."""
    path = write_table(table, path)
    logger.debug(f"Summary written to {path}")
    return path


def load_artifact(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a JSON artifact back into a dict."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ArtifactError(f"Invalid JSON in {path}: {e}") from e
    except OSError as e:
        raise ArtifactError(f"Cannot read {path}: {e}") from e
