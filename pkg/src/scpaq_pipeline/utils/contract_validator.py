"""
Contract validation utilities for the SC-PAQ pipeline.

Validates that serialized sidecar artifacts conform to the contract defined
in contracts/artifacts.json.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple


def _load_contract(contract_path: Optional[str] = None) -> Dict[str, Any]:
    """Load the artifact contract JSON."""
    if contract_path is None:
        # Default to the contracts directory relative to the repo root
        repo_root = Path(__file__).resolve().parent.parent.parent.parent
        contract_path = str(repo_root / "contracts" / "artifacts.json")
    with open(contract_path, "r", encoding="utf-8") as f:
        return json.load(f)


def _missing(data: Dict[str, Any], required: List[str]) -> List[str]:
    return [field for field in required if field not in data]


def validate_required_fields(
    data: Dict[str, Any],
    artifact_type: str,
    contract_path: Optional[str] = None,
) -> Tuple[bool, List[str]]:
    """
    Validate that a dict has all required top-level fields for the artifact type.

    Args:
        data: The artifact data as a dict.
        artifact_type: The artifact type name (``QpMap`` or ``SimReport``).
        contract_path: Optional path to the contract JSON.

    Returns:
        Tuple of (is_valid, list of missing field names).
    """
    contract = _load_contract(contract_path)
    artifacts = contract.get("artifacts", {})

    if artifact_type not in artifacts:
        return False, [f"Unknown artifact type: {artifact_type}"]

    missing = _missing(data, artifacts[artifact_type].get("required_fields", []))
    return len(missing) == 0, missing


def _validate_frames(
    frames: Any,
    schema: Dict[str, Any],
    where: str,
) -> List[str]:
    errors: List[str] = []
    if not isinstance(frames, list):
        return [f"Field '{where}' must be a list, got {type(frames).__name__}"]
    for i, frame in enumerate(frames):
        missing = _missing(frame, schema["frame_required_fields"])
        errors.extend(f"{where}[{i}] missing field: {f}" for f in missing)
        if missing:
            continue
        cells = frame["cells"]
        if len(cells) != frame["grid_w"] * frame["grid_h"]:
            errors.append(
                f"{where}[{i}] has {len(cells)} cells, expected "
                f"{frame['grid_w']}x{frame['grid_h']}"
            )
        for j, cell in enumerate(cells):
            for f in _missing(cell, schema["cell_required_fields"]):
                errors.append(f"{where}[{i}].cells[{j}] missing field: {f}")
    return errors


def validate_qpmap(
    data: Dict[str, Any],
    contract_path: Optional[str] = None,
) -> Tuple[bool, List[str]]:
    """
    Validate a QpMap document against the contract.

    Checks the artifact type, the top-level fields, every frame's fields,
    the cell count against the grid size, and every cell's keys.
    """
    errors: List[str] = []
    contract = _load_contract(contract_path)
    schema = contract["artifacts"]["QpMap"]

    if data.get("artifact_type") != "QpMap":
        errors.append(f"artifact_type must be 'QpMap', got '{data.get('artifact_type')}'")

    is_valid, missing = validate_required_fields(data, "QpMap", contract_path)
    if not is_valid:
        errors.extend([f"Missing required field: {f}" for f in missing])

    if "maps" in data:
        errors.extend(_validate_frames(data["maps"], schema, "maps"))

    return len(errors) == 0, errors


def validate_report(
    data: Dict[str, Any],
    contract_path: Optional[str] = None,
) -> Tuple[bool, List[str]]:
    """
    Validate a SimReport document against the contract.
    """
    errors: List[str] = []
    contract = _load_contract(contract_path)
    schema = contract["artifacts"]["SimReport"]

    if data.get("artifact_type") != "SimReport":
        errors.append(f"artifact_type must be 'SimReport', got '{data.get('artifact_type')}'")

    is_valid, missing = validate_required_fields(data, "SimReport", contract_path)
    if not is_valid:
        errors.extend([f"Missing required field: {f}" for f in missing])

    channels = data.get("channels")
    if channels is not None:
        if not isinstance(channels, dict):
            errors.append(f"Field 'channels' must be a dict, got {type(channels).__name__}")
        else:
            for name in schema["channel_names"]:
                if name not in channels:
                    errors.append(f"Missing channel: {name}")
                    continue
                for f in _missing(channels[name], schema["channel_required_fields"]):
                    errors.append(f"channels.{name} missing field: {f}")

    if "qp_maps" in data:
        errors.extend(_validate_frames(data["qp_maps"], contract["artifacts"]["QpMap"], "qp_maps"))

    return len(errors) == 0, errors


def validate_artifact_file(
    path: str,
    contract_path: Optional[str] = None,
) -> Tuple[bool, List[str]]:
    """
    Load a JSON artifact and validate it according to its ``artifact_type``.

    Returns:
        Tuple of (is_valid, list of error messages).
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        return False, [f"Invalid JSON: {e}"]
    except FileNotFoundError:
        return False, [f"File not found: {path}"]

    artifact_type = data.get("artifact_type") if isinstance(data, dict) else None
    if artifact_type == "QpMap":
        return validate_qpmap(data, contract_path)
    if artifact_type == "SimReport":
        return validate_report(data, contract_path)
    return False, [f"Unknown artifact type: {artifact_type}"]
