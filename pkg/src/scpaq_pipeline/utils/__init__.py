"""
Utilities package for the SC-PAQ pipeline.
"""

from .contract_validator import (
    validate_artifact_file,
    validate_qpmap,
    validate_report,
    validate_required_fields,
)

__all__ = [
    "validate_artifact_file",
    "validate_qpmap",
    "validate_report",
    "validate_required_fields",
]
