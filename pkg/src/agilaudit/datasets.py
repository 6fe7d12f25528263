"""Loader for the shipped reference datasets.

Each dataset is one JSON file under ``data/reference/`` with an envelope
carrying its id, source reference, and confidence level; the payload parses
into the owning module's types and validates against the taxonomy. A
shipped dataset that fails validation is a packaging defect and raises.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any, Callable

from . import taxonomy
from .document import AuditDocument, document_from_dict
from .errors import NotFoundError, ValidationError
from .frameworks import FrameworkCoverage, PrincipleMapping, coverage_from_dict, mapping_from_dict
from .media import IncidentRecord, PathwayStatus, status_from_dict
from .scoring import BorderlineCase, ScoreSheet, case_from_dict, sheet_from_dict
from .taxonomy import PatternVariableProfile

_DATA_DIR = "data/reference"


@dataclass(frozen=True)
class ReferenceDataset:
    dataset_id: str
    source_ref: str
    confidence: str
    payload: Any


def _parse_requirements(data: dict) -> dict[str, PatternVariableProfile]:
    profiles = {}
    for cell_id, spec in data.items():
        taxonomy.require_cell(cell_id)
        profiles[cell_id] = PatternVariableProfile.of(
            *spec.get("poles", ()), extra=tuple(spec.get("extra_orientations", ()))
        )
    return profiles


def _parse_incident(data: dict) -> IncidentRecord:
    return IncidentRecord(
        id=data["id"], description=data.get("description", ""), date=data.get("date", "")
    )


_PARSERS: dict[str, Callable[[Any], Any]] = {
    "openclaw-baseline-sheet": sheet_from_dict,
    "borderline-registry-c2": lambda payload: [case_from_dict(c) for c in payload],
    "table9-media": lambda payload: [status_from_dict(s) for s in payload],
    "table2a-frameworks": lambda payload: [coverage_from_dict(f) for f in payload],
    "haip-framework": coverage_from_dict,
    "table11a-ostrom": lambda payload: [mapping_from_dict(m) for m in payload],
    "table12-layers": lambda payload: [coverage_from_dict(f) for f in payload],
    "pattern-variable-requirements": _parse_requirements,
    "clawhavoc-incident": _parse_incident,
    "openclaw-audit": document_from_dict,
}

DATASET_IDS = tuple(sorted(_PARSERS))


def _read_raw(dataset_id: str) -> dict:
    resource = resources.files("agilaudit").joinpath(f"{_DATA_DIR}/{dataset_id}.json")
    try:
        text = resource.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise NotFoundError(f"unknown reference dataset: {dataset_id!r}") from None
    return json.loads(text)


def load_envelope(dataset_id: str) -> ReferenceDataset:
    if dataset_id not in _PARSERS:
        raise NotFoundError(f"unknown reference dataset: {dataset_id!r}")
    raw = _read_raw(dataset_id)
    try:
        payload = _PARSERS[dataset_id](raw["payload"])
    except ValidationError as exc:
        raise ValidationError(f"shipped dataset {dataset_id!r} failed validation: {exc}") from exc
    return ReferenceDataset(
        dataset_id=raw.get("dataset_id", dataset_id),
        source_ref=raw.get("source_ref", ""),
        confidence=raw.get("confidence", "paper-explicit"),
        payload=payload,
    )


def load_reference(dataset_id: str) -> Any:
    """Parsed, validated payload for a shipped dataset id."""
    return load_envelope(dataset_id).payload


def openclaw_document() -> AuditDocument:
    return load_reference("openclaw-audit")


def openclaw_sheet() -> ScoreSheet:
    return load_reference("openclaw-baseline-sheet")


def borderline_registry() -> list[BorderlineCase]:
    return load_reference("borderline-registry-c2")


def media_assessment() -> list[PathwayStatus]:
    return load_reference("table9-media")


def framework_matrices() -> list[FrameworkCoverage]:
    return load_reference("table2a-frameworks")


def ostrom_mapping() -> list[PrincipleMapping]:
    return load_reference("table11a-ostrom")
