"""The persistent audit document: one ecosystem's complete audit state.

A document bundles ecosystem metadata, the evidence corpus, rater sheets,
reconciliation records, the borderline registry, the media assessment, and
framework references under an optimistic revision counter. Validation
resolves every referenced slot, cell, and pathway against the taxonomy
before any write is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from . import taxonomy
from .coverage import DESIGN_CLASSES, UNDESIGNED
from .errors import ValidationError
from .evidence import EvidenceCorpus, corpus_from_dict, corpus_to_dict
from .media import OPERATIVE_ANNOTATION_KEYS, PathwayStatus, status_from_dict
from .scoring import (
    BorderlineCase,
    ReconciliationRecord,
    ScoreSheet,
    case_from_dict,
    case_to_dict,
    record_from_dict,
    record_to_dict,
    sheet_from_dict,
    sheet_to_dict,
)

SCHEMA_VERSION = "agil-audit/1"


@dataclass(frozen=True)
class Ecosystem:
    name: str
    description: str = ""
    design_class: str = UNDESIGNED

    def __post_init__(self) -> None:
        if not self.name:
            raise ValidationError("ecosystem name must be non-empty")
        if self.design_class not in DESIGN_CLASSES:
            raise ValidationError(f"unknown design class: {self.design_class!r}")


@dataclass(frozen=True)
class AuditDocument:
    audit_id: str
    ecosystem: Ecosystem
    corpus: EvidenceCorpus = field(default_factory=EvidenceCorpus)
    sheets: tuple[ScoreSheet, ...] = ()
    reconciliations: tuple[ReconciliationRecord, ...] = ()
    borderline_registry: tuple[BorderlineCase, ...] = ()
    media_assessment: tuple[PathwayStatus, ...] = ()
    framework_refs: tuple[str, ...] = ()
    # Per-audit overrides of the shipped boundary producer/receiver mapping.
    boundary_overrides: dict = field(default_factory=dict)
    # Optional operative-institution annotations per cell (report-only).
    operative_annotations: dict = field(default_factory=dict)
    revision: int = 1
    schema_version: str = SCHEMA_VERSION

    def validate(self) -> None:
        if not self.audit_id:
            raise ValidationError("audit_id must be non-empty")
        if self.schema_version != SCHEMA_VERSION:
            raise ValidationError(
                f"unsupported schema version {self.schema_version!r}; expected {SCHEMA_VERSION!r}"
            )
        if self.revision < 1:
            raise ValidationError("revision must be a positive integer")
        raters = [s.rater_id for s in self.sheets]
        if len(raters) != len(set(raters)):
            raise ValidationError("duplicate rater sheet in document")
        for sheet in self.sheets:
            if sheet.audit_id != self.audit_id:
                raise ValidationError(
                    f"sheet {sheet.rater_id!r} belongs to audit {sheet.audit_id!r}"
                )
        for boundary_id, cells in self.boundary_overrides.items():
            known = {b.id for b in taxonomy.BOUNDARIES}
            if boundary_id not in known:
                raise ValidationError(f"unknown boundary in overrides: {boundary_id!r}")
            if len(cells) != 2:
                raise ValidationError("boundary override must name producer and receiver cells")
            for cell_id in cells:
                taxonomy.require_cell(cell_id)
        for cell_id, annotations in self.operative_annotations.items():
            taxonomy.require_cell(cell_id)
            unknown = set(annotations) - set(OPERATIVE_ANNOTATION_KEYS)
            if unknown:
                raise ValidationError(
                    f"unknown operative annotation keys for {cell_id}: {sorted(unknown)}"
                )
        # Dataclass constructors already validated slots, values, pathway ids.

    def sheet_for(self, rater_id: str) -> Optional[ScoreSheet]:
        for sheet in self.sheets:
            if sheet.rater_id == rater_id:
                return sheet
        return None

    def with_sheet(self, sheet: ScoreSheet) -> "AuditDocument":
        kept = tuple(s for s in self.sheets if s.rater_id != sheet.rater_id)
        return replace(self, sheets=kept + (sheet,))

    def boundary_cell_overrides(self) -> dict[str, tuple[str, str]]:
        return {k: (v[0], v[1]) for k, v in self.boundary_overrides.items()}


def document_to_dict(doc: AuditDocument) -> dict:
    return {
        "audit_id": doc.audit_id,
        "ecosystem": {
            "name": doc.ecosystem.name,
            "description": doc.ecosystem.description,
            "design_class": doc.ecosystem.design_class,
        },
        "corpus": corpus_to_dict(doc.corpus),
        "sheets": [sheet_to_dict(s) for s in doc.sheets],
        "reconciliations": [record_to_dict(r) for r in doc.reconciliations],
        "borderline_registry": [case_to_dict(c) for c in doc.borderline_registry],
        "media_assessment": [s.as_dict() for s in doc.media_assessment],
        "framework_refs": list(doc.framework_refs),
        "boundary_overrides": {k: list(v) for k, v in doc.boundary_overrides.items()},
        "operative_annotations": doc.operative_annotations,
        "revision": doc.revision,
        "schema_version": doc.schema_version,
    }


def document_from_dict(data: dict) -> AuditDocument:
    try:
        ecosystem_data = data["ecosystem"]
        doc = AuditDocument(
            audit_id=data["audit_id"],
            ecosystem=Ecosystem(
                name=ecosystem_data["name"],
                description=ecosystem_data.get("description", ""),
                design_class=ecosystem_data.get("design_class", UNDESIGNED),
            ),
            corpus=corpus_from_dict(data.get("corpus", {})),
            sheets=tuple(sheet_from_dict(s) for s in data.get("sheets", [])),
            reconciliations=tuple(
                record_from_dict(r) for r in data.get("reconciliations", [])
            ),
            borderline_registry=tuple(
                case_from_dict(c) for c in data.get("borderline_registry", [])
            ),
            media_assessment=tuple(
                status_from_dict(s) for s in data.get("media_assessment", [])
            ),
            framework_refs=tuple(data.get("framework_refs", ())),
            boundary_overrides={
                k: tuple(v) for k, v in data.get("boundary_overrides", {}).items()
            },
            operative_annotations=data.get("operative_annotations", {}),
            revision=int(data.get("revision", 1)),
            schema_version=data.get("schema_version", SCHEMA_VERSION),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed audit document: {exc}") from exc
    doc.validate()
    return doc
