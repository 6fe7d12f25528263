"""HTTP/JSON API over the document store.

All bodies are JSON; errors are ``{"code", "message", "detail"}`` with 400
for validation, 404 for unknown audits, 409 for stale revisions. Writes go
through the same document validation as the CLI. Rater-scoped sheet views
enforce blind-first scoring: another rater's value for a slot appears only
once both raters have submitted that slot.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from fastapi import Body, FastAPI, Header, Query, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import reliability as reliability_mod
from . import reporting, taxonomy
from .document import AuditDocument, Ecosystem, document_from_dict, document_to_dict
from .errors import AuditError, ConflictError, NotFoundError, StorageError, ValidationError
from .media import aggregate_media, capability_check, correction_loop, status_capability_warnings
from .pipeline import consensus_sheet, run_pipeline, scenario_sheets
from dataclasses import replace

from .scoring import (
    CONSENSUS_RATER_ID,
    SCENARIOS,
    Disagreement,
    ScoreSheet,
    SheetEntry,
    diff_sheets,
    record_from_dict,
    sheet_to_dict,
)
from .store import DocumentStore

_STATUS_BY_CODE = {
    "validation": 400,
    "conflict": 409,
    "not-found": 404,
    "io": 500,
}


def _error_response(exc: AuditError, detail: Any = None) -> JSONResponse:
    return JSONResponse(
        status_code=_STATUS_BY_CODE.get(exc.code, 500),
        content={"code": exc.code, "message": str(exc), "detail": detail},
    )


def _rater_sheets(doc: AuditDocument) -> list[ScoreSheet]:
    return [s for s in doc.sheets if s.rater_id != CONSENSUS_RATER_ID]


def _dually_scored(doc: AuditDocument) -> set[str]:
    raters = _rater_sheets(doc)
    if len(raters) < 2:
        return set()
    scored = [set(s.by_slot) for s in raters]
    common = scored[0]
    for s in scored[1:]:
        common &= s
    return common


def create_app(store: Optional[DocumentStore] = None, workbench_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="agilaudit", version="0.1.0")
    app.state.store = store or DocumentStore()

    @app.exception_handler(AuditError)
    async def _audit_error_handler(_request: Request, exc: AuditError):
        return _error_response(exc)

    def _store() -> DocumentStore:
        return app.state.store

    @app.get("/api/v1/taxonomy")
    def get_taxonomy() -> dict:
        return taxonomy.as_dict()

    @app.get("/api/v1/audits")
    def list_audits() -> list[dict]:
        return _store().list_audits()

    @app.post("/api/v1/audits", status_code=201)
    def create_audit(body: dict = Body(...)) -> dict:
        ecosystem_data = body.get("ecosystem") or {}
        name = ecosystem_data.get("name") or body.get("name")
        if not name:
            raise ValidationError("ecosystem name is required")
        audit_id = body.get("audit_id") or name.lower().replace(" ", "-")
        ecosystem = Ecosystem(
            name=name,
            description=ecosystem_data.get("description", ""),
            design_class=ecosystem_data.get("design_class", "undesigned"),
        )
        doc = _store().create(audit_id, ecosystem)
        return document_to_dict(doc)

    @app.get("/api/v1/audits/{audit_id}")
    def get_audit(audit_id: str) -> dict:
        return document_to_dict(_store().load(audit_id))

    @app.put("/api/v1/audits/{audit_id}")
    def put_audit(
        audit_id: str,
        body: dict = Body(...),
        if_match: Optional[str] = Header(default=None, alias="If-Match"),
    ) -> dict:
        if if_match is None:
            raise ValidationError("If-Match header with the expected revision is required")
        try:
            expected = int(if_match.strip().strip('"'))
        except ValueError:
            raise ValidationError(f"If-Match must be an integer revision, got {if_match!r}")
        incoming = document_from_dict({**body, "audit_id": audit_id, "revision": expected})

        def mutation(_current: AuditDocument) -> AuditDocument:
            return incoming

        doc = _store().update(audit_id, expected, mutation)
        return document_to_dict(doc)

    @app.post("/api/v1/audits/{audit_id}/sheets")
    def post_sheet_entries(audit_id: str, body: dict = Body(...)) -> dict:
        rater_id = body.get("rater_id")
        if not rater_id:
            raise ValidationError("rater_id is required")
        if rater_id == CONSENSUS_RATER_ID:
            raise ValidationError("the consensus sheet is derived, not submitted")
        raw_entries = body.get("entries", [])
        if not raw_entries:
            raise ValidationError("entries list is empty")
        entries = [
            SheetEntry(
                slot_id=e["slot_id"],
                value=e["value"],
                rationale=e.get("rationale", ""),
                borderline=bool(e.get("borderline", False)),
                evidence_ids=tuple(e.get("evidence_ids", ())),
            )
            for e in raw_entries
        ]

        def mutation(doc: AuditDocument) -> AuditDocument:
            sheet = doc.sheet_for(rater_id) or ScoreSheet(rater_id, audit_id, ())
            for entry in entries:
                sheet = sheet.with_entry(entry)
            return doc.with_sheet(sheet)

        doc = _store().update_latest(audit_id, mutation)
        dually = _dually_scored(doc)
        others = [s for s in _rater_sheets(doc) if s.rater_id != rater_id]
        reveals = {}
        for entry in entries:
            if entry.slot_id in dually:
                reveals[entry.slot_id] = {
                    s.rater_id: s.by_slot[entry.slot_id].value for s in others
                }
            else:
                reveals[entry.slot_id] = None
        sheet = doc.sheet_for(rater_id)
        return {
            "revision": doc.revision,
            "rater_id": rater_id,
            "updated": [e.slot_id for e in entries],
            "scored": len(sheet.entries) if sheet else 0,
            "complete": bool(sheet and sheet.complete),
            "reveals": reveals,
        }

    @app.get("/api/v1/audits/{audit_id}/sheets/{rater_id}")
    def get_rater_view(audit_id: str, rater_id: str) -> dict:
        doc = _store().load(audit_id)
        sheet = doc.sheet_for(rater_id)
        dually = _dually_scored(doc)
        others = [s for s in _rater_sheets(doc) if s.rater_id != rater_id]
        revealed = {
            slot_id: {s.rater_id: s.by_slot[slot_id].value for s in others}
            for slot_id in sorted(dually)
        }
        return {
            "audit_id": audit_id,
            "rater_id": rater_id,
            "revision": doc.revision,
            "entries": sheet_to_dict(sheet)["entries"] if sheet else [],
            "complete": bool(sheet and sheet.complete),
            "revealed": revealed,
        }

    @app.get("/api/v1/audits/{audit_id}/disagreements")
    def get_disagreements(audit_id: str) -> dict:
        doc = _store().load(audit_id)
        raters = _rater_sheets(doc)
        if len(raters) < 2:
            raise ValidationError("disagreements require two rater sheets")
        a, b = raters[0], raters[1]
        resolved = {r.slot_id: r for r in doc.reconciliations}
        if a.complete and b.complete:
            disagreements = diff_sheets(a, b)
        else:
            # Live queue over the dually-scored slots only.
            dually = _dually_scored(doc)
            disagreements = []
            for slot_id in taxonomy.SLOT_IDS:
                if slot_id not in dually:
                    continue
                va, vb = a.by_slot[slot_id], b.by_slot[slot_id]
                if va.value != vb.value:
                    disagreements.append(
                        Disagreement(
                            slot_id,
                            {a.rater_id: va.value, b.rater_id: vb.value},
                            {a.rater_id: va.rationale, b.rater_id: vb.rationale},
                        )
                    )
        queue = []
        for d in disagreements:
            record = resolved.get(d.slot_id)
            queue.append(
                {
                    "slot_id": d.slot_id,
                    "values": d.values,
                    "rationales": d.rationales,
                    "resolved": record is not None,
                    "resolved_value": record.resolved_value if record else None,
                    "criterion_cited": record.criterion_cited if record else None,
                }
            )
        return {
            "audit_id": audit_id,
            "revision": doc.revision,
            "raters": [a.rater_id, b.rater_id],
            "complete": a.complete and b.complete,
            "disagreements": queue,
            "unresolved": sum(1 for q in queue if not q["resolved"]),
        }

    @app.post("/api/v1/audits/{audit_id}/reconciliations")
    def post_reconciliation(audit_id: str, body: dict = Body(...)) -> dict:
        doc = _store().load(audit_id)
        raters = _rater_sheets(doc)
        if len(raters) < 2:
            raise ValidationError("reconciliation requires two rater sheets")
        a, b = raters[0], raters[1]
        slot_id = body.get("slot_id")
        taxonomy.require_slot(slot_id or "")
        if not (slot_id in a.by_slot and slot_id in b.by_slot):
            raise ValidationError(f"slot {slot_id} is not scored by both raters")
        va, vb = a.by_slot[slot_id].value, b.by_slot[slot_id].value
        if va == vb:
            raise ValidationError(f"slot {slot_id} is not disputed")
        record = record_from_dict(
            {
                "slot_id": slot_id,
                "rater_values": {a.rater_id: va, b.rater_id: vb},
                "resolved_value": body.get("resolved_value"),
                "criterion_cited": body.get("criterion_cited"),
                "discussion_note": body.get("discussion_note", ""),
            }
        )

        def mutation(current: AuditDocument) -> AuditDocument:
            kept = tuple(r for r in current.reconciliations if r.slot_id != slot_id)
            return replace(current, reconciliations=kept + (record,))

        doc = _store().update_latest(audit_id, mutation)
        return {
            "revision": doc.revision,
            "record": {
                "slot_id": record.slot_id,
                "resolved_value": record.resolved_value,
                "criterion_cited": record.criterion_cited,
            },
        }

    @app.get("/api/v1/audits/{audit_id}/report")
    def get_report(
        audit_id: str,
        scenario: Optional[str] = Query(default=None),
        generated_at: Optional[str] = Query(default=None),
    ) -> dict:
        doc = _store().load(audit_id)
        bundle = run_pipeline(doc, generated_at=generated_at)
        if scenario is None:
            return bundle.as_dict()
        if scenario not in SCENARIOS:
            raise ValidationError(f"unknown scenario: {scenario!r}")
        return {
            "audit_id": audit_id,
            "scenario": scenario,
            "generated_at": bundle.generated_at,
            **bundle.scenarios[scenario],
        }

    @app.get("/api/v1/audits/{audit_id}/reliability")
    def get_reliability(audit_id: str) -> dict:
        doc = _store().load(audit_id)
        raters = _rater_sheets(doc)
        computed = None
        scope = None
        if len(raters) >= 2:
            a, b = raters[0], raters[1]
            if a.complete and b.complete:
                computed = reliability_mod.reliability_stats(a, b)
                scope = "all"
            else:
                dually = sorted(_dually_scored(doc))
                if dually:
                    computed = reliability_mod.reliability_stats_over_slots(a, b, dually)
                    scope = f"dually-scored subset ({len(dually)} slots)"
        section = reporting.reliability_section(computed)
        section["scope"] = scope
        section["audit_id"] = audit_id
        return section

    @app.get("/api/v1/audits/{audit_id}/media")
    def get_media(audit_id: str) -> dict:
        doc = _store().load(audit_id)
        aggregate = aggregate_media(doc.media_assessment) if doc.media_assessment else None
        capability = None
        warnings: list[str] = []
        try:
            sheet = consensus_sheet(doc)
        except ValidationError:
            sheet = None
        if sheet is not None:
            results = capability_check(sheet, doc.boundary_cell_overrides())
            capability = [c.as_dict() for c in results]
            if doc.media_assessment:
                warnings = status_capability_warnings(doc.media_assessment, results)
        return {
            "audit_id": audit_id,
            "aggregate": aggregate,
            "assessment": [s.as_dict() for s in doc.media_assessment],
            "capability": capability,
            "warnings": warnings,
        }

    @app.get("/api/v1/audits/{audit_id}/loop")
    def get_loop(audit_id: str) -> dict:
        doc = _store().load(audit_id)
        sheet = consensus_sheet(doc)
        steps = correction_loop(sheet)
        return {
            "audit_id": audit_id,
            "steps": [s.as_dict() for s in steps],
            "operative_annotations": doc.operative_annotations,
        }

    @app.get("/api/v1/audits/{audit_id}/evidence")
    def get_evidence(audit_id: str, slot: Optional[str] = Query(default=None)) -> dict:
        # Scoped corpus view for the rater workbench: carries no sheet values,
        # so it is safe to consume during the blind scoring phase.
        doc = _store().load(audit_id)
        corpus = doc.corpus
        if slot is None:
            mechanisms = list(corpus.mechanisms)
        else:
            taxonomy.require_slot(slot)
            mechanisms = [m for m in corpus.mechanisms if slot in m.slot_ids]
        mechanism_ids = {m.id for m in mechanisms}
        items = [i for i in corpus.items if i.mechanism_id in mechanism_ids]
        return {
            "audit_id": audit_id,
            "slot": slot,
            "mechanisms": [
                {
                    "id": m.id,
                    "name": m.name,
                    "slot_ids": list(m.slot_ids),
                    "description": m.description,
                }
                for m in mechanisms
            ],
            "items": [
                {
                    "id": i.id,
                    "mechanism_id": i.mechanism_id,
                    "source_citation": i.source_citation,
                    "criteria": i.criteria.as_dict(),
                    "note": i.note,
                }
                for i in items
            ],
        }

    @app.get("/api/v1/audits/{audit_id}/heatmap")
    def get_heatmap(audit_id: str, rater: Optional[str] = Query(default=None)) -> dict:
        doc = _store().load(audit_id)
        if rater is not None:
            sheet = doc.sheet_for(rater)
            if sheet is None:
                raise NotFoundError(f"no sheet for rater {rater!r}")
            present = sheet.present_slots()
            grid = [
                [1 if f"{cell.id}/{kind}" in present else 0 for kind in taxonomy.KIND_CODES]
                for cell in taxonomy.CELLS
            ]
            return {
                "rows": list(taxonomy.CELL_IDS),
                "columns": list(taxonomy.KIND_CODES),
                "grid": grid,
                "scope": f"rater:{rater}",
                "complete": sheet.complete,
            }
        sheet = consensus_sheet(doc)
        result = reporting.heatmap_matrix(sheet)
        result["scope"] = "consensus"
        return result

    if workbench_dir:
        app.mount("/", StaticFiles(directory=workbench_dir, html=True), name="workbench")

    return app
