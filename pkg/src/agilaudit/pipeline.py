"""The end-to-end audit pipeline: document in, report bundle out.

Runs consensus (when two complete sheets exist), the three sensitivity
scenarios, coverage and findings, reliability, the media aggregate with
capability and loop checks, and framework summaries. Pure given the
document; the timestamp is the only free input and can be pinned.
"""

from __future__ import annotations

from datetime import datetime, timezone
from typing import Iterable, Optional

from . import coverage as coverage_mod
from . import datasets, media as media_mod, reliability as reliability_mod, reporting
from .document import AuditDocument
from .errors import ValidationError
from .frameworks import FrameworkCoverage, collective_coverage, strong_count, tier_warnings
from .scoring import (
    BASELINE,
    GENEROUS,
    SCENARIOS,
    STRICT,
    ScoreSheet,
    apply_scenario,
    reconcile,
)


def consensus_sheet(doc: AuditDocument) -> ScoreSheet:
    """The sheet the pipeline aggregates: a reconciled consensus when two
    complete rater sheets exist, otherwise the single complete sheet."""
    complete = [s for s in doc.sheets if s.complete]
    if not complete:
        raise ValidationError("document has no complete score sheet")
    consensus = next((s for s in complete if s.rater_id == "consensus"), None)
    raters = [s for s in complete if s.rater_id != "consensus"]
    if len(raters) >= 2:
        return reconcile(raters[0], raters[1], doc.reconciliations)
    if consensus is not None:
        return consensus
    return complete[0]


def scenario_sheets(doc: AuditDocument) -> dict[str, ScoreSheet]:
    base = consensus_sheet(doc)
    return {
        scenario: apply_scenario(base, doc.borderline_registry, scenario)
        for scenario in SCENARIOS
    }


def _framework_section(doc: AuditDocument) -> dict:
    if not doc.framework_refs:
        return {}
    matrices = [
        fc for fc in datasets.framework_matrices() if fc.framework_id in doc.framework_refs
    ]
    known = {fc.framework_id for fc in matrices}
    missing = [ref for ref in doc.framework_refs if ref not in known]
    if not matrices:
        return {"unknown_refs": missing}
    collective = collective_coverage(matrices)
    return {
        "strong_counts": {fc.framework_id: strong_count(fc) for fc in matrices},
        "covered_cells": sorted(collective["covered_cells"]),
        "universal_gaps": sorted(collective["universal_gaps"]),
        "tier_warnings": tier_warnings(matrices),
        "unknown_refs": missing,
    }


def run_pipeline(
    doc: AuditDocument,
    generated_at: Optional[str] = None,
    incident: Optional[media_mod.IncidentRecord] = None,
) -> reporting.ReportBundle:
    if not doc.sheets:
        raise ValidationError("document has no score sheets; score before reporting")

    sheets = scenario_sheets(doc)
    scenarios: dict[str, dict] = {}
    slot_values: dict[str, dict] = {}
    for scenario in SCENARIOS:
        sheet = sheets[scenario]
        report = coverage_mod.compute_coverage(sheet, scenario)
        findings = coverage_mod.interpret(report)
        scenarios[scenario] = {
            "coverage": report.as_dict(),
            "findings": [f.as_dict() for f in findings],
        }
        slot_values[scenario] = {e.slot_id: e.value for e in sheet.entries}

    # Reliability: computable only from two independent rater sheets.
    raters = [s for s in doc.sheets if s.rater_id != "consensus" and s.complete]
    computed = None
    per_pillar = None
    if len(raters) >= 2:
        computed = reliability_mod.reliability_stats(raters[0], raters[1])
        per_pillar = {
            pillar: reliability_mod.reliability_stats(raters[0], raters[1], pillar)
            for pillar in ("A", "G", "I", "L")
        }

    baseline_sheet = sheets[BASELINE]
    capability = media_mod.capability_check(baseline_sheet, doc.boundary_cell_overrides())
    media_section: dict = {
        "aggregate": media_mod.aggregate_media(doc.media_assessment)
        if doc.media_assessment
        else None,
        "capability": [c.as_dict() for c in capability],
        "warnings": media_mod.status_capability_warnings(doc.media_assessment, capability)
        if doc.media_assessment
        else [],
        "operative_annotations": doc.operative_annotations,
    }

    loop = media_mod.correction_loop(baseline_sheet, incident)

    timestamp = generated_at or datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return reporting.ReportBundle(
        audit_id=doc.audit_id,
        ecosystem={
            "name": doc.ecosystem.name,
            "description": doc.ecosystem.description,
            "design_class": doc.ecosystem.design_class,
        },
        scenarios=scenarios,
        slot_values=slot_values,
        heatmap=reporting.heatmap_matrix(baseline_sheet),
        reliability=reporting.reliability_section(computed, per_pillar),
        media=media_section,
        loop=[s.as_dict() for s in loop],
        frameworks=_framework_section(doc),
        generated_at=timestamp,
    )
