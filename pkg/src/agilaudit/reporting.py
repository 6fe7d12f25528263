"""Report rendering: heatmap grid, Markdown tables, canonical JSON bundle.

Rendering is pure and deterministic; the exported JSON uses sorted keys and
compact separators so identical inputs produce byte-identical text. Cited
agreement values from the reference study carry an explicit provenance
marker and are never presented as computed results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from . import taxonomy
from .coverage import CoverageReport, Finding
from .media import CapabilityResult, StepStatus
from .reliability import CITED_REFERENCE_KAPPA, ReliabilityStats
from .scoring import PRESENT, BASELINE, SCENARIOS, ScoreSheet, require_complete


def heatmap_matrix(sheet: ScoreSheet) -> dict:
    """16x4 presence grid: rows are cells in canonical order, columns A,G,I,L."""
    require_complete(sheet)
    present = sheet.present_slots()
    grid = []
    for cell in taxonomy.CELLS:
        grid.append([1 if f"{cell.id}/{kind}" in present else 0 for kind in taxonomy.KIND_CODES])
    return {
        "rows": list(taxonomy.CELL_IDS),
        "columns": list(taxonomy.KIND_CODES),
        "grid": grid,
    }


def heatmap_csv(sheet: ScoreSheet) -> str:
    matrix = heatmap_matrix(sheet)
    lines = ["cell," + ",".join(matrix["columns"])]
    for row_label, row in zip(matrix["rows"], matrix["grid"]):
        lines.append(row_label + "," + ",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ReportBundle:
    audit_id: str
    ecosystem: dict
    scenarios: dict  # scenario -> {"coverage": ..., "findings": [...]}
    slot_values: dict  # scenario -> {slot_id: present|absent}
    heatmap: dict
    reliability: dict
    media: dict
    loop: list
    frameworks: dict
    generated_at: str

    def as_dict(self) -> dict:
        return {
            "audit_id": self.audit_id,
            "ecosystem": self.ecosystem,
            "scenarios": self.scenarios,
            "slot_values": self.slot_values,
            "heatmap": self.heatmap,
            "reliability": self.reliability,
            "media": self.media,
            "loop": self.loop,
            "frameworks": self.frameworks,
            "generated_at": self.generated_at,
        }


def export_bundle(bundle: ReportBundle) -> str:
    """Canonical JSON: UTF-8, lexicographic keys, no insignificant whitespace."""
    return json.dumps(bundle.as_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def bundle_from_dict(data: dict) -> ReportBundle:
    return ReportBundle(
        audit_id=data["audit_id"],
        ecosystem=data["ecosystem"],
        scenarios=data["scenarios"],
        slot_values=data["slot_values"],
        heatmap=data["heatmap"],
        reliability=data["reliability"],
        media=data["media"],
        loop=data["loop"],
        frameworks=data["frameworks"],
        generated_at=data["generated_at"],
    )


def _md_table(headers: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(headers) + " |"]
    lines.append("|" + "|".join(" --- " for _ in headers) + "|")
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return lines


def _scenario_coverage(bundle: ReportBundle, scenario: str) -> Optional[dict]:
    section = bundle.scenarios.get(scenario)
    return section["coverage"] if section else None


def render_markdown(bundle: ReportBundle) -> str:
    """Deterministic Markdown report: slot table, coverage by type, coverage
    by pillar across scenarios, media status, correction-loop steps."""
    lines = [f"# Audit report: {bundle.audit_id}", ""]
    eco = bundle.ecosystem
    lines.append(
        f"Ecosystem: {eco.get('name', bundle.audit_id)} ({eco.get('design_class', 'undesigned')})"
    )
    lines.append(f"Generated at: {bundle.generated_at}")
    lines.append("")

    # Per-slot table (baseline scenario).
    lines.append("## Sub-function scores (baseline)")
    lines.append("")
    baseline_values = bundle.slot_values.get(BASELINE, {})
    rows = []
    for cell in taxonomy.CELLS:
        marks = []
        score = 0
        for kind in taxonomy.KIND_CODES:
            value = baseline_values.get(f"{cell.id}/{kind}", "absent")
            present = value == PRESENT
            score += 1 if present else 0
            marks.append("yes" if present else "-")
        rows.append([f"{cell.id} {cell.institution_name}", *marks, f"{score}/4"])
    lines.extend(_md_table(["Cell", "A", "G", "I", "L", "Score"], rows))
    lines.append("")

    # Coverage by sub-function type (baseline).
    lines.append("## Coverage by sub-function type (baseline)")
    lines.append("")
    baseline_cov = _scenario_coverage(bundle, BASELINE)
    rows = []
    for kind in taxonomy.KIND_CODES:
        if baseline_cov:
            line = baseline_cov["by_type"][kind]
            rows.append(
                [taxonomy.KIND_TABLE_LABELS[kind], str(line["present"]), str(line["total"]), f"{line['pct']}%"]
            )
        else:
            rows.append([taxonomy.KIND_TABLE_LABELS[kind], "0", "16", "0%"])
    lines.extend(_md_table(["Sub-function type", "Present", "Total", "Coverage"], rows))
    lines.append("")

    # Coverage by pillar across the three scenarios.
    lines.append("## Coverage by pillar")
    lines.append("")
    scenario_order = [BASELINE, "strict", "generous"]
    rows = []
    for pillar in taxonomy.PILLAR_CODES:
        row = [taxonomy.PILLAR_TABLE_LABELS[pillar]]
        for scenario in scenario_order:
            cov = _scenario_coverage(bundle, scenario)
            if cov:
                line = cov["by_pillar"][pillar]
                row.append(f"{line['present']} ({line['pct']}%)")
            else:
                row.append("0 (0%)")
        row.append("16")
        rows.append(row)
    total_row = ["Total"]
    for scenario in scenario_order:
        cov = _scenario_coverage(bundle, scenario)
        if cov:
            line = cov["total"]
            total_row.append(f"{line['present']} ({line['pct']}%)")
        else:
            total_row.append("0 (0%)")
    total_row.append("64")
    rows.append(total_row)
    lines.extend(_md_table(["Pillar", "Baseline", "Strict", "Generous", "Total"], rows))
    lines.append("")

    # Findings per scenario.
    lines.append("## Findings")
    lines.append("")
    any_findings = False
    for scenario in scenario_order:
        section = bundle.scenarios.get(scenario)
        for finding in (section or {}).get("findings", []):
            lines.append(f"- [{scenario}] {finding['code']} ({finding['subject']}): {finding['detail']}")
            any_findings = True
    if not any_findings:
        lines.append("- none")
    lines.append("")

    # Reliability.
    lines.append("## Inter-rater reliability")
    lines.append("")
    computed = bundle.reliability.get("computed")
    if computed:
        matrix = computed["matrix"]
        lines.extend(
            _md_table(
                ["Both present", "A only", "B only", "Both absent", "n"],
                [[str(matrix["both_present"]), str(matrix["a_only"]), str(matrix["b_only"]), str(matrix["both_absent"]), str(matrix["n"])]],
            )
        )
        kappa = computed["kappa"] if computed["kappa"] is not None else "undefined"
        lines.append("")
        lines.append(
            f"p_o = {computed['p_o']}, p_e = {computed['p_e']}, kappa = {kappa} "
            f"({computed['interpretation']}), PABAK = {computed['pabak']}"
        )
    else:
        lines.append("Not computed: fewer than two complete rater sheets.")
    cited = bundle.reliability.get("cited_reference")
    if cited:
        per_pillar = ", ".join(f"{k} {v}" for k, v in sorted(cited["per_pillar"].items()))
        lines.append(
            f"Reference study agreement ({cited['provenance']}): overall {cited['overall']}; {per_pillar}."
        )
    lines.append("")

    # Media status.
    lines.append("## Interchange media status")
    lines.append("")
    counts = bundle.media.get("aggregate") or {"functional": 0, "proto": 0, "absent": 0}
    lines.extend(
        _md_table(
            ["Functional", "Proto-functional", "Absent"],
            [[str(counts["functional"]), str(counts["proto"]), str(counts["absent"])]],
        )
    )
    lines.append("")
    capability = bundle.media.get("capability", [])
    capable_count = sum(1 for c in capability if c["capable"])
    lines.append(f"Capability: {capable_count} of {len(capability)} pathways meet the minimum viable configuration.")
    for warning in bundle.media.get("warnings", []):
        lines.append(f"- warning: {warning}")
    lines.append("")

    # Correction loop.
    lines.append("## Cybernetic correction loop")
    lines.append("")
    rows = []
    for step in bundle.loop:
        rows.append(
            [
                step["step"],
                ", ".join(step["required_cells"]),
                ", ".join(step["ready_cells"]) or "-",
                step["status"],
            ]
        )
    if not rows:
        rows = [["-", "-", "-", "-"]]
    lines.extend(_md_table(["Step", "Required cells", "Ready cells", "Status"], rows))
    lines.append("")

    # Frameworks summary.
    if bundle.frameworks:
        lines.append("## Framework coverage")
        lines.append("")
        for fid, summary in sorted(bundle.frameworks.get("strong_counts", {}).items()):
            lines.append(f"- {fid}: {summary} strong cells")
        gaps = bundle.frameworks.get("universal_gaps")
        if gaps is not None:
            lines.append(f"- universal gaps: {', '.join(sorted(gaps)) or 'none'}")
        lines.append("")

    return "\n".join(lines)


def reliability_section(computed: Optional[ReliabilityStats], per_pillar: Optional[dict] = None) -> dict:
    section: dict = {
        "computed": computed.as_dict() if computed else None,
        "cited_reference": dict(CITED_REFERENCE_KAPPA),
    }
    if per_pillar:
        section["computed_per_pillar"] = {
            pillar: stats.as_dict() for pillar, stats in per_pillar.items()
        }
    return section
