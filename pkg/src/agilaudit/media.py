"""Interchange-media assessment, pathway capability, and the correction loop.

Asserted pathway statuses (functional / proto-functional / absent) aggregate
over the twelve directed pathways. Capability derives from scores through
the minimum-viable-configuration rule: infrastructure and operative
sub-functions on both boundary cells, a coordination sub-function on at
least one of them, and normative grounding at the boundary's receiver cell.
The four-step correction loop checks which institutional steps an ecosystem
could execute, using operative (G-sub) presence as cell readiness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from . import taxonomy
from .errors import ValidationError
from .scoring import PRESENT, ScoreSheet, require_complete

FUNCTIONAL = "functional"
PROTO_FUNCTIONAL = "proto-functional"
ABSENT_STATUS = "absent"
STATUSES = (FUNCTIONAL, PROTO_FUNCTIONAL, ABSENT_STATUS)


@dataclass(frozen=True)
class PathwayStatus:
    pathway_id: str  # "X->Y"
    status: str
    flavor: str = ""  # e.g. "proto-emergent" on a proto-functional pathway
    evidence_note: str = ""

    def __post_init__(self) -> None:
        if self.pathway_id not in taxonomy.PATHWAY_IDS:
            raise ValidationError(f"unknown pathway: {self.pathway_id!r}")
        if self.status not in STATUSES:
            raise ValidationError(f"unknown pathway status: {self.status!r}")

    def as_dict(self) -> dict:
        return {
            "pathway_id": self.pathway_id,
            "status": self.status,
            "flavor": self.flavor,
            "evidence_note": self.evidence_note,
        }


def status_from_dict(data: dict) -> PathwayStatus:
    try:
        return PathwayStatus(
            pathway_id=data["pathway_id"],
            status=data["status"],
            flavor=data.get("flavor", ""),
            evidence_note=data.get("evidence_note", ""),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed pathway status: {exc}") from exc


def aggregate_media(assessment: Iterable[PathwayStatus]) -> dict:
    """Counts by status over a complete 12-pathway assessment."""
    statuses = list(assessment)
    seen = {s.pathway_id for s in statuses}
    if len(statuses) != len(seen):
        raise ValidationError("duplicate pathway status entries")
    missing = set(taxonomy.PATHWAY_IDS) - seen
    if missing:
        raise ValidationError(f"assessment missing pathways: {sorted(missing)}")
    counts = {FUNCTIONAL: 0, PROTO_FUNCTIONAL: 0, ABSENT_STATUS: 0}
    for status in statuses:
        counts[status.status] += 1
    return {"functional": counts[FUNCTIONAL], "proto": counts[PROTO_FUNCTIONAL], "absent": counts[ABSENT_STATUS]}


@dataclass(frozen=True)
class BlockedReason:
    slot_id: str
    cell_id: str

    def as_dict(self) -> dict:
        return {"slot_id": self.slot_id, "cell_id": self.cell_id}


@dataclass(frozen=True)
class CapabilityResult:
    pathway_id: str
    producer_cell: str
    receiver_cell: str
    capable: bool
    blocked_reasons: tuple[BlockedReason, ...]

    def as_dict(self) -> dict:
        return {
            "pathway_id": self.pathway_id,
            "producer_cell": self.producer_cell,
            "receiver_cell": self.receiver_cell,
            "capable": self.capable,
            "blocked_reasons": [r.as_dict() for r in self.blocked_reasons],
        }


def capability_check(
    sheet: ScoreSheet,
    boundary_overrides: Optional[Mapping[str, tuple[str, str]]] = None,
) -> list[CapabilityResult]:
    """Minimum-viable-configuration check for all twelve directed pathways.

    The rule is evaluated at the boundary: both configured cells need their
    A-sub and G-sub present, at least one needs its I-sub, and the boundary's
    receiver cell needs its L-sub. The normative anchor stays at the
    configured receiver cell for both flow directions (one configuration
    enables the boundary's media circulation both ways); the reverse
    pathway's result swaps the producer/receiver labels only.
    """
    require_complete(sheet)
    present = sheet.present_slots()

    def has(cell_id: str, kind: str) -> bool:
        return f"{cell_id}/{kind}" in present

    results = []
    for boundary in taxonomy.boundaries(boundary_overrides):
        producer, receiver = boundary.producer_cell, boundary.receiver_cell
        missing: list[BlockedReason] = []
        for cell_id in (producer, receiver):
            for kind in ("A", "G"):
                if not has(cell_id, kind):
                    missing.append(BlockedReason(f"{cell_id}/{kind}", cell_id))
        if not (has(producer, "I") or has(receiver, "I")):
            missing.append(BlockedReason(f"{producer}/I", producer))
            missing.append(BlockedReason(f"{receiver}/I", receiver))
        if not has(receiver, "L"):
            missing.append(BlockedReason(f"{receiver}/L", receiver))
        capable = not missing
        forward, reverse = boundary.pathways
        results.append(
            CapabilityResult(forward.id, producer, receiver, capable, tuple(missing))
        )
        results.append(
            CapabilityResult(reverse.id, receiver, producer, capable, tuple(missing))
        )
    return results


def status_capability_warnings(
    assessment: Iterable[PathwayStatus], capability: Iterable[CapabilityResult]
) -> list[str]:
    """Reported (never enforced): asserted status should not exceed capability."""
    capable_by_id = {c.pathway_id: c.capable for c in capability}
    warnings = []
    for status in assessment:
        if status.status == FUNCTIONAL and not capable_by_id.get(status.pathway_id, False):
            warnings.append(
                f"pathway {status.pathway_id}: status exceeds capability "
                "(asserted functional, minimum viable configuration not met)"
            )
    return warnings


# --- Cybernetic correction loop -------------------------------------------

@dataclass(frozen=True)
class IncidentRecord:
    id: str
    description: str = ""
    date: str = ""

    def as_dict(self) -> dict:
        return {"id": self.id, "description": self.description, "date": self.date}


EXECUTABLE = "executable"
PARTIAL = "partial"
BLOCKED = "blocked"

# The loop runs down the control hierarchy; a step's cells are ready when
# their operative (G-sub) mechanisms are present.
LOOP_STEPS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("value-classification", ("L-L",)),
    ("normative-enforcement", ("I-G", "I-L")),
    ("policy-evolution", ("G-L",)),
    ("economic-sanction", ("A-A",)),
)

# Optional per-cell annotations describing operative-institution properties;
# reported alongside loop results but never part of the verdict.
OPERATIVE_ANNOTATION_KEYS = (
    "enforceable_membership",
    "binding_rule_change",
    "sanctionable_noncompliance",
)


@dataclass(frozen=True)
class StepStatus:
    step: str
    required_cells: tuple[str, ...]
    ready_cells: tuple[str, ...]
    status: str

    def as_dict(self) -> dict:
        return {
            "step": self.step,
            "required_cells": list(self.required_cells),
            "ready_cells": list(self.ready_cells),
            "status": self.status,
        }


def correction_loop(sheet: ScoreSheet, incident: Optional[IncidentRecord] = None) -> list[StepStatus]:
    """Evaluate the four-step institutional response against a score sheet."""
    require_complete(sheet)
    present = sheet.present_slots()
    statuses = []
    for step_name, cells in LOOP_STEPS:
        ready = tuple(cell for cell in cells if f"{cell}/G" in present)
        if len(ready) == len(cells):
            status = EXECUTABLE
        elif ready:
            status = PARTIAL
        else:
            status = BLOCKED
        statuses.append(StepStatus(step_name, cells, ready, status))
    return statuses
