"""Score sheets, dual-rater reconciliation, and sensitivity scenarios.

A complete sheet carries exactly one binary judgment per sub-function slot.
Disagreements between two raters resolve through reconciliation records;
disputed slots without a record take the conservative default (absent), so
the consensus is a lower bound. The borderline registry maps contestable
slots to their strict/baseline/generous values for sensitivity analysis.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional

from . import taxonomy
from .errors import ValidationError

PRESENT = "present"
ABSENT = "absent"
VALUES = (PRESENT, ABSENT)

STRICT = "strict"
BASELINE = "baseline"
GENEROUS = "generous"
SCENARIOS = (STRICT, BASELINE, GENEROUS)

CONSENSUS_RATER_ID = "consensus"
CONSERVATIVE_DEFAULT = "conservative-default"
RECONCILIATION_CRITERIA = ("C1", "C2", "C3", CONSERVATIVE_DEFAULT)


@dataclass(frozen=True)
class SheetEntry:
    slot_id: str
    value: str
    rationale: str = ""
    borderline: bool = False
    evidence_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class ScoreSheet:
    rater_id: str
    audit_id: str
    entries: tuple[SheetEntry, ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for entry in self.entries:
            taxonomy.require_slot(entry.slot_id)
            if entry.value not in VALUES:
                raise ValidationError(
                    f"sheet value must be present/absent, got {entry.value!r}"
                )
            if entry.slot_id in seen:
                raise ValidationError(f"duplicate sheet entry for slot {entry.slot_id}")
            seen.add(entry.slot_id)

    @property
    def by_slot(self) -> dict[str, SheetEntry]:
        return {e.slot_id: e for e in self.entries}

    @property
    def complete(self) -> bool:
        return len(self.entries) == len(taxonomy.SLOT_IDS)

    def value_of(self, slot_id: str) -> Optional[str]:
        entry = self.by_slot.get(slot_id)
        return entry.value if entry else None

    def present_slots(self) -> set[str]:
        return {e.slot_id for e in self.entries if e.value == PRESENT}

    def with_entry(self, entry: SheetEntry) -> "ScoreSheet":
        kept = tuple(e for e in self.entries if e.slot_id != entry.slot_id)
        return replace(self, entries=kept + (entry,))


def require_complete(sheet: ScoreSheet) -> None:
    if not sheet.complete:
        missing = len(taxonomy.SLOT_IDS) - len(sheet.entries)
        raise ValidationError(
            f"sheet {sheet.rater_id!r} is incomplete: {missing} slots unscored"
        )


@dataclass(frozen=True)
class Disagreement:
    slot_id: str
    values: dict  # rater id -> value
    rationales: dict  # rater id -> rationale


@dataclass(frozen=True)
class ReconciliationRecord:
    slot_id: str
    rater_values: Mapping[str, str]
    resolved_value: str
    criterion_cited: str
    discussion_note: str = ""

    def __post_init__(self) -> None:
        taxonomy.require_slot(self.slot_id)
        if self.resolved_value not in VALUES:
            raise ValidationError(f"resolved value must be present/absent, got {self.resolved_value!r}")
        if self.criterion_cited not in RECONCILIATION_CRITERIA:
            raise ValidationError(f"unknown criterion cited: {self.criterion_cited!r}")
        if self.resolved_value not in (*self.rater_values.values(), ABSENT):
            raise ValidationError(
                "resolved value must match a rater value or the conservative default"
            )


@dataclass(frozen=True)
class BorderlineCase:
    slot_id: str
    baseline_value: str
    strict_value: str
    generous_value: str
    rationale: str = ""

    def __post_init__(self) -> None:
        taxonomy.require_slot(self.slot_id)
        for value in (self.baseline_value, self.strict_value, self.generous_value):
            if value not in VALUES:
                raise ValidationError(f"borderline value must be present/absent, got {value!r}")
        # Ordering absent < present must hold: strict <= baseline <= generous.
        rank = {ABSENT: 0, PRESENT: 1}
        if not (
            rank[self.strict_value] <= rank[self.baseline_value] <= rank[self.generous_value]
        ):
            raise ValidationError(
                f"borderline case {self.slot_id}: strict <= baseline <= generous violated"
            )

    def value_for(self, scenario: str) -> str:
        return {
            STRICT: self.strict_value,
            BASELINE: self.baseline_value,
            GENEROUS: self.generous_value,
        }[scenario]


def diff_sheets(a: ScoreSheet, b: ScoreSheet) -> list[Disagreement]:
    """Slots where two complete sheets for the same audit disagree."""
    if a.audit_id != b.audit_id:
        raise ValidationError("sheets belong to different audits")
    require_complete(a)
    require_complete(b)
    a_map, b_map = a.by_slot, b.by_slot
    disagreements = []
    for slot_id in taxonomy.SLOT_IDS:
        entry_a, entry_b = a_map[slot_id], b_map[slot_id]
        if entry_a.value != entry_b.value:
            disagreements.append(
                Disagreement(
                    slot_id=slot_id,
                    values={a.rater_id: entry_a.value, b.rater_id: entry_b.value},
                    rationales={a.rater_id: entry_a.rationale, b.rater_id: entry_b.rationale},
                )
            )
    return disagreements


def reconcile(
    a: ScoreSheet, b: ScoreSheet, records: Iterable[ReconciliationRecord] = ()
) -> ScoreSheet:
    """Build the consensus sheet from two complete sheets plus records.

    Agreed slots keep their value. Disputed slots take the record's resolved
    value when one exists, otherwise the conservative default (absent).
    Borderline flags union across raters.
    """
    disputed = {d.slot_id for d in diff_sheets(a, b)}
    records = list(records)
    by_record = {}
    for record in records:
        if record.slot_id not in disputed:
            raise ValidationError(
                f"reconciliation record targets non-disputed slot {record.slot_id}"
            )
        by_record[record.slot_id] = record
    a_map, b_map = a.by_slot, b.by_slot
    entries = []
    for slot_id in taxonomy.SLOT_IDS:
        entry_a, entry_b = a_map[slot_id], b_map[slot_id]
        borderline = entry_a.borderline or entry_b.borderline
        evidence_ids = tuple(dict.fromkeys((*entry_a.evidence_ids, *entry_b.evidence_ids)))
        if slot_id not in disputed:
            value = entry_a.value
            rationale = entry_a.rationale or entry_b.rationale
        elif slot_id in by_record:
            record = by_record[slot_id]
            value = record.resolved_value
            rationale = record.discussion_note or f"resolved citing {record.criterion_cited}"
        else:
            value = ABSENT
            rationale = "unresolved disagreement; conservative default applied"
        entries.append(
            SheetEntry(slot_id, value, rationale, borderline, evidence_ids)
        )
    return ScoreSheet(CONSENSUS_RATER_ID, a.audit_id, tuple(entries))


def apply_scenario(
    consensus: ScoreSheet, registry: Iterable[BorderlineCase], scenario: str
) -> ScoreSheet:
    """Return a sheet with each registry slot set to its scenario value.

    Validates that the registry's baseline values agree with the consensus
    sheet (a mismatch means the registry is out of sync). Slots outside the
    registry are untouched.
    """
    if scenario not in SCENARIOS:
        raise ValidationError(f"unknown scenario: {scenario!r}")
    require_complete(consensus)
    sheet = consensus
    for case in registry:
        current = consensus.value_of(case.slot_id)
        if current != case.baseline_value:
            raise ValidationError(
                f"borderline registry out of sync at {case.slot_id}: "
                f"registry baseline {case.baseline_value}, sheet has {current}"
            )
        entry = consensus.by_slot[case.slot_id]
        sheet = sheet.with_entry(
            replace(entry, value=case.value_for(scenario), borderline=True)
        )
    # Keep canonical slot order.
    ordered = tuple(sorted(sheet.entries, key=lambda e: taxonomy.SLOT_IDS.index(e.slot_id)))
    return replace(sheet, entries=ordered)


# --- JSON (de)serialization ------------------------------------------------

def sheet_to_dict(sheet: ScoreSheet) -> dict:
    return {
        "rater_id": sheet.rater_id,
        "audit_id": sheet.audit_id,
        "entries": [
            {
                "slot_id": e.slot_id,
                "value": e.value,
                "rationale": e.rationale,
                "borderline": e.borderline,
                "evidence_ids": list(e.evidence_ids),
            }
            for e in sheet.entries
        ],
    }


def sheet_from_dict(data: dict) -> ScoreSheet:
    try:
        entries = tuple(
            SheetEntry(
                slot_id=e["slot_id"],
                value=e["value"],
                rationale=e.get("rationale", ""),
                borderline=bool(e.get("borderline", False)),
                evidence_ids=tuple(e.get("evidence_ids", ())),
            )
            for e in data.get("entries", [])
        )
        return ScoreSheet(data["rater_id"], data["audit_id"], entries)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed sheet payload: {exc}") from exc


def case_to_dict(case: BorderlineCase) -> dict:
    return {
        "slot_id": case.slot_id,
        "baseline_value": case.baseline_value,
        "strict_value": case.strict_value,
        "generous_value": case.generous_value,
        "rationale": case.rationale,
    }


def case_from_dict(data: dict) -> BorderlineCase:
    try:
        return BorderlineCase(
            slot_id=data["slot_id"],
            baseline_value=data["baseline_value"],
            strict_value=data["strict_value"],
            generous_value=data["generous_value"],
            rationale=data.get("rationale", ""),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed borderline case: {exc}") from exc


def record_to_dict(record: ReconciliationRecord) -> dict:
    return {
        "slot_id": record.slot_id,
        "rater_values": dict(record.rater_values),
        "resolved_value": record.resolved_value,
        "criterion_cited": record.criterion_cited,
        "discussion_note": record.discussion_note,
    }


def record_from_dict(data: dict) -> ReconciliationRecord:
    try:
        return ReconciliationRecord(
            slot_id=data["slot_id"],
            rater_values=dict(data.get("rater_values", {})),
            resolved_value=data["resolved_value"],
            criterion_cited=data["criterion_cited"],
            discussion_note=data.get("discussion_note", ""),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed reconciliation record: {exc}") from exc
