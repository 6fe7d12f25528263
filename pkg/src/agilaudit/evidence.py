"""Governance mechanisms, their evidence, and slot-presence evaluation.

A slot counts as present when at least one mechanism claiming it has
evidence jointly establishing C1 (published specification or dedicated
infrastructure), C3 (governance-specific function), and the invocation
criterion selected by policy: C2b (documented invocation, the default) or
C2a (designed and specified). Criteria may be established by different
evidence items of the same mechanism; items never combine across
mechanisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import taxonomy
from .errors import ValidationError

C2B_REQUIRED = "c2b-required"
C2A_ACCEPTED = "c2a-accepted"

PRESENT = "present"
ABSENT = "absent"


@dataclass(frozen=True)
class CriterionFlags:
    c1: bool = False
    c2a: bool = False
    c2b: bool = False
    c3: bool = False

    def union(self, other: "CriterionFlags") -> "CriterionFlags":
        return CriterionFlags(
            c1=self.c1 or other.c1,
            c2a=self.c2a or other.c2a,
            c2b=self.c2b or other.c2b,
            c3=self.c3 or other.c3,
        )

    def as_dict(self) -> dict:
        return {"c1": self.c1, "c2a": self.c2a, "c2b": self.c2b, "c3": self.c3}


@dataclass(frozen=True)
class Mechanism:
    id: str
    name: str
    slot_ids: tuple[str, ...]
    description: str = ""


@dataclass(frozen=True)
class EvidenceItem:
    id: str
    mechanism_id: str
    source_citation: str
    criteria: CriterionFlags
    note: str = ""


@dataclass(frozen=True)
class CriterionPolicy:
    invocation_tier: str = C2B_REQUIRED

    def __post_init__(self) -> None:
        if self.invocation_tier not in (C2B_REQUIRED, C2A_ACCEPTED):
            raise ValidationError(f"unknown invocation tier: {self.invocation_tier!r}")


@dataclass(frozen=True)
class EvidenceCorpus:
    mechanisms: tuple[Mechanism, ...] = ()
    items: tuple[EvidenceItem, ...] = ()
    project_survey_note: str = ""

    def mechanism_flags(self, mechanism_id: str) -> CriterionFlags:
        flags = CriterionFlags()
        for item in self.items:
            if item.mechanism_id == mechanism_id:
                flags = flags.union(item.criteria)
        return flags


@dataclass(frozen=True)
class PresenceEvaluation:
    slot_id: str
    value: str  # present | absent
    satisfying_mechanisms: tuple[str, ...]
    criterion_detail: dict  # mechanism id -> combined flags


def _invocation_met(flags: CriterionFlags, policy: CriterionPolicy) -> bool:
    if flags.c2b:
        return True
    return policy.invocation_tier == C2A_ACCEPTED and flags.c2a


def evaluate_presence(
    corpus: EvidenceCorpus, slot_id: str, policy: CriterionPolicy | None = None
) -> PresenceEvaluation:
    """Evaluate one slot against the corpus under the given criterion policy."""
    taxonomy.require_slot(slot_id)
    policy = policy or CriterionPolicy()
    detail: dict[str, dict] = {}
    satisfying = []
    for mechanism in corpus.mechanisms:
        if slot_id not in mechanism.slot_ids:
            continue
        flags = corpus.mechanism_flags(mechanism.id)
        detail[mechanism.id] = flags.as_dict()
        if flags.c1 and flags.c3 and _invocation_met(flags, policy):
            satisfying.append(mechanism.id)
    value = PRESENT if satisfying else ABSENT
    return PresenceEvaluation(slot_id, value, tuple(sorted(satisfying)), detail)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    subject: str
    message: str

    def as_dict(self) -> dict:
        return {"code": self.code, "subject": self.subject, "message": self.message}


def validate_corpus(corpus: EvidenceCorpus) -> list[Diagnostic]:
    """Referential-integrity diagnostics; never raises."""
    diagnostics: list[Diagnostic] = []
    seen_mechanisms: set[str] = set()
    for mechanism in corpus.mechanisms:
        if mechanism.id in seen_mechanisms:
            diagnostics.append(
                Diagnostic("duplicate-id", mechanism.id, "mechanism id is not unique")
            )
        seen_mechanisms.add(mechanism.id)
        if not mechanism.slot_ids:
            diagnostics.append(
                Diagnostic("no-slots", mechanism.id, "mechanism claims no slots")
            )
        for slot_id in mechanism.slot_ids:
            if slot_id not in taxonomy.SLOT_BY_ID:
                diagnostics.append(
                    Diagnostic(
                        "unknown-slot",
                        mechanism.id,
                        f"mechanism claims unknown slot {slot_id!r}",
                    )
                )
    seen_items: set[str] = set()
    evidenced: set[str] = set()
    for item in corpus.items:
        if item.id in seen_items:
            diagnostics.append(Diagnostic("duplicate-id", item.id, "evidence id is not unique"))
        seen_items.add(item.id)
        if item.mechanism_id not in seen_mechanisms:
            diagnostics.append(
                Diagnostic(
                    "dangling-reference",
                    item.id,
                    f"evidence references unknown mechanism {item.mechanism_id!r}",
                )
            )
        evidenced.add(item.mechanism_id)
    for mechanism in corpus.mechanisms:
        if mechanism.id not in evidenced:
            diagnostics.append(
                Diagnostic("no-evidence", mechanism.id, "mechanism has no evidence items")
            )
    return diagnostics


# --- JSON (de)serialization ------------------------------------------------

def corpus_to_dict(corpus: EvidenceCorpus) -> dict:
    return {
        "mechanisms": [
            {
                "id": m.id,
                "name": m.name,
                "slot_ids": list(m.slot_ids),
                "description": m.description,
            }
            for m in corpus.mechanisms
        ],
        "items": [
            {
                "id": i.id,
                "mechanism_id": i.mechanism_id,
                "source_citation": i.source_citation,
                "criteria": i.criteria.as_dict(),
                "note": i.note,
            }
            for i in corpus.items
        ],
        "project_survey_note": corpus.project_survey_note,
    }


def corpus_from_dict(data: dict) -> EvidenceCorpus:
    try:
        mechanisms = tuple(
            Mechanism(
                id=m["id"],
                name=m.get("name", m["id"]),
                slot_ids=tuple(m["slot_ids"]),
                description=m.get("description", ""),
            )
            for m in data.get("mechanisms", [])
        )
        items = tuple(
            EvidenceItem(
                id=i["id"],
                mechanism_id=i["mechanism_id"],
                source_citation=i.get("source_citation", ""),
                criteria=CriterionFlags(**{k: bool(v) for k, v in i.get("criteria", {}).items()}),
                note=i.get("note", ""),
            )
            for i in data.get("items", [])
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed corpus payload: {exc}") from exc
    return EvidenceCorpus(mechanisms, items, data.get("project_survey_note", ""))
