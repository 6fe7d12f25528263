from __future__ import annotations

import random

import pytest

from agilaudit import taxonomy
from agilaudit.errors import ValidationError
from agilaudit.scoring import (
    ABSENT,
    BASELINE,
    BorderlineCase,
    GENEROUS,
    PRESENT,
    ReconciliationRecord,
    STRICT,
    ScoreSheet,
    SheetEntry,
    apply_scenario,
    diff_sheets,
    reconcile,
)
from conftest import make_sheet, random_sheet


def test_sheet_rejects_bad_value_and_duplicates():
    with pytest.raises(ValidationError):
        ScoreSheet("r", "a", (SheetEntry("A-A/A", "maybe"),))
    with pytest.raises(ValidationError):
        ScoreSheet("r", "a", (SheetEntry("A-A/A", PRESENT), SheetEntry("A-A/A", ABSENT)))


def test_diff_identical_sheets_is_empty():
    a = make_sheet({"A-A/A"}, "r1")
    b = make_sheet({"A-A/A"}, "r2")
    assert diff_sheets(a, b) == []


def test_diff_single_slot():
    a = make_sheet({"G-A/A"}, "r1")
    b = make_sheet(set(), "r2")
    diffs = diff_sheets(a, b)
    assert [d.slot_id for d in diffs] == ["G-A/A"]
    assert diffs[0].values == {"r1": PRESENT, "r2": ABSENT}


def test_diff_complementary_sheets_is_all_64():
    all_slots = set(taxonomy.SLOT_IDS)
    a = make_sheet(all_slots, "r1")
    b = make_sheet(set(), "r2")
    assert len(diff_sheets(a, b)) == 64


def test_diff_requires_complete_sheets():
    a = make_sheet(set(), "r1")
    partial = ScoreSheet("r2", "test", a.entries[:10])
    with pytest.raises(ValidationError):
        diff_sheets(a, partial)


def test_diff_requires_same_audit():
    a = make_sheet(set(), "r1", audit_id="one")
    b = make_sheet(set(), "r2", audit_id="two")
    with pytest.raises(ValidationError):
        diff_sheets(a, b)


def test_reconcile_with_record_takes_resolved_value():
    a = make_sheet({"L-I/G"}, "r1")
    b = make_sheet(set(), "r2")
    record = ReconciliationRecord(
        "L-I/G", {"r1": PRESENT, "r2": ABSENT}, ABSENT, "C1", "criteria not satisfied"
    )
    consensus = reconcile(a, b, [record])
    assert consensus.value_of("L-I/G") == ABSENT
    assert consensus.rater_id == "consensus"


def test_reconcile_without_record_takes_conservative_default():
    a = make_sheet({"A-A/A"}, "r1")
    b = make_sheet(set(), "r2")
    consensus = reconcile(a, b, [])
    assert consensus.value_of("A-A/A") == ABSENT


def test_reconcile_identical_sheets_returns_inputs():
    a = make_sheet({"A-A/A", "G-G/G"}, "r1")
    b = make_sheet({"A-A/A", "G-G/G"}, "r2")
    consensus = reconcile(a, b, [])
    assert consensus.present_slots() == a.present_slots()


def test_reconcile_is_idempotent_on_consensus():
    a = make_sheet({"A-A/A"}, "r1")
    b = make_sheet({"A-A/A", "I-G/G"}, "r2")
    consensus = reconcile(a, b, [])
    again = reconcile(consensus, consensus, [])
    assert again.present_slots() == consensus.present_slots()
    assert [e.value for e in again.entries] == [e.value for e in consensus.entries]


def test_reconcile_rejects_record_on_agreed_slot():
    a = make_sheet({"A-A/A"}, "r1")
    b = make_sheet({"A-A/A"}, "r2")
    record = ReconciliationRecord("A-A/A", {"r1": PRESENT, "r2": PRESENT}, PRESENT, "C1")
    with pytest.raises(ValidationError):
        reconcile(a, b, [record])


def test_reconcile_unions_borderline_flags():
    entries_a = tuple(
        SheetEntry(s, ABSENT, borderline=(s == "A-A/G")) for s in taxonomy.SLOT_IDS
    )
    entries_b = tuple(
        SheetEntry(s, ABSENT, borderline=(s == "L-I/G")) for s in taxonomy.SLOT_IDS
    )
    consensus = reconcile(
        ScoreSheet("r1", "test", entries_a), ScoreSheet("r2", "test", entries_b), []
    )
    flags = {e.slot_id: e.borderline for e in consensus.entries}
    assert flags["A-A/G"] and flags["L-I/G"]
    assert not flags["A-A/A"]


def test_record_resolved_value_must_match_rater_or_default():
    with pytest.raises(ValidationError):
        ReconciliationRecord("A-A/A", {"r1": ABSENT, "r2": ABSENT}, PRESENT, "C1")


def test_borderline_case_ordering_enforced():
    with pytest.raises(ValidationError):
        BorderlineCase("A-A/G", ABSENT, PRESENT, PRESENT)  # strict > baseline
    with pytest.raises(ValidationError):
        BorderlineCase("A-A/G", PRESENT, PRESENT, ABSENT)  # generous < baseline


def test_apply_scenario_empty_registry_is_identity():
    sheet = make_sheet({"A-A/A"}, "consensus")
    for scenario in (STRICT, BASELINE, GENEROUS):
        result = apply_scenario(sheet, [], scenario)
        assert result.present_slots() == sheet.present_slots()


def test_apply_scenario_rejects_baseline_mismatch():
    sheet = make_sheet(set(), "consensus")
    case = BorderlineCase("G-I/A", PRESENT, ABSENT, PRESENT)
    with pytest.raises(ValidationError):
        apply_scenario(sheet, [case], STRICT)


def test_apply_scenario_touches_only_registry_slots(rng):
    sheet = random_sheet(rng, rater_id="consensus")
    slots = rng.sample(list(taxonomy.SLOT_IDS), 6)
    registry = []
    for slot_id in slots:
        baseline = sheet.value_of(slot_id)
        registry.append(
            BorderlineCase(
                slot_id,
                baseline_value=baseline,
                strict_value=ABSENT,
                generous_value=PRESENT,
            )
        )
    for scenario in (STRICT, GENEROUS):
        result = apply_scenario(sheet, registry, scenario)
        for slot_id in taxonomy.SLOT_IDS:
            if slot_id not in slots:
                assert result.value_of(slot_id) == sheet.value_of(slot_id)


def test_scenario_monotonicity_with_random_registries(rng):
    rank = {ABSENT: 0, PRESENT: 1}
    for _ in range(50):
        sheet = random_sheet(rng, rater_id="consensus")
        slots = rng.sample(list(taxonomy.SLOT_IDS), rng.randrange(0, 10))
        registry = []
        for slot_id in slots:
            baseline = sheet.value_of(slot_id)
            strict = ABSENT if rng.random() < 0.7 else baseline
            generous = PRESENT if rng.random() < 0.7 else baseline
            if not (rank[strict] <= rank[baseline] <= rank[generous]):
                continue
            registry.append(BorderlineCase(slot_id, baseline, strict, generous))
        strict_set = apply_scenario(sheet, registry, STRICT).present_slots()
        baseline_set = apply_scenario(sheet, registry, BASELINE).present_slots()
        generous_set = apply_scenario(sheet, registry, GENEROUS).present_slots()
        assert strict_set <= baseline_set <= generous_set
