"""Acceptance suite: one test per exit criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v`` (or ``-s`` for the
criterion lines). Every tolerance and time bound is pinned here.
"""

from __future__ import annotations

import json
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from agilaudit import datasets, taxonomy
from agilaudit.api import create_app
from agilaudit.coverage import compute_coverage, interpret
from agilaudit.document import document_to_dict
from agilaudit.media import aggregate_media, capability_check, correction_loop
from agilaudit.pipeline import run_pipeline
from agilaudit.frameworks import collective_coverage, principle_gaps, strong_count
from agilaudit.reliability import AgreementMatrix, reliability_stats, stats_from_matrix
from agilaudit.reporting import export_bundle, heatmap_matrix
from agilaudit.scoring import (
    ABSENT,
    PRESENT,
    BorderlineCase,
    ScoreSheet,
    SheetEntry,
    apply_scenario,
)
from agilaudit.store import DocumentStore
from agilaudit.taxonomy import (
    DIRECT_INHERITANCE,
    PRODUCTIVE_INVERSION,
    PatternVariableProfile,
    derive_cell_profile,
)
from conftest import make_sheet, random_sheet

GOLDEN = Path(__file__).parent / "data" / "openclaw-bundle.golden.json"


def _pass(line: str) -> None:
    print(f"PASS: {line}")


def test_table_6_7_reproduction(openclaw_sheet):
    start = time.monotonic()
    report = compute_coverage(openclaw_sheet, "baseline")
    by_type = {k: v.present for k, v in report.by_type.items()}
    assert by_type == {"A": 9, "G": 3, "I": 0, "L": 0}
    assert all(report.by_type[k].total == 16 for k in by_type)
    assert report.total.present == 12 and report.total.total == 64
    assert report.total.pct == 19
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    _pass(
        "baseline by-type coverage {A:9, G:3, I:0, L:0}, total 12/64 displayed 19% "
        f"({elapsed:.3f}s)"
    )


def test_table_8_reproduction(openclaw_sheet, registry):
    start = time.monotonic()
    baseline = compute_coverage(openclaw_sheet, "baseline")
    assert {k: v.present for k, v in baseline.by_pillar.items()} == {
        "A": 5, "G": 3, "I": 3, "L": 1,
    }
    strict_sheet = apply_scenario(openclaw_sheet, registry, "strict")
    generous_sheet = apply_scenario(openclaw_sheet, registry, "generous")
    strict = compute_coverage(strict_sheet, "strict")
    generous = compute_coverage(generous_sheet, "generous")
    assert strict.total.present == 11 and strict.total.pct == 17
    assert generous.total.present == 19 and generous.total.pct == 30
    # Scenario sheets produced solely by the shipped 8-case registry.
    assert len(registry) == 8
    baseline_set = openclaw_sheet.present_slots()
    assert strict_sheet.present_slots() == baseline_set - {"G-I/A"}
    assert generous_sheet.present_slots() == baseline_set | {
        "L-I/G", "I-G/I", "A-A/G", "A-I/G", "I-L/G", "A-L/G", "G-G/I",
    }
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    _pass(f"pillar baseline {{A:5,G:3,I:3,L:1}}, strict 11 (17%), generous 19 (30%) ({elapsed:.3f}s)")


def test_pillar_ordering_robustness(openclaw_sheet, registry):
    for scenario in ("strict", "baseline", "generous"):
        sheet = apply_scenario(openclaw_sheet, registry, scenario)
        counts = {
            k: v.present for k, v in compute_coverage(sheet, scenario).by_pillar.items()
        }
        assert counts["L"] < min(counts["A"], counts["G"], counts["I"]), scenario
        assert counts["G"] <= counts["I"], scenario
    _pass("pillar ordering: L strictly minimal and G <= I in all three scenarios")


def test_table_9_reproduction(openclaw_doc, openclaw_sheet):
    counts = aggregate_media(openclaw_doc.media_assessment)
    assert counts == {"functional": 0, "proto": 3, "absent": 9}
    results = capability_check(openclaw_sheet)
    assert len(results) == 12
    assert sum(1 for r in results if r.capable) == 0
    for result in results:
        assert any(reason.slot_id.endswith("/I") for reason in result.blocked_reasons)
    _pass("media aggregate {functional:0, proto:3, absent:9}; 0/12 capable, all citing a missing I-sub")


def test_correction_loop_check(openclaw_sheet):
    incident = datasets.load_reference("clawhavoc-incident")
    steps = correction_loop(openclaw_sheet, incident)
    statuses = {s.step: s.status for s in steps}
    assert statuses == {
        "value-classification": "blocked",
        "normative-enforcement": "partial",
        "policy-evolution": "blocked",
        "economic-sanction": "blocked",
    }
    _pass("correction loop: blocked / partial / blocked / blocked under the G-sub readiness rule")


def test_table_2a_reproduction():
    matrices = {fc.framework_id: fc for fc in datasets.framework_matrices()}
    expected = {"nist": 3, "cltc": 3, "imda": 4, "cets-225": 12, "eu-ai-act": 11}
    assert {fid: strong_count(fc) for fid, fc in matrices.items()} == expected
    gaps = collective_coverage(list(matrices.values()))["universal_gaps"]
    assert gaps == {"A-A", "L-G"}
    pair = collective_coverage([matrices["cets-225"], matrices["cltc"]])
    assert len(pair["covered_cells"]) == 14
    assert pair["universal_gaps"] == {"A-A", "L-G"}
    _pass("strong counts NIST 3 / CLTC 3 / IMDA 4 / CETS 12 / EU 11; universal gaps {A-A, L-G}; CETS+CLTC = 14")


def test_ostrom_gap_set():
    gaps = principle_gaps(datasets.ostrom_mapping())
    assert gaps == {"A-A", "A-G", "A-L", "I-L", "L-A", "L-G", "L-I", "L-L"}
    _pass("design-principle gap set equals the eight unaddressed cells")


def test_reliability_properties():
    start = time.monotonic()
    # (a) hand-oracle 2x2 example to 1e-9.
    stats = stats_from_matrix(AgreementMatrix(10, 2, 2, 50))
    assert abs(float(stats.kappa) - 0.794872) < 1e-6
    assert abs(float(stats.kappa) - 31 / 39) < 1e-9
    assert float(stats.pabak) == 0.875
    # (b) identical non-degenerate sheets.
    present = set(list(taxonomy.SLOT_IDS)[:12])
    identical = reliability_stats(make_sheet(present, "r1"), make_sheet(present, "r2"))
    assert identical.kappa == 1
    # (c) all-absent pair.
    degenerate = reliability_stats(make_sheet(set(), "r1"), make_sheet(set(), "r2"))
    assert degenerate.kappa is None and degenerate.pabak == 1
    # (d) randomized property test over 1,000 sheet pairs.
    rng = random.Random(424242)
    for _ in range(1000):
        a = random_sheet(rng, p=rng.random(), rater_id="r1")
        b = random_sheet(rng, p=rng.random(), rater_id="r2")
        forward = reliability_stats(a, b)
        backward = reliability_stats(b, a)
        assert forward.pabak == 2 * forward.p_o - 1
        if forward.kappa is not None:
            assert Fraction(-1) <= forward.kappa <= Fraction(1)
        assert forward.kappa == backward.kappa
        assert forward.matrix.a_only == backward.matrix.b_only
    elapsed = time.monotonic() - start
    assert elapsed < 5.0
    _pass(f"reliability: oracle match, kappa=1, undefined-kappa sentinel, 1000-pair properties ({elapsed:.2f}s)")


def test_structural_property_suite():
    start = time.monotonic()
    rng = random.Random(31337)
    rank = {ABSENT: 0, PRESENT: 1}
    for i in range(1000):
        sheet = random_sheet(rng, p=rng.random(), rater_id="consensus")
        report = compute_coverage(sheet, "baseline")
        type_sum = sum(line.present for line in report.by_type.values())
        pillar_sum = sum(line.present for line in report.by_pillar.values())
        assert type_sum == pillar_sum == report.total.present
        # Heatmap-sum equality.
        grid = heatmap_matrix(sheet)["grid"]
        assert sum(sum(row) for row in grid) == report.total.present
        # Scenario monotonicity with a random registry.
        registry = []
        for slot_id in rng.sample(list(taxonomy.SLOT_IDS), 6):
            baseline = sheet.value_of(slot_id)
            strict = ABSENT if rng.random() < 0.5 else baseline
            generous = PRESENT if rng.random() < 0.5 else baseline
            if rank[strict] <= rank[baseline] <= rank[generous]:
                registry.append(BorderlineCase(slot_id, baseline, strict, generous))
        strict_set = apply_scenario(sheet, registry, "strict").present_slots()
        baseline_set = apply_scenario(sheet, registry, "baseline").present_slots()
        generous_set = apply_scenario(sheet, registry, "generous").present_slots()
        assert strict_set <= baseline_set <= generous_set
        # Capability monotonicity under a slot addition (sampled).
        if i % 10 == 0:
            capable_before = {
                r.pathway_id for r in capability_check(sheet) if r.capable
            }
            absent_slots = [
                s for s in taxonomy.SLOT_IDS if s not in sheet.present_slots()
            ]
            if absent_slots:
                grown = make_sheet(
                    sheet.present_slots() | {rng.choice(absent_slots)},
                    rater_id="consensus",
                )
                capable_after = {
                    r.pathway_id for r in capability_check(grown) if r.capable
                }
                assert capable_before <= capable_after
    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    _pass(f"structural properties over 1000 random sheets ({elapsed:.2f}s)")


def test_dual_source_classifier():
    requirements = datasets.load_reference("pattern-variable-requirements")
    a_a = derive_cell_profile("A-A", requirements["A-A"])
    assert a_a.classification == DIRECT_INHERITANCE
    assert a_a.inverted_dimensions == ()
    i_i = derive_cell_profile("I-I", requirements["I-I"])
    assert i_i.classification == PRODUCTIVE_INVERSION
    assert set(i_i.inverted_dimensions) == {
        "universalism<->particularism",
        "specificity<->diffuseness",
    }
    _pass("dual-source: A-A direct inheritance; I-I inverts exactly the reference/scope pairs")


def test_determinism_and_golden_file(openclaw_doc):
    pinned = "2026-03-31T00:00:00Z"
    first = export_bundle(run_pipeline(openclaw_doc, generated_at=pinned))
    second = export_bundle(run_pipeline(openclaw_doc, generated_at=pinned))
    assert first == second
    assert first.encode("utf-8") == second.encode("utf-8")
    golden = GOLDEN.read_text(encoding="utf-8").rstrip("\n")
    assert first == golden
    _pass("export is byte-identical across runs and matches the golden bundle")


def _entries_payload(sheet: ScoreSheet) -> list[dict]:
    return [
        {
            "slot_id": e.slot_id,
            "value": e.value,
            "rationale": e.rationale,
            "borderline": e.borderline,
        }
        for e in sheet.entries
    ]


def test_service_sequence_over_http(tmp_path, openclaw_doc, openclaw_sheet):
    client = TestClient(create_app(DocumentStore(tmp_path)))

    # Create.
    r = client.post(
        "/api/v1/audits",
        json={
            "audit_id": "openclaw",
            "ecosystem": {"name": "OpenClaw", "design_class": "undesigned"},
        },
    )
    assert r.status_code == 201

    # Score: two raters disagreeing on three slots around the shipped consensus.
    baseline_present = openclaw_sheet.present_slots()
    rater_one = make_sheet(
        baseline_present | {"L-I/G", "G-A/A", "I-G/I"}, "r1", "openclaw"
    )
    rater_two = make_sheet(baseline_present, "r2", "openclaw")
    for sheet in (rater_one, rater_two):
        r = client.post(
            "/api/v1/audits/openclaw/sheets",
            json={"rater_id": sheet.rater_id, "entries": _entries_payload(sheet)},
        )
        assert r.status_code == 200

    # Stale write: re-PUT against an outdated revision must 409.
    doc = client.get("/api/v1/audits/openclaw").json()
    stale = doc["revision"] - 1
    r = client.put("/api/v1/audits/openclaw", json=doc, headers={"If-Match": str(stale)})
    assert r.status_code == 409
    assert r.json()["code"] == "conflict"

    # Reconcile two of the three disputes; the third takes the conservative default.
    queue = client.get("/api/v1/audits/openclaw/disagreements").json()
    assert {d["slot_id"] for d in queue["disagreements"]} == {"L-I/G", "G-A/A", "I-G/I"}
    for slot_id, criterion in (("L-I/G", "C1"), ("G-A/A", "C1")):
        r = client.post(
            "/api/v1/audits/openclaw/reconciliations",
            json={
                "slot_id": slot_id,
                "resolved_value": "absent",
                "criterion_cited": criterion,
            },
        )
        assert r.status_code == 200

    # Attach the shipped borderline registry via a current-revision PUT.
    doc = client.get("/api/v1/audits/openclaw").json()
    doc["borderline_registry"] = [
        {
            "slot_id": case.slot_id,
            "baseline_value": case.baseline_value,
            "strict_value": case.strict_value,
            "generous_value": case.generous_value,
            "rationale": case.rationale,
        }
        for case in openclaw_doc.borderline_registry
    ]
    r = client.put(
        "/api/v1/audits/openclaw", json=doc, headers={"If-Match": str(doc["revision"])}
    )
    assert r.status_code == 200

    # Report: consensus reproduces the published pillar totals.
    report = client.get("/api/v1/audits/openclaw/report?generated_at=pinned").json()
    totals = {
        scenario: report["scenarios"][scenario]["coverage"]["total"]["present"]
        for scenario in ("baseline", "strict", "generous")
    }
    assert totals == {"baseline": 12, "strict": 11, "generous": 19}
    baseline_pillars = {
        k: v["present"]
        for k, v in report["scenarios"]["baseline"]["coverage"]["by_pillar"].items()
    }
    assert baseline_pillars == {"A": 5, "G": 3, "I": 3, "L": 1}
    _pass("HTTP create -> score -> stale-write 409 -> reconcile -> report reproduces pillar totals")
