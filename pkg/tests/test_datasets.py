from __future__ import annotations

import pytest

from agilaudit import datasets, taxonomy
from agilaudit.errors import NotFoundError
from agilaudit.evidence import ABSENT, C2A_ACCEPTED, C2B_REQUIRED, CriterionPolicy, PRESENT, evaluate_presence, validate_corpus
from agilaudit.taxonomy import DIRECT_INHERITANCE, PRODUCTIVE_INVERSION, derive_cell_profile


def test_every_dataset_loads_and_validates():
    for dataset_id in datasets.DATASET_IDS:
        envelope = datasets.load_envelope(dataset_id)
        assert envelope.payload is not None
        assert envelope.confidence in ("paper-explicit", "editor-interpreted")


def test_unknown_dataset_raises():
    with pytest.raises(NotFoundError):
        datasets.load_reference("no-such-dataset")


def test_baseline_sheet_aggregates(openclaw_sheet):
    assert openclaw_sheet.complete
    assert len(openclaw_sheet.present_slots()) == 12


def test_baseline_sheet_borderline_flags(openclaw_sheet):
    flagged = {e.slot_id for e in openclaw_sheet.entries if e.borderline}
    assert flagged == {
        "L-I/G", "G-I/A", "I-G/I", "A-A/G", "A-I/G", "I-L/G", "A-L/G", "G-G/I",
    }


def test_contested_slot_kept_present_with_rationale(openclaw_sheet):
    entry = openclaw_sheet.by_slot["L-I/A"]
    assert entry.value == PRESENT
    assert "contested" in entry.rationale


def test_registry_has_eight_cases(registry):
    assert len(registry) == 8
    strict_flips = [c for c in registry if c.baseline_value != c.strict_value]
    generous_flips = [c for c in registry if c.baseline_value != c.generous_value]
    assert [c.slot_id for c in strict_flips] == ["G-I/A"]
    assert len(generous_flips) == 7


def test_media_assessment_shape():
    assessment = datasets.media_assessment()
    assert len(assessment) == 12
    proto = [s for s in assessment if s.status == "proto-functional"]
    assert {s.pathway_id for s in proto} == {"A->G", "A->I", "I->L"}
    emergent = next(s for s in assessment if s.pathway_id == "I->L")
    assert emergent.flavor == "proto-emergent"
    assert sum(1 for s in assessment if s.status == "functional") == 0


def test_framework_matrices_confidence():
    for fc in datasets.framework_matrices():
        assert fc.confidence == "paper-explicit"
    haip = datasets.load_reference("haip-framework")
    assert haip.confidence == "editor-interpreted"
    layers = datasets.load_reference("table12-layers")
    assert all(layer.confidence == "editor-interpreted" for layer in layers)
    assert len(layers) == 5


def test_requirement_profiles_classify_as_expected():
    requirements = datasets.load_reference("pattern-variable-requirements")
    assert set(requirements) == {"A-A", "I-I", "L-G", "A-G", "G-I"}
    expectations = {
        "A-A": DIRECT_INHERITANCE,
        "I-I": PRODUCTIVE_INVERSION,
        "L-G": DIRECT_INHERITANCE,
        "A-G": DIRECT_INHERITANCE,
        "G-I": DIRECT_INHERITANCE,
    }
    for cell_id, requirement in requirements.items():
        profile = derive_cell_profile(cell_id, requirement)
        assert profile.classification == expectations[cell_id], cell_id


def test_openclaw_document_is_internally_consistent(openclaw_doc):
    openclaw_doc.validate()
    assert openclaw_doc.revision == 1
    assert validate_corpus(openclaw_doc.corpus) == []
    assert openclaw_doc.ecosystem.design_class == "undesigned"
    assert len(openclaw_doc.borderline_registry) == 8
    assert len(openclaw_doc.media_assessment) == 12


def test_shipped_corpus_tier_policy_difference(openclaw_doc):
    # The legislative-infrastructure slot is evidence with a designed but
    # never-invoked mechanism: absent under the default invocation tier,
    # present when design-level specification is accepted.
    corpus = openclaw_doc.corpus
    strict = evaluate_presence(corpus, "G-I/A", CriterionPolicy(C2B_REQUIRED))
    relaxed = evaluate_presence(corpus, "G-I/A", CriterionPolicy(C2A_ACCEPTED))
    assert strict.value == ABSENT
    assert relaxed.value == PRESENT
    assert "moltdao-voting" in relaxed.satisfying_mechanisms


def test_shipped_corpus_supports_solid_slots(openclaw_doc):
    corpus = openclaw_doc.corpus
    for slot_id in ("A-A/A", "A-G/G", "G-G/G", "I-G/G", "I-L/A", "L-I/A"):
        assert evaluate_presence(corpus, slot_id).value == PRESENT, slot_id
    for slot_id in ("I-A/A", "L-L/L", "G-L/A"):
        assert evaluate_presence(corpus, slot_id).value == ABSENT, slot_id


def test_incident_record():
    incident = datasets.load_reference("clawhavoc-incident")
    assert incident.id == "clawhavoc"
    assert "1,184" in incident.description
