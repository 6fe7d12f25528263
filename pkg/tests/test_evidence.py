from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from agilaudit.errors import ValidationError
from agilaudit.evidence import (
    ABSENT,
    C2A_ACCEPTED,
    C2B_REQUIRED,
    CriterionFlags,
    CriterionPolicy,
    EvidenceCorpus,
    EvidenceItem,
    Mechanism,
    PRESENT,
    evaluate_presence,
    validate_corpus,
)


def corpus_of(*mechanisms_with_items):
    mechanisms = tuple(m for m, _ in mechanisms_with_items)
    items = tuple(item for _, items in mechanisms_with_items for item in items)
    return EvidenceCorpus(mechanisms, items)


def item(item_id, mech_id, **flags):
    return EvidenceItem(item_id, mech_id, "src", CriterionFlags(**flags))


def test_cve_style_mechanism_is_present():
    corpus = corpus_of(
        (
            Mechanism("cve", "CVE management", ("G-G/G",)),
            [item("e1", "cve", c1=True, c2b=True, c3=True)],
        )
    )
    result = evaluate_presence(corpus, "G-G/G")
    assert result.value == PRESENT
    assert result.satisfying_mechanisms == ("cve",)


def test_general_purpose_forum_fails_c1_and_c3():
    corpus = corpus_of(
        (
            Mechanism("forum", "general-purpose forum", ("G-I/A",)),
            [item("e1", "forum", c1=False, c2b=True, c3=False)],
        )
    )
    assert evaluate_presence(corpus, "G-I/A").value == ABSENT


def test_empty_corpus_is_absent_everywhere():
    assert evaluate_presence(EvidenceCorpus(), "A-A/A").value == ABSENT


def test_invocation_tier_policy():
    corpus = corpus_of(
        (
            Mechanism("designed", "designed mechanism", ("G-I/A",)),
            [item("e1", "designed", c1=True, c2a=True, c2b=False, c3=True)],
        )
    )
    assert evaluate_presence(corpus, "G-I/A", CriterionPolicy(C2B_REQUIRED)).value == ABSENT
    assert evaluate_presence(corpus, "G-I/A", CriterionPolicy(C2A_ACCEPTED)).value == PRESENT


def test_criteria_combine_across_items_of_one_mechanism():
    # A spec document establishes C1 while an incident report establishes C2b.
    corpus = corpus_of(
        (
            Mechanism("m", "mechanism", ("I-G/G",)),
            [
                item("spec", "m", c1=True, c3=True),
                item("incident", "m", c2b=True),
            ],
        )
    )
    assert evaluate_presence(corpus, "I-G/G").value == PRESENT


def test_criteria_never_combine_across_mechanisms():
    corpus = corpus_of(
        (Mechanism("m1", "one", ("I-G/G",)), [item("e1", "m1", c1=True, c3=True)]),
        (Mechanism("m2", "two", ("I-G/G",)), [item("e2", "m2", c2b=True)]),
    )
    assert evaluate_presence(corpus, "I-G/G").value == ABSENT


def test_unknown_slot_raises():
    with pytest.raises(ValidationError):
        evaluate_presence(EvidenceCorpus(), "Z-Z/A")


def test_unknown_tier_raises():
    with pytest.raises(ValidationError):
        CriterionPolicy("c2c")


def test_validate_corpus_clean():
    corpus = corpus_of(
        (Mechanism("m", "mechanism", ("A-A/A",)), [item("e", "m", c1=True)])
    )
    assert validate_corpus(corpus) == []


def test_validate_corpus_dangling_reference():
    corpus = EvidenceCorpus(items=(item("e", "ghost", c1=True),))
    codes = [d.code for d in validate_corpus(corpus)]
    assert "dangling-reference" in codes


def test_validate_corpus_duplicate_ids_and_no_evidence():
    corpus = EvidenceCorpus(
        mechanisms=(
            Mechanism("m", "one", ("A-A/A",)),
            Mechanism("m", "two", ("A-A/G",)),
        )
    )
    codes = [d.code for d in validate_corpus(corpus)]
    assert codes.count("duplicate-id") == 1
    assert "no-evidence" in codes


@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_adding_evidence_is_monotone(seed):
    rng = random.Random(seed)
    slots = ("A-A/A", "G-G/G", "I-I/I", "L-L/L")

    def random_corpus(n_items):
        mechanisms = tuple(
            Mechanism(f"m{i}", f"m{i}", (rng.choice(slots),)) for i in range(3)
        )
        items = tuple(
            item(
                f"e{i}",
                f"m{rng.randrange(3)}",
                c1=rng.random() < 0.5,
                c2a=rng.random() < 0.5,
                c2b=rng.random() < 0.5,
                c3=rng.random() < 0.5,
            )
            for i in range(n_items)
        )
        return EvidenceCorpus(mechanisms, items)

    smaller = random_corpus(3)
    larger = EvidenceCorpus(
        smaller.mechanisms,
        smaller.items
        + (item("extra", "m0", c1=True, c2a=True, c2b=True, c3=True),),
    )
    for slot in slots:
        before = evaluate_presence(smaller, slot).value
        after = evaluate_presence(larger, slot).value
        assert not (before == PRESENT and after == ABSENT)
        # Policy monotonicity: the relaxed tier never loses a presence.
        strict_value = evaluate_presence(smaller, slot, CriterionPolicy(C2B_REQUIRED)).value
        relaxed_value = evaluate_presence(smaller, slot, CriterionPolicy(C2A_ACCEPTED)).value
        assert not (strict_value == PRESENT and relaxed_value == ABSENT)


def test_order_independence(rng):
    mechanisms = (
        Mechanism("m1", "one", ("A-A/A",)),
        Mechanism("m2", "two", ("A-A/A",)),
    )
    items = (
        item("e1", "m1", c1=True, c3=True),
        item("e2", "m1", c2b=True),
        item("e3", "m2", c1=True, c2b=True, c3=True),
    )
    forward = evaluate_presence(EvidenceCorpus(mechanisms, items), "A-A/A")
    shuffled = evaluate_presence(
        EvidenceCorpus(tuple(reversed(mechanisms)), tuple(reversed(items))), "A-A/A"
    )
    assert forward.value == shuffled.value
    assert forward.satisfying_mechanisms == shuffled.satisfying_mechanisms
