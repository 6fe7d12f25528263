from __future__ import annotations

import random

import pytest

from agilaudit import datasets, taxonomy
from agilaudit.scoring import ABSENT, PRESENT, ScoreSheet, SheetEntry


def make_sheet(present_slots, rater_id="r1", audit_id="test"):
    entries = tuple(
        SheetEntry(slot_id, PRESENT if slot_id in present_slots else ABSENT)
        for slot_id in taxonomy.SLOT_IDS
    )
    return ScoreSheet(rater_id, audit_id, entries)


def random_sheet(rng: random.Random, p=0.3, rater_id="r1", audit_id="test"):
    present = {slot_id for slot_id in taxonomy.SLOT_IDS if rng.random() < p}
    return make_sheet(present, rater_id, audit_id)


@pytest.fixture(scope="session")
def openclaw_doc():
    return datasets.openclaw_document()


@pytest.fixture(scope="session")
def openclaw_sheet():
    return datasets.openclaw_sheet()


@pytest.fixture(scope="session")
def registry():
    return datasets.borderline_registry()


@pytest.fixture()
def rng():
    return random.Random(20260810)
