"""The fixed AGIL structure: pillars, cells, sub-function slots, boundaries.

Four pillars cross with four internal functions to give sixteen institutional
cells; each cell carries four binary sub-function slots (64 total). Six
boundaries between pillar pairs carry twelve directed interchange pathways,
each transporting the medium of its source pillar. All of it is closed,
immutable data, validated once at import time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ValidationError

PILLAR_CODES = ("A", "G", "I", "L")
KIND_CODES = ("A", "G", "I", "L")


@dataclass(frozen=True)
class Pillar:
    code: str
    name: str
    medium: str
    value_principle: str
    cybernetic_rank: int  # 1 = highest information (L) ... 4 = highest energy (A)


@dataclass(frozen=True)
class Cell:
    id: str  # "<parent>-<internal>", e.g. "I-G"
    parent: str
    internal: str
    institution_name: str
    governance_function: str


@dataclass(frozen=True)
class SubFunctionSlot:
    id: str  # "<cell_id>/<kind>", e.g. "A-G/G"
    cell_id: str
    kind: str
    diagnostic_question: str


@dataclass(frozen=True)
class DirectedPathway:
    from_pillar: str
    to_pillar: str
    medium: str
    required_flow: str

    @property
    def id(self) -> str:
        return f"{self.from_pillar}->{self.to_pillar}"


@dataclass(frozen=True)
class Boundary:
    id: str  # "X<->Y"
    pillar_a: str
    pillar_b: str
    producer_cell: str
    receiver_cell: str
    pathways: tuple[DirectedPathway, DirectedPathway] = field(default=None)  # type: ignore[assignment]


PILLARS: tuple[Pillar, ...] = (
    Pillar("A", "Economy", "money", "utility", 4),
    Pillar("G", "Polity", "power", "effectiveness", 3),
    Pillar("I", "Societal Community", "influence", "solidarity", 2),
    Pillar("L", "Fiduciary", "value-commitment", "integrity", 1),
)

PILLAR_BY_CODE: Mapping[str, Pillar] = {p.code: p for p in PILLARS}

# Display names used in pillar-level coverage tables.
PILLAR_TABLE_LABELS = {
    "A": "Economic (A)",
    "G": "Political (G)",
    "I": "Integration (I)",
    "L": "Fiduciary (L)",
}

# (institution name, condensed governance function) per cell, row-major A,G,I,L.
_CELL_DATA: dict[str, tuple[str, str]] = {
    "A-A": (
        "Investment-Capitalization",
        "Allocates capital, manages token economics, funds agent operations and ecosystem infrastructure",
    ),
    "A-G": (
        "Production",
        "Manages capability development, quality verification, and certification pipelines",
    ),
    "A-I": (
        "Entrepreneurial",
        "Governs innovation in capability combinations and integrates productive sub-units into new economic configurations",
    ),
    "A-L": (
        "Economic Commitments",
        "Maintains interoperability standards, protocol governance, and the commitments that sustain ecosystem participation",
    ),
    "G-A": (
        "Administrative & Resource",
        "Allocates governance resources, manages treasuries, funds institutional operations",
    ),
    "G-G": (
        "Executive Implementation",
        "Executes ecosystem-wide policy, manages incidents, monitors compliance, deploys responses",
    ),
    "G-I": (
        "Legislative & Party",
        "Enables collective goal-setting, proposal submission, stakeholder deliberation, and binding decisions",
    ),
    "G-L": (
        "Authority & Legitimation",
        "Provides the constitutional framework: machine-interpretable rules, boundaries, and amendment procedures",
    ),
    "I-A": (
        "Allocative & Interest",
        "Provides deliberation forums, interest-articulation channels, and claim-aggregation mechanisms",
    ),
    "I-G": (
        "Citizenship & Enforcement",
        "Confers membership standing, attaches rights and obligations, detects violations, applies graduated sanctions",
    ),
    "I-I": (
        "Judicial & Interpretive",
        "Adjudicates disputes, interprets governance rules, manages appeals, builds precedent registries",
    ),
    "I-L": (
        "Normative Base",
        "Maintains normative criteria for belonging, credential standards, and identity verification procedures",
    ),
    "L-A": (
        "Educational-Cultural",
        "Certifies agent competencies, labels capability quality, maintains training standards",
    ),
    "L-G": (
        "Kinship & Socialization",
        "Manages behavioral inheritance, onboarding protocols, and value transmission to new agents",
    ),
    "L-I": (
        "Moral & Communal",
        "Channels emergent moral regulation into structured processes with escalation pathways to human oversight",
    ),
    "L-L": (
        "Ultimate Cultural",
        "Preserves core human-aligned values through value anchors, monitors value drift, enables value revision",
    ),
}

# Fixed diagnostic question per sub-function kind.
KIND_QUESTIONS = {
    "A": "Does the cell possess the technical infrastructure and resources required to function?",
    "G": "Does the cell have operative mechanisms that actively pursue its governance function?",
    "I": "Is the cell coordinated with adjacent cells through media exchange and inter-institutional flows?",
    "L": "Are the cell's operations anchored in codified values, standards, or constitutional principles?",
}

KIND_TABLE_LABELS = {
    "A": "A (Infrastructure)",
    "G": "G (Operative mechanisms)",
    "I": "I (Inter-cell coordination)",
    "L": "L (Normative grounding)",
}

# Required-flow descriptions per directed pathway (boundary assessment rows).
_PATHWAY_FLOWS: dict[tuple[str, str], str] = {
    ("A", "G"): "Treasury funds enable governance mandates",
    ("G", "A"): "Governance mandates create operational frameworks for economic activity",
    ("A", "I"): "Economic investment in compliance produces new capability configurations",
    ("I", "A"): "Reputational standing grants access to cooperative networks",
    ("A", "L"): "Economic resources fund value-maintenance institutions",
    ("L", "A"): "Value-certified agents reduce transaction risk",
    ("G", "I"): "Binding governance decisions enforce normative order",
    ("I", "G"): "Community interest-demands reach governance for response",
    ("G", "L"): "Governance operationalizes value commitments as binding mandates",
    ("L", "G"): "Value-grounded legitimation backs governance authority",
    ("I", "L"): "Community solidarity generates demand for value maintenance",
    ("L", "I"): "Fiduciary value anchors provide normative content for community standards",
}

_BOUNDARY_PAIRS = (("A", "G"), ("A", "I"), ("A", "L"), ("G", "I"), ("G", "L"), ("I", "L"))


def enumerate_cells() -> list[Cell]:
    """The sixteen cells in row-major order (parent A,G,I,L then internal A,G,I,L)."""
    cells = []
    for parent in PILLAR_CODES:
        for internal in KIND_CODES:
            cell_id = f"{parent}-{internal}"
            name, function = _CELL_DATA[cell_id]
            cells.append(Cell(cell_id, parent, internal, name, function))
    return cells


def enumerate_slots() -> list[SubFunctionSlot]:
    """The 64 sub-function slots, cell-major then kind order A,G,I,L."""
    slots = []
    for cell in enumerate_cells():
        for kind in KIND_CODES:
            slots.append(
                SubFunctionSlot(f"{cell.id}/{kind}", cell.id, kind, KIND_QUESTIONS[kind])
            )
    return slots


def default_boundary_cells(pillar_a: str, pillar_b: str) -> tuple[str, str]:
    # Default producer/receiver for boundary X<->Y: the X-pillar cell facing Y,
    # and Y's self-referential cell (the only pairing the source material works out).
    return f"{pillar_a}-{pillar_b}", f"{pillar_b}-{pillar_b}"


def boundaries(cell_overrides: Optional[Mapping[str, tuple[str, str]]] = None) -> list[Boundary]:
    """The six interchange boundaries with their twelve directed pathways.

    ``cell_overrides`` maps boundary id to a (producer_cell, receiver_cell)
    pair, replacing the shipped default for that boundary.
    """
    cell_ids = {c.id for c in enumerate_cells()}
    result = []
    for a, b in _BOUNDARY_PAIRS:
        boundary_id = f"{a}<->{b}"
        producer, receiver = default_boundary_cells(a, b)
        if cell_overrides and boundary_id in cell_overrides:
            producer, receiver = cell_overrides[boundary_id]
            if producer not in cell_ids or receiver not in cell_ids:
                raise ValidationError(
                    f"boundary {boundary_id} override references unknown cell"
                )
        forward = DirectedPathway(a, b, PILLAR_BY_CODE[a].medium, _PATHWAY_FLOWS[(a, b)])
        reverse = DirectedPathway(b, a, PILLAR_BY_CODE[b].medium, _PATHWAY_FLOWS[(b, a)])
        result.append(Boundary(boundary_id, a, b, producer, receiver, (forward, reverse)))
    return result


def pathways() -> list[DirectedPathway]:
    return [p for boundary in boundaries() for p in boundary.pathways]


CELLS: tuple[Cell, ...] = tuple(enumerate_cells())
CELL_IDS: tuple[str, ...] = tuple(c.id for c in CELLS)
SLOTS: tuple[SubFunctionSlot, ...] = tuple(enumerate_slots())
SLOT_IDS: tuple[str, ...] = tuple(s.id for s in SLOTS)
SLOT_BY_ID: Mapping[str, SubFunctionSlot] = {s.id: s for s in SLOTS}
BOUNDARIES: tuple[Boundary, ...] = tuple(boundaries())
PATHWAY_IDS: tuple[str, ...] = tuple(p.id for b in BOUNDARIES for p in b.pathways)


def require_slot(slot_id: str) -> SubFunctionSlot:
    try:
        return SLOT_BY_ID[slot_id]
    except KeyError:
        raise ValidationError(f"unknown sub-function slot: {slot_id!r}") from None


def require_cell(cell_id: str) -> Cell:
    for cell in CELLS:
        if cell.id == cell_id:
            return cell
    raise ValidationError(f"unknown cell: {cell_id!r}")


def slots_of_cell(cell_id: str) -> list[str]:
    return [f"{cell_id}/{kind}" for kind in KIND_CODES]


# --- Pattern Variables ---------------------------------------------------

# Opposing pole pairs; a profile holds at most one pole per pair.
POLE_PAIRS: tuple[tuple[str, str], ...] = (
    ("affectivity", "affective-neutrality"),
    ("specificity", "diffuseness"),
    ("universalism", "particularism"),
    ("performance", "quality"),
)

# The source vocabulary uses two labels for each evaluation pole.
_POLE_ALIASES = {"achievement": "performance", "ascription": "quality"}

_PAIR_OF_POLE: dict[str, tuple[str, str]] = {}
for _pair in POLE_PAIRS:
    for _pole in _pair:
        _PAIR_OF_POLE[_pole] = _pair


def _canonical_pole(pole: str) -> str:
    normalized = _POLE_ALIASES.get(pole, pole)
    if normalized not in _PAIR_OF_POLE:
        raise ValidationError(f"unknown pattern-variable pole: {pole!r}")
    return normalized


def pair_id(pair: tuple[str, str]) -> str:
    return f"{pair[0]}<->{pair[1]}"


@dataclass(frozen=True)
class PatternVariableProfile:
    """A set of pattern-variable poles, at most one per opposing pair.

    ``extra_orientations`` carries orientations outside the four pairs
    (e.g. collectivity-orientation, which ranks systems rather than
    characterizing one).
    """

    poles: frozenset[str]
    extra_orientations: tuple[str, ...] = ()

    @classmethod
    def of(cls, *poles: str, extra: Sequence[str] = ()) -> "PatternVariableProfile":
        canonical = [_canonical_pole(p) for p in poles]
        seen_pairs: dict[tuple[str, str], str] = {}
        for pole in canonical:
            pair = _PAIR_OF_POLE[pole]
            if pair in seen_pairs and seen_pairs[pair] != pole:
                raise ValidationError(
                    f"profile holds both poles of pair {pair_id(pair)}"
                )
            seen_pairs[pair] = pole
        return cls(frozenset(canonical), tuple(extra))

    def pole_for(self, pair: tuple[str, str]) -> Optional[str]:
        for pole in pair:
            if pole in self.poles:
                return pole
        return None

    def merged_over(self, base: "PatternVariableProfile") -> "PatternVariableProfile":
        """This profile's poles override ``base`` pair by pair."""
        poles = set()
        for pair in POLE_PAIRS:
            pole = self.pole_for(pair) or base.pole_for(pair)
            if pole:
                poles.add(pole)
        extras = tuple(dict.fromkeys((*base.extra_orientations, *self.extra_orientations)))
        return PatternVariableProfile(frozenset(poles), extras)

    def as_dict(self) -> dict:
        return {
            "poles": sorted(self.poles),
            "extra_orientations": list(self.extra_orientations),
        }


# Default pillar profiles: one attitudinal and one object-categorization pole each.
PILLAR_PROFILES: Mapping[str, PatternVariableProfile] = {
    "A": PatternVariableProfile.of("specificity", "universalism"),
    "G": PatternVariableProfile.of("affectivity", "performance"),
    "I": PatternVariableProfile.of("diffuseness", "particularism"),
    "L": PatternVariableProfile.of("affective-neutrality", "quality"),
}

DIRECT_INHERITANCE = "direct-inheritance"
PRODUCTIVE_INVERSION = "productive-inversion"


@dataclass(frozen=True)
class CellProfile:
    cell_id: str
    role_expectations: PatternVariableProfile
    classification: str
    inverted_dimensions: tuple[str, ...]


def derive_cell_profile(cell: Cell | str, requirement: PatternVariableProfile) -> CellProfile:
    """Classify a cell as direct inheritance or productive inversion.

    Compares the parent pillar's default profile against the supplied
    internal-function requirement, pair by pair. Any pair where the two
    sources hold opposing poles is an inverted dimension; the cell is a
    productive inversion iff at least one dimension inverts. Role
    expectations merge the requirement over the parent profile.
    """
    cell_obj = require_cell(cell) if isinstance(cell, str) else cell
    parent_profile = PILLAR_PROFILES[cell_obj.parent]
    inverted = []
    for pair in POLE_PAIRS:
        parent_pole = parent_profile.pole_for(pair)
        required_pole = requirement.pole_for(pair)
        if parent_pole and required_pole and parent_pole != required_pole:
            inverted.append(pair_id(pair))
    classification = PRODUCTIVE_INVERSION if inverted else DIRECT_INHERITANCE
    return CellProfile(
        cell_id=cell_obj.id,
        role_expectations=requirement.merged_over(parent_profile),
        classification=classification,
        inverted_dimensions=tuple(inverted),
    )


def as_dict() -> dict:
    """Full taxonomy dump for the introspection CLI and the HTTP API."""
    return {
        "pillars": [
            {
                "code": p.code,
                "name": p.name,
                "medium": p.medium,
                "value_principle": p.value_principle,
                "cybernetic_rank": p.cybernetic_rank,
            }
            for p in PILLARS
        ],
        "cells": [
            {
                "id": c.id,
                "parent": c.parent,
                "internal": c.internal,
                "institution_name": c.institution_name,
                "governance_function": c.governance_function,
            }
            for c in CELLS
        ],
        "slots": [
            {
                "id": s.id,
                "cell_id": s.cell_id,
                "kind": s.kind,
                "diagnostic_question": s.diagnostic_question,
            }
            for s in SLOTS
        ],
        "boundaries": [
            {
                "id": b.id,
                "producer_cell": b.producer_cell,
                "receiver_cell": b.receiver_cell,
                "pathways": [
                    {
                        "id": p.id,
                        "from_pillar": p.from_pillar,
                        "to_pillar": p.to_pillar,
                        "medium": p.medium,
                        "required_flow": p.required_flow,
                    }
                    for p in b.pathways
                ],
            }
            for b in BOUNDARIES
        ],
        "pillar_profiles": {code: prof.as_dict() for code, prof in PILLAR_PROFILES.items()},
    }


def _assert_closed() -> None:
    # Structural closure, checked once at import.
    assert len(PILLARS) == 4
    assert len({p.code for p in PILLARS}) == 4
    assert len({p.medium for p in PILLARS}) == 4
    assert [p.code for p in sorted(PILLARS, key=lambda p: p.cybernetic_rank)] == ["L", "I", "G", "A"]
    assert len(CELLS) == 16
    assert len(set(CELL_IDS)) == 16
    assert len(SLOTS) == 64
    assert len(BOUNDARIES) == 6
    assert len(PATHWAY_IDS) == 12
    for boundary in BOUNDARIES:
        for pathway in boundary.pathways:
            assert pathway.medium == PILLAR_BY_CODE[pathway.from_pillar].medium


_assert_closed()
