"""External-framework coverage matrices and gap computations.

Each framework assigns one of strong/partial/none to all sixteen cells.
Strong counts, collective coverage, and universal gaps derive from the
matrices; tier classification is declared data validated only for the
stated association (a value-level tier (c) framework should ground the
apex cell strongly).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import taxonomy
from .errors import ValidationError

STRONG = "strong"
PARTIAL = "partial"
NONE = "none"
LEVELS = (STRONG, PARTIAL, NONE)

TIERS = ("a", "b", "c", "unclassified")

PAPER_EXPLICIT = "paper-explicit"
EDITOR_INTERPRETED = "editor-interpreted"


@dataclass(frozen=True)
class FrameworkCoverage:
    framework_id: str
    name: str
    levels: Mapping[str, str]  # cell id -> strong | partial | none
    declared_tier: str = "unclassified"
    confidence: str = PAPER_EXPLICIT
    note: str = ""

    def __post_init__(self) -> None:
        if set(self.levels) != set(taxonomy.CELL_IDS):
            missing = set(taxonomy.CELL_IDS) - set(self.levels)
            extra = set(self.levels) - set(taxonomy.CELL_IDS)
            raise ValidationError(
                f"framework {self.framework_id}: coverage map must span all 16 cells"
                f" (missing {sorted(missing)}, unknown {sorted(extra)})"
            )
        for cell_id, level in self.levels.items():
            if level not in LEVELS:
                raise ValidationError(
                    f"framework {self.framework_id}: bad level {level!r} at {cell_id}"
                )
        if self.declared_tier not in TIERS:
            raise ValidationError(f"unknown tier: {self.declared_tier!r}")

    def as_dict(self) -> dict:
        return {
            "framework_id": self.framework_id,
            "name": self.name,
            "levels": {cell: self.levels[cell] for cell in taxonomy.CELL_IDS},
            "declared_tier": self.declared_tier,
            "confidence": self.confidence,
            "note": self.note,
        }


def coverage_from_dict(data: dict) -> FrameworkCoverage:
    try:
        return FrameworkCoverage(
            framework_id=data["framework_id"],
            name=data.get("name", data["framework_id"]),
            levels=dict(data["levels"]),
            declared_tier=data.get("declared_tier", "unclassified"),
            confidence=data.get("confidence", PAPER_EXPLICIT),
            note=data.get("note", ""),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed framework coverage: {exc}") from exc


def strong_count(fc: FrameworkCoverage) -> int:
    return sum(1 for level in fc.levels.values() if level == STRONG)


def covered_cells(fc: FrameworkCoverage) -> set[str]:
    return {cell for cell, level in fc.levels.items() if level != NONE}


def collective_coverage(frameworks: Iterable[FrameworkCoverage]) -> dict:
    """Cells covered by any framework vs. cells uncovered by all of them."""
    frameworks = list(frameworks)
    if not frameworks:
        raise ValidationError("collective_coverage requires at least one framework")
    covered: set[str] = set()
    for fc in frameworks:
        covered |= covered_cells(fc)
    gaps = set(taxonomy.CELL_IDS) - covered
    return {"covered_cells": covered, "universal_gaps": gaps}


def tier_warnings(frameworks: Iterable[FrameworkCoverage]) -> list[str]:
    # Tier (c) frameworks supply value-level content; expect a strong apex cell.
    warnings = []
    for fc in frameworks:
        if fc.declared_tier == "c" and fc.levels.get("L-L") != STRONG:
            warnings.append(
                f"framework {fc.framework_id}: declared tier (c) but L-L is not strong"
            )
    return warnings


@dataclass(frozen=True)
class PrincipleMapping:
    principle_id: str
    title: str
    mapped_cells: tuple[str, ...]
    note: str = ""

    def __post_init__(self) -> None:
        if not self.mapped_cells:
            raise ValidationError(f"principle {self.principle_id} maps no cells")
        for cell_id in self.mapped_cells:
            taxonomy.require_cell(cell_id)

    def as_dict(self) -> dict:
        return {
            "principle_id": self.principle_id,
            "title": self.title,
            "mapped_cells": list(self.mapped_cells),
            "note": self.note,
        }


def mapping_from_dict(data: dict) -> PrincipleMapping:
    try:
        return PrincipleMapping(
            principle_id=data["principle_id"],
            title=data.get("title", data["principle_id"]),
            mapped_cells=tuple(data["mapped_cells"]),
            note=data.get("note", ""),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed principle mapping: {exc}") from exc


def principle_gaps(mappings: Iterable[PrincipleMapping]) -> set[str]:
    """Cells no design principle addresses."""
    mapped: set[str] = set()
    for mapping in mappings:
        mapped |= set(mapping.mapped_cells)
    return set(taxonomy.CELL_IDS) - mapped
