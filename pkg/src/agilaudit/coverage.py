"""Coverage aggregation, interpretation thresholds, and the design-class prediction.

Counts roll up by sub-function kind and by pillar; the accounting identity
(sum by kind == sum by pillar == total) holds for every sheet. Percentages
display as round-half-up integers; threshold comparisons always use exact
rationals, never the rounded display value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from . import taxonomy
from .errors import ValidationError
from .scoring import PRESENT, ScoreSheet, require_complete

UNDESIGNED = "undesigned"
DESIGNED = "designed"
DESIGN_CLASSES = (UNDESIGNED, DESIGNED)

UNDERSERVED_BOUND = Fraction(1, 4)  # pillar coverage strictly below 25%
FALSIFICATION_BOUND = Fraction(1, 2)  # both L and G strictly above 50%


def display_pct(present: int, total: int) -> int:
    """Integer percentage, round half up (5/16 -> 31, 3/16 -> 19, 1/16 -> 6)."""
    scaled = Fraction(100 * present, total)
    return int(scaled + Fraction(1, 2)) if scaled >= 0 else -int(-scaled + Fraction(1, 2))


@dataclass(frozen=True)
class CoverageLine:
    present: int
    total: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.present, self.total)

    @property
    def pct(self) -> int:
        return display_pct(self.present, self.total)

    def as_dict(self) -> dict:
        return {"present": self.present, "total": self.total, "pct": self.pct}


@dataclass(frozen=True)
class CoverageReport:
    scenario: str
    by_type: dict  # kind -> CoverageLine over 16 slots
    by_pillar: dict  # pillar -> CoverageLine over 16 slots
    total: CoverageLine

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "by_type": {k: v.as_dict() for k, v in self.by_type.items()},
            "by_pillar": {k: v.as_dict() for k, v in self.by_pillar.items()},
            "total": self.total.as_dict(),
        }


def compute_coverage(sheet: ScoreSheet, scenario_label: str = "baseline") -> CoverageReport:
    require_complete(sheet)
    present = sheet.present_slots()
    by_type = {kind: 0 for kind in taxonomy.KIND_CODES}
    by_pillar = {code: 0 for code in taxonomy.PILLAR_CODES}
    for slot_id in present:
        slot = taxonomy.SLOT_BY_ID[slot_id]
        by_type[slot.kind] += 1
        by_pillar[slot.cell_id[0]] += 1
    return CoverageReport(
        scenario=scenario_label,
        by_type={k: CoverageLine(v, 16) for k, v in by_type.items()},
        by_pillar={k: CoverageLine(v, 16) for k, v in by_pillar.items()},
        total=CoverageLine(len(present), 64),
    )


PILLAR_UNDERSERVED = "pillar-underserved"
NO_SOCIAL_SYSTEM = "no-social-system"
NO_NORMATIVE_GROUNDING = "no-normative-grounding"


@dataclass(frozen=True)
class Finding:
    code: str
    subject: str  # pillar code or "global"
    detail: str

    def as_dict(self) -> dict:
        return {"code": self.code, "subject": self.subject, "detail": self.detail}


def interpret(report: CoverageReport) -> list[Finding]:
    """Threshold findings: underserved pillars, missing coordination/grounding."""
    findings = []
    for pillar in taxonomy.PILLAR_CODES:
        line = report.by_pillar[pillar]
        if line.ratio < UNDERSERVED_BOUND:
            findings.append(
                Finding(
                    PILLAR_UNDERSERVED,
                    pillar,
                    f"pillar {pillar} coverage {line.present}/{line.total} ({line.pct}%) is below 25%",
                )
            )
    if report.by_type["I"].present == 0:
        findings.append(
            Finding(
                NO_SOCIAL_SYSTEM,
                "global",
                "zero inter-cell coordination sub-functions: not yet a functioning social system",
            )
        )
    if report.by_type["L"].present == 0:
        findings.append(
            Finding(
                NO_NORMATIVE_GROUNDING,
                "global",
                "zero normative-grounding sub-functions: no codified value anchoring",
            )
        )
    return findings


HOLDS = "holds"
WEAKENED = "weakened"
FALSIFIED = "falsified"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class PredictionVerdict:
    ecosystem_id: str
    design_class: str
    l_pct: Fraction
    g_pct: Fraction
    verdict: str

    def as_dict(self) -> dict:
        return {
            "ecosystem_id": self.ecosystem_id,
            "design_class": self.design_class,
            "l_pct": display_pct(self.l_pct.numerator, self.l_pct.denominator)
            if self.l_pct.denominator
            else 0,
            "g_pct": display_pct(self.g_pct.numerator, self.g_pct.denominator),
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class EcosystemReport:
    ecosystem_id: str
    design_class: str
    report: CoverageReport

    def __post_init__(self) -> None:
        if self.design_class not in DESIGN_CLASSES:
            raise ValidationError(f"unknown design class: {self.design_class!r}")


def _classify(l_pct: Fraction, g_pct: Fraction) -> str:
    if l_pct < UNDERSERVED_BOUND and g_pct < UNDERSERVED_BOUND:
        return HOLDS
    if l_pct > FALSIFICATION_BOUND and g_pct > FALSIFICATION_BOUND:
        return FALSIFIED
    return WEAKENED


def evaluate_prediction(reports: list[EcosystemReport]) -> dict:
    """Per-ecosystem verdicts on the under-investment prediction plus a study summary.

    Undesigned ecosystems with both L and G below 25% support the prediction;
    both above 50% falsify it; anything between weakens it. Designed
    ecosystems are out of scope (not-applicable). The study-level verdict is
    only issued for the canonical four-undesigned-ecosystem comparison.
    """
    if not reports:
        raise ValidationError("evaluate_prediction requires at least one report")
    verdicts = []
    for item in reports:
        l_line = item.report.by_pillar["L"]
        g_line = item.report.by_pillar["G"]
        l_pct, g_pct = l_line.ratio, g_line.ratio
        if item.design_class == DESIGNED:
            verdict = NOT_APPLICABLE
        else:
            verdict = _classify(l_pct, g_pct)
        verdicts.append(
            PredictionVerdict(item.ecosystem_id, item.design_class, l_pct, g_pct, verdict)
        )
    undesigned = [v for v in verdicts if v.design_class == UNDESIGNED]
    holds_count = sum(1 for v in undesigned if v.verdict == HOLDS)
    summary: dict = {
        "undesigned_count": len(undesigned),
        "holds": holds_count,
        "weakened": sum(1 for v in undesigned if v.verdict == WEAKENED),
        "falsified": sum(1 for v in undesigned if v.verdict == FALSIFIED),
    }
    if len(undesigned) == 4:
        summary["prediction_holds"] = holds_count >= 3
        summary["note"] = "threshold: holds in at least three of four undesigned ecosystems"
    else:
        summary["prediction_holds"] = None
        summary["note"] = (
            "descriptive only: the study-level verdict is defined for exactly four undesigned ecosystems"
        )
    return {"verdicts": verdicts, "summary": summary}
