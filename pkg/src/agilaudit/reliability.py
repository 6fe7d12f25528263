"""Inter-rater agreement statistics: 2x2 matrix, Cohen's kappa, PABAK.

Arithmetic is exact (fractions.Fraction); reports render to six decimal
places. Kappa is undefined when expected agreement is 1 (degenerate
marginals) and is reported as a distinct sentinel, never coerced to 0 or 1.
PABAK (2*p_o - 1) stays defined in every case.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from fractions import Fraction
from typing import Optional

from . import taxonomy
from .errors import ValidationError
from .scoring import PRESENT, ScoreSheet, require_complete

# Interpretation bands (half-open; an exact boundary value takes the higher band).
LANDIS_KOCH_BANDS = (
    (Fraction(0), "poor"),
    (Fraction(1, 5), "slight"),
    (Fraction(2, 5), "fair"),
    (Fraction(3, 5), "moderate"),
    (Fraction(4, 5), "substantial"),
    (None, "almost perfect"),
)


def interpretation_label(kappa: Fraction) -> str:
    if kappa < 0:
        return "poor"
    if kappa < Fraction(1, 5):
        return "slight"
    if kappa < Fraction(2, 5):
        return "fair"
    if kappa < Fraction(3, 5):
        return "moderate"
    if kappa < Fraction(4, 5):
        return "substantial"
    return "almost perfect"


@dataclass(frozen=True)
class AgreementMatrix:
    both_present: int
    a_only: int
    b_only: int
    both_absent: int

    def __post_init__(self) -> None:
        for count in (self.both_present, self.a_only, self.b_only, self.both_absent):
            if count < 0:
                raise ValidationError("agreement counts must be non-negative")
        if self.n == 0:
            raise ValidationError("agreement matrix is empty")

    @property
    def n(self) -> int:
        return self.both_present + self.a_only + self.b_only + self.both_absent

    def as_dict(self) -> dict:
        return {
            "both_present": self.both_present,
            "a_only": self.a_only,
            "b_only": self.b_only,
            "both_absent": self.both_absent,
            "n": self.n,
        }


@dataclass(frozen=True)
class ReliabilityStats:
    matrix: AgreementMatrix
    p_o: Fraction
    p_e: Fraction
    kappa: Optional[Fraction]  # None iff p_e == 1
    pabak: Fraction
    interpretation: str

    def as_dict(self) -> dict:
        return {
            "matrix": self.matrix.as_dict(),
            "p_o": render6(self.p_o),
            "p_e": render6(self.p_e),
            "kappa": render6(self.kappa) if self.kappa is not None else None,
            "kappa_defined": self.kappa is not None,
            "pabak": render6(self.pabak),
            "interpretation": self.interpretation,
        }


def render6(value: Fraction) -> str:
    """Render an exact rational to six decimal places, half-up."""
    dec = Decimal(value.numerator) / Decimal(value.denominator)
    return str(dec.quantize(Decimal("0.000001"), rounding=ROUND_HALF_UP))


def stats_from_matrix(matrix: AgreementMatrix) -> ReliabilityStats:
    n = matrix.n
    p_o = Fraction(matrix.both_present + matrix.both_absent, n)
    a_present = matrix.both_present + matrix.a_only
    b_present = matrix.both_present + matrix.b_only
    a_absent = n - a_present
    b_absent = n - b_present
    p_e = Fraction(a_present * b_present + a_absent * b_absent, n * n)
    if p_e == 1:
        kappa: Optional[Fraction] = None
        label = "undefined (degenerate marginals)"
    else:
        kappa = (p_o - p_e) / (1 - p_e)
        label = interpretation_label(kappa)
    pabak = 2 * p_o - 1
    return ReliabilityStats(matrix, p_o, p_e, kappa, pabak, label)


def agreement_matrix(
    a: ScoreSheet, b: ScoreSheet, slot_filter: str = "all"
) -> AgreementMatrix:
    """Build the 2x2 matrix over all slots or one pillar's sixteen."""
    if a.audit_id != b.audit_id:
        raise ValidationError("sheets belong to different audits")
    require_complete(a)
    require_complete(b)
    slot_ids = _filtered_slots(slot_filter)
    return _matrix_over(a, b, slot_ids)


def _filtered_slots(slot_filter: str) -> list[str]:
    if slot_filter == "all":
        return list(taxonomy.SLOT_IDS)
    if slot_filter in taxonomy.PILLAR_CODES:
        slots = [s.id for s in taxonomy.SLOTS if s.cell_id.startswith(f"{slot_filter}-")]
        return slots
    raise ValidationError(f"slot filter must be 'all' or a pillar code, got {slot_filter!r}")


def _matrix_over(a: ScoreSheet, b: ScoreSheet, slot_ids: list[str]) -> AgreementMatrix:
    if not slot_ids:
        raise ValidationError("slot filter selected no slots")
    a_map, b_map = a.by_slot, b.by_slot
    both_present = a_only = b_only = both_absent = 0
    for slot_id in slot_ids:
        a_present = a_map[slot_id].value == PRESENT
        b_present = b_map[slot_id].value == PRESENT
        if a_present and b_present:
            both_present += 1
        elif a_present:
            a_only += 1
        elif b_present:
            b_only += 1
        else:
            both_absent += 1
    return AgreementMatrix(both_present, a_only, b_only, both_absent)


def reliability_stats(
    a: ScoreSheet, b: ScoreSheet, slot_filter: str = "all"
) -> ReliabilityStats:
    return stats_from_matrix(agreement_matrix(a, b, slot_filter))


def reliability_stats_over_slots(
    a: ScoreSheet, b: ScoreSheet, slot_ids: list[str]
) -> ReliabilityStats:
    """Stats over an explicit slot subset (live view over dually-scored slots)."""
    if a.audit_id != b.audit_id:
        raise ValidationError("sheets belong to different audits")
    return stats_from_matrix(_matrix_over(a, b, slot_ids))


# Agreement values reported by the reference study. The underlying dual-rater
# sheets are unpublished, so these are citations, never computed assertions.
CITED_REFERENCE_KAPPA = {
    "overall": "0.82",
    "per_pillar": {"A": "0.84", "G": "0.76", "I": "0.83", "L": "0.88"},
    "provenance": "cited, not computed",
}
