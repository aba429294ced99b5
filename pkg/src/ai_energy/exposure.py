"""Task -> occupation -> industry AI exposure.

Ordinal automation scores are binarized under three thresholds, averaged
into occupation exposure, rolled up the SOC hierarchy and finally weighted
by occupation-in-industry wage bills.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .diagnostics import note
from .ingest import AUTOMATION_SCORES, TaskExposureRecord
from .variants import VARIANTS, Variant

USD_PER_BB = 1e9


@dataclass(frozen=True)
class OccupationExposure:
    soc_code: str
    exposure: float

    def __post_init__(self):
        if not 0.0 <= self.exposure <= 1.0:
            raise ValueError(f"exposure for {self.soc_code} outside [0, 1]: {self.exposure}")


@dataclass(frozen=True)
class IndustryExposure:
    """Exposed and total wage bill of one industry, in $BB of base-year USD.

    ``code`` is a NAICS-4 code before concordance and a WIOD code after.
    """

    code: str
    exposed_wage_bill: float
    total_wage_bill: float

    def __post_init__(self):
        if self.exposed_wage_bill < 0 or self.exposed_wage_bill > self.total_wage_bill * (1 + 1e-12):
            raise ValueError(
                f"{self.code}: exposed wage bill {self.exposed_wage_bill} outside [0, {self.total_wage_bill}]"
            )

    @property
    def exposure_rate(self) -> float:
        if self.total_wage_bill <= 0:
            return 0.0
        return min(self.exposed_wage_bill / self.total_wage_bill, 1.0)


def binarize(score: float, variant: Variant) -> int:
    if score not in AUTOMATION_SCORES:
        raise ValueError(f"inadmissible automation score {score}")
    variant = Variant(variant)
    if variant is Variant.CENTRAL:
        return int(score > 0.5)
    if variant is Variant.LOWER:
        return int(score == 1.0)
    return int(score > 0.0)


def occupation_exposure(tasks: Sequence[TaskExposureRecord], variant: Variant) -> OccupationExposure:
    """Share of an occupation's tasks that are exposed under ``variant``."""
    if not tasks:
        raise ValueError("occupation_exposure needs at least one task")
    codes = {t.soc8 for t in tasks}
    if len(codes) != 1:
        raise ValueError(f"tasks span several occupations: {sorted(codes)}")
    exposed = sum(binarize(t.automation_score, variant) for t in tasks)
    return OccupationExposure(codes.pop(), exposed / len(tasks))


def occupation_exposures(tasks: Iterable[TaskExposureRecord], variant: Variant) -> list[OccupationExposure]:
    by_soc: dict[str, list[TaskExposureRecord]] = defaultdict(list)
    for t in tasks:
        by_soc[t.soc8].append(t)
    return [occupation_exposure(by_soc[soc], variant) for soc in sorted(by_soc)]


def rollup_soc(occ: Iterable[OccupationExposure], target_digits: int) -> list[OccupationExposure]:
    """Simple (unweighted) average of member exposures per SOC prefix."""
    if target_digits not in (6, 5):
        raise ValueError(f"target_digits must be 6 or 5, got {target_digits}")
    groups: dict[str, list[float]] = defaultdict(list)
    for o in occ:
        if not o.soc_code.isdigit() or len(o.soc_code) <= target_digits:
            raise ValueError(f"cannot roll {o.soc_code!r} up to {target_digits} digits")
        groups[o.soc_code[:target_digits]].append(o.exposure)
    return [OccupationExposure(code, sum(v) / len(v)) for code, v in sorted(groups.items())]


def resolve_exposure(soc_code: str, occ6: Mapping[str, float], occ5: Mapping[str, float]) -> float:
    """6-digit exact match, then 5-digit prefix, else zero."""
    if len(soc_code) >= 6 and soc_code[:6] in occ6:
        return occ6[soc_code[:6]]
    if soc_code[:5] in occ5:
        return occ5[soc_code[:5]]
    return 0.0


def industry_exposure(
    occ6: Iterable[OccupationExposure],
    occ5: Iterable[OccupationExposure],
    wages: Mapping[tuple[str, str], float],
    diagnostics: list | None = None,
) -> list[IndustryExposure]:
    """Wage-bill weighted exposure per NAICS-4 industry.

    ``wages`` maps (soc_code, naics4) to the averaged base-year wage bill in
    USD; results are reported in $BB.
    """
    if not wages:
        raise ValueError("wage table is empty")
    t6 = {o.soc_code: o.exposure for o in occ6}
    t5 = {o.soc_code: o.exposure for o in occ5}
    exposed: dict[str, float] = defaultdict(float)
    total: dict[str, float] = defaultdict(float)
    for (soc, naics4), wage in sorted(wages.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        exposed[naics4] += resolve_exposure(soc, t6, t5) * wage
        total[naics4] += wage
    out = []
    for naics4 in sorted(total):
        if total[naics4] <= 0:
            note(diagnostics, "exposure", naics4, "zero total wage bill; exposure rate set to 0")
        out.append(IndustryExposure(naics4, exposed[naics4] / USD_PER_BB, total[naics4] / USD_PER_BB))
    return out


def exposure_tables(
    tasks: Sequence[TaskExposureRecord],
    wages: Mapping[tuple[str, str], float],
    diagnostics: list | None = None,
) -> dict[Variant, list[IndustryExposure]]:
    """NAICS-4 exposure for all three variants."""
    tables = {}
    for variant in VARIANTS:
        occ8 = occupation_exposures(tasks, variant)
        occ6 = rollup_soc(occ8, 6)
        occ5 = rollup_soc(occ6, 5)
        # only report zero-wage industries once
        tables[variant] = industry_exposure(
            occ6, occ5, wages, diagnostics if variant is Variant.CENTRAL else None
        )
    return tables


def write_exposure_audit(tables: Mapping[Variant, Sequence[IndustryExposure]], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["naics4", "variant", "exposed_wage_bill", "total_wage_bill", "exposure_rate"])
        rows = [(ie.code, v, ie) for v in VARIANTS for ie in tables.get(v, ())]
        for code, v, ie in sorted(rows, key=lambda r: (r[0], VARIANTS.index(r[1]))):
            w.writerow([code, v.value, repr(ie.exposed_wage_bill), repr(ie.total_wage_bill), repr(ie.exposure_rate)])
