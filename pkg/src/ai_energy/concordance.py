"""NAICS-4 -> ISIC Rev. 4 -> WIOD-55 industry concordance.

Each NAICS-4 code goes to the single ISIC division it co-occurs with most
often (winner-take-all), and ISIC divisions are grouped into the 55 WIOD
industries retained by the model (code U is not among them).
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .diagnostics import note
from .exposure import IndustryExposure
from .ingest import CrosswalkEntry, DatasetError

EXCLUDED_WIOD_CODES = frozenset({"U"})


class ConcordanceError(ValueError):
    pass


def resolve_crosswalk(entries: Iterable[CrosswalkEntry], diagnostics: list | None = None) -> dict[str, str]:
    """Largest-share match of each NAICS-4 code to one ISIC-2 division.

    Ties go to the lexicographically smallest ISIC code and are reported.
    """
    counts: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    for e in entries:
        counts[e.naics4][e.isic2] += e.occurrence_count
    if not counts:
        raise ConcordanceError("crosswalk is empty")

    resolved = {}
    unresolved = []
    for naics4 in sorted(counts):
        options = counts[naics4]
        best = max(options.values())
        if best == 0:
            unresolved.append(naics4)
            continue
        winners = sorted(isic for isic, n in options.items() if n == best)
        if len(winners) > 1:
            note(diagnostics, "concordance", naics4, f"tie between ISIC {winners} at {best}; chose {winners[0]}")
        resolved[naics4] = winners[0]
    if unresolved:
        raise ConcordanceError(f"NAICS codes with only zero-count crosswalk entries: {unresolved}")
    return resolved


def load_isic_wiod(path=None) -> dict[str, str]:
    """Read the (isic2, wiod_code) grouping table; defaults to the bundled one."""
    if path is None:
        source = resources.files("ai_energy.data").joinpath("isic_wiod.csv")
        text = source.read_text(encoding="utf-8")
        path = "isic_wiod.csv"
    else:
        path = Path(path)
        if not path.is_file():
            raise DatasetError("file not found", path)
        text = path.read_text(encoding="utf-8")
    reader = csv.DictReader(text.splitlines())
    if reader.fieldnames is None or sorted(reader.fieldnames) != ["isic2", "wiod_code"]:
        raise DatasetError(f"expected columns (isic2, wiod_code), got {reader.fieldnames}", path)
    mapping = {}
    for row_number, row in enumerate(reader, start=2):
        isic, wiod = row["isic2"].strip(), row["wiod_code"].strip()
        if isic in mapping:
            raise DatasetError(f"ISIC {isic} listed twice", path, row_number, "isic2")
        if wiod in EXCLUDED_WIOD_CODES:
            raise DatasetError(f"WIOD code {wiod} is excluded from the model", path, row_number, "wiod_code")
        mapping[isic] = wiod
    return mapping


@dataclass(frozen=True)
class IndustryMap:
    naics_to_isic: Mapping[str, str]
    isic_to_wiod: Mapping[str, str]

    @property
    def wiod_codes(self) -> list[str]:
        return sorted(set(self.isic_to_wiod.values()))

    def wiod_for(self, naics4: str) -> str:
        try:
            isic = self.naics_to_isic[naics4]
        except KeyError:
            raise ConcordanceError(f"NAICS {naics4} has no crosswalk entry") from None
        try:
            return self.isic_to_wiod[isic]
        except KeyError:
            raise ConcordanceError(f"ISIC {isic} (from NAICS {naics4}) has no WIOD grouping") from None

    def resolved(self, naics_codes: Iterable[str]) -> dict[str, str]:
        return {n: self.wiod_for(n) for n in sorted(naics_codes)}


def aggregate_to_wiod(ind: Iterable[IndustryExposure], imap: IndustryMap) -> list[IndustryExposure]:
    """Sum NAICS-4 exposed and total wage bills into every WIOD industry."""
    exposed: dict[str, float] = dict.fromkeys(imap.wiod_codes, 0.0)
    total: dict[str, float] = dict.fromkeys(imap.wiod_codes, 0.0)
    for ie in sorted(ind, key=lambda ie: ie.code):
        wiod = imap.wiod_for(ie.code)
        exposed[wiod] += ie.exposed_wage_bill
        total[wiod] += ie.total_wage_bill
    return [IndustryExposure(code, exposed[code], total[code]) for code in sorted(total)]


def write_map_audit(imap: IndustryMap, naics_codes: Iterable[str], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["naics4", "isic2", "wiod_code"])
        for naics4, wiod in imap.resolved(naics_codes).items():
            w.writerow([naics4, imap.naics_to_isic[naics4], wiod])
