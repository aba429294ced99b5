"""Log-linear trend projection of industry accounts.

Each (industry, variable) series is fitted by ordinary least squares of
``ln(value)`` on year over a historical window and extrapolated to a target
year. Intensities are then recomputed from the projected accounts and the
impact estimate is re-run on them.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .diagnostics import note
from .exposure import IndustryExposure
from .impact import (
    AggregateImpact,
    ImpactRow,
    aggregate,
    impact_from_output_change,
    industry_impact,
    intensities,
)
from .ingest import IndustryAccount
from .shock import productivity_shock
from .variants import VARIANTS, Band, Variant

VARIABLES = ("output", "energy", "emissions")
DEFAULT_WINDOW = (2000, 2014)
DEFAULT_TARGET_YEAR = 2023


class UnfittableSeries(ValueError):
    def __init__(self, wiod_code: str, variable: str, points: int):
        self.wiod_code = wiod_code
        self.variable = variable
        super().__init__(f"{wiod_code}/{variable}: only {points} positive point(s) in window, need 2")


@dataclass(frozen=True)
class TrendFit:
    """``ln(value) = intercept + slope * (year - origin)``, origin being the window start."""

    wiod_code: str
    variable: str
    intercept: float
    slope: float
    window: tuple[int, int]
    points: int
    r_squared: float

    @property
    def origin(self) -> int:
        return self.window[0]


def fit_loglinear(
    series: Mapping[int, float],
    window: tuple[int, int] = DEFAULT_WINDOW,
    wiod_code: str = "",
    variable: str = "",
) -> TrendFit:
    start, end = window
    pts = sorted((year, value) for year, value in series.items() if start <= year <= end and value > 0)
    if len({year for year, _ in pts}) < 2:
        raise UnfittableSeries(wiod_code, variable, len(pts))
    n = len(pts)
    # center years at the window midpoint for conditioning
    mid = (start + end) / 2.0
    xs = [year - mid for year, _ in pts]
    ys = [math.log(value) for _, value in pts]
    x_bar = sum(xs) / n
    y_bar = sum(ys) / n
    sxx = sum((x - x_bar) ** 2 for x in xs)
    sxy = sum((x - x_bar) * (y - y_bar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    level_at_mid = y_bar - slope * x_bar
    intercept = level_at_mid - slope * (mid - start)

    ss_tot = sum((y - y_bar) ** 2 for y in ys)
    ss_res = sum((y - (level_at_mid + slope * x)) ** 2 for x, y in zip(xs, ys))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return TrendFit(wiod_code, variable, intercept, slope, (start, end), n, r_squared)


def project(fit: TrendFit, target_year: int) -> float:
    return math.exp(fit.intercept + fit.slope * (target_year - fit.origin))


def fit_accounts(
    history: Iterable[IndustryAccount],
    window: tuple[int, int] = DEFAULT_WINDOW,
    diagnostics: list | None = None,
) -> dict[str, dict[str, TrendFit]]:
    """Fit every variable of every industry; unfittable industries are left out with a diagnostic."""
    series: dict[str, dict[str, dict[int, float]]] = defaultdict(lambda: {v: {} for v in VARIABLES})
    for acc in history:
        for v in VARIABLES:
            series[acc.wiod_code][v][acc.year] = getattr(acc, v)
    fits = {}
    for code in sorted(series):
        try:
            fits[code] = {v: fit_loglinear(series[code][v], window, code, v) for v in VARIABLES}
        except UnfittableSeries as exc:
            note(diagnostics, "projection", code, f"excluded from projection: {exc}")
    return fits


def project_accounts(fits: Mapping[str, Mapping[str, TrendFit]], target_year: int) -> list[IndustryAccount]:
    return [
        IndustryAccount(code, target_year, *(project(fits[code][v], target_year) for v in VARIABLES))
        for code in sorted(fits)
    ]


@dataclass(frozen=True)
class ProjectedImpact:
    accounts: tuple[IndustryAccount, ...]
    rows: tuple[ImpactRow, ...]
    aggregate: AggregateImpact
    excluded: tuple[str, ...]


def projected_impact(
    fits: Mapping[str, Mapping[str, TrendFit]],
    exposure: Mapping[Variant, Iterable[IndustryExposure]],
    phi,
    target_year: int = DEFAULT_TARGET_YEAR,
    hold_output_change: Mapping[str, Band] | None = None,
    diagnostics: list | None = None,
) -> ProjectedImpact:
    """Re-estimate impacts with accounts projected to ``target_year``.

    By default the shock is recomputed against projected output. Passing
    ``hold_output_change`` (industry -> output-change band from the reference
    run) keeps those output changes and only swaps in projected intensities.
    """
    by_variant = {v: {ie.code: ie for ie in exposure[v]} for v in VARIANTS}
    codes = sorted(by_variant[Variant.CENTRAL])
    excluded = [c for c in codes if c not in fits]
    for code in excluded:
        note(diagnostics, "projection", code, "no projected accounts; industry left out of projected impact")

    accounts = project_accounts({c: fits[c] for c in codes if c in fits}, target_year)
    rows = []
    for acc in accounts:
        intens = intensities(acc, diagnostics)
        if hold_output_change is not None:
            rows.append(impact_from_output_change(acc.wiod_code, hold_output_change[acc.wiod_code], intens))
            continue
        exposed = Band.from_mapping({v: by_variant[v][acc.wiod_code].exposed_wage_bill for v in VARIANTS})
        shock = productivity_shock(acc.wiod_code, exposed, acc.output, phi)
        rows.append(industry_impact(shock, acc, intens))
    return ProjectedImpact(tuple(accounts), tuple(rows), aggregate(rows), tuple(excluded))


def write_fit_diagnostics(fits: Mapping[str, Mapping[str, TrendFit]], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["wiod_code", "variable", "origin_year", "intercept", "slope", "r_squared", "points_used"])
        for code in sorted(fits):
            for v in VARIABLES:
                f = fits[code][v]
                w.writerow([code, v, f.origin, repr(f.intercept), repr(f.slope), repr(f.r_squared), f.points])
