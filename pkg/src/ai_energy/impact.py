"""Output, energy and emissions changes, per industry and economy-wide.

For each industry and exposure variant::

    dy = y * shock          ($BB)
    dE = nu * dy            (PJ,     nu = energy / output)
    dC = mu * dE            (ktCO2,  mu = emissions / energy)

Intensities are held at their reference-year values (partial equilibrium).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .diagnostics import note
from .ingest import IndustryAccount
from .shock import ProductivityShock
from .variants import Band

PJ_PER_TWH = 3.6
HOURS_PER_YEAR = 8760.0
KT_PER_GT = 1e6


class ImpactError(ValueError):
    pass


@dataclass(frozen=True)
class Intensities:
    wiod_code: str
    energy_intensity: float  # PJ per $BB
    emissions_intensity: float  # ktCO2 per PJ


@dataclass(frozen=True)
class ImpactRow:
    wiod_code: str
    delta_output: Band  # $BB
    delta_energy: Band  # PJ
    delta_emissions: Band  # ktCO2

    def band(self, quantity: str) -> Band:
        return getattr(self, f"delta_{quantity}")


@dataclass(frozen=True)
class AggregateImpact:
    delta_energy: Band  # PJ
    delta_emissions: Band  # ktCO2
    delta_output: Band = Band.zero()  # $BB


def intensities(account: IndustryAccount, diagnostics: list | None = None) -> Intensities:
    if account.output > 0:
        nu = account.energy / account.output
    else:
        nu = 0.0
        note(diagnostics, "impact", account.wiod_code, "zero output; energy intensity set to 0")
    if account.energy > 0:
        mu = account.emissions / account.energy
    else:
        mu = 0.0
        note(diagnostics, "impact", account.wiod_code, "zero energy use; emissions intensity set to 0")
    return Intensities(account.wiod_code, nu, mu)


def industry_impact(shock: ProductivityShock, account: IndustryAccount, intens: Intensities) -> ImpactRow:
    if not shock.wiod_code == account.wiod_code == intens.wiod_code:
        raise ImpactError(
            f"industry code mismatch: shock {shock.wiod_code}, account {account.wiod_code}, "
            f"intensities {intens.wiod_code}"
        )
    dy = shock.delta_a_over_a.scale(account.output)
    return impact_from_output_change(account.wiod_code, dy, intens)


def impact_from_output_change(wiod_code: str, delta_output: Band, intens: Intensities) -> ImpactRow:
    de = delta_output.scale(intens.energy_intensity)
    dc = de.scale(intens.emissions_intensity)
    return ImpactRow(wiod_code, delta_output, de, dc)


def aggregate(rows: Iterable[ImpactRow]) -> AggregateImpact:
    """Componentwise sums, accumulated in industry-code order."""
    by_code: dict[str, ImpactRow] = {}
    for row in rows:
        if row.wiod_code in by_code:
            raise ImpactError(f"duplicate industry {row.wiod_code} in impact rows")
        by_code[row.wiod_code] = row
    ordered = [by_code[k] for k in sorted(by_code)]

    def total(quantity: str) -> Band:
        return Band(*(sum(r.band(quantity)[i] for r in ordered) for i in range(3)))

    return AggregateImpact(total("energy"), total("emissions"), total("output"))


@dataclass(frozen=True)
class Context:
    """National totals and comparator energies used to put an aggregate in perspective."""

    national_capacity_gw: float = 1144.0
    national_emissions_gtco2: float = 5.0
    comparators_twh: Mapping[str, float] = field(
        default_factory=lambda: {"chatgpt_inference": 0.2, "hardware_low": 5.7, "hardware_high": 8.9}
    )
    national_energy_pj: float | None = None

    def __post_init__(self):
        values = {
            "national_capacity_gw": self.national_capacity_gw,
            "national_emissions_gtco2": self.national_emissions_gtco2,
            **{f"comparators.{k}": v for k, v in self.comparators_twh.items()},
        }
        if self.national_energy_pj is not None:
            values["national_energy_pj"] = self.national_energy_pj
        bad = {k: v for k, v in values.items() if not v > 0}
        if bad:
            raise ValueError(f"context values must be positive: {bad}")


@dataclass(frozen=True)
class ContextReport:
    energy_pj: float
    emissions_kt: float
    energy_twh: float
    average_gw: float
    capacity_share: float  # fraction, not percent
    emissions_share: float
    comparator_ratios: Mapping[str, float]
    energy_share: float | None = None


def pj_to_twh(pj: float) -> float:
    return pj / PJ_PER_TWH


def twh_to_average_gw(twh_per_year: float, hours_per_year: float = HOURS_PER_YEAR) -> float:
    """Constant power that delivers ``twh_per_year`` over a year."""
    return twh_per_year * 1000.0 / hours_per_year


def average_gw_to_pj(gw: float, hours_per_year: float = HOURS_PER_YEAR) -> float:
    return gw * hours_per_year / 1000.0 * PJ_PER_TWH


def contextualize(energy_pj: float, emissions_kt: float, context: Context = Context()) -> ContextReport:
    twh = pj_to_twh(energy_pj)
    gw = twh_to_average_gw(twh)
    return ContextReport(
        energy_pj=energy_pj,
        emissions_kt=emissions_kt,
        energy_twh=twh,
        average_gw=gw,
        capacity_share=gw / context.national_capacity_gw,
        emissions_share=emissions_kt / (context.national_emissions_gtco2 * KT_PER_GT),
        comparator_ratios={k: twh / v for k, v in sorted(context.comparators_twh.items())},
        energy_share=None if context.national_energy_pj is None else energy_pj / context.national_energy_pj,
    )
