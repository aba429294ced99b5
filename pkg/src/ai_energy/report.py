"""Text and CSV renderings of run results.

Renderers only format values already in the bundle; nothing is recomputed
here apart from unit scaling for percentages.
"""

from __future__ import annotations

import csv
import io
from functools import lru_cache
from importlib import resources
from typing import Mapping, Sequence

from .impact import AggregateImpact, ContextReport, ImpactRow, Intensities
from .ingest import IndustryAccount
from .shock import ProductivityShock
from .variants import VARIANTS, Variant

TABLE_KINDS = ("selected-industries", "full-industry", "aggregate-summary")


@lru_cache(maxsize=None)
def industry_names() -> dict[str, str]:
    text = resources.files("ai_energy.data").joinpath("wiod_industries.csv").read_text(encoding="utf-8")
    return {r["wiod_code"]: r["industry"] for r in csv.DictReader(text.splitlines())}


def _csv(header, rows, provenance=None) -> str:
    buf = io.StringIO()
    if provenance:
        buf.write(provenance + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _grid(header: Sequence[str], rows: Sequence[Sequence[str]], align_left: int = 1) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]

    def line(cells):
        parts = [c.ljust(w) if i < align_left else c.rjust(w) for i, (c, w) in enumerate(zip(cells, widths))]
        return "  ".join(parts).rstrip()

    out = [line(header), "  ".join("-" * w for w in widths)]
    out += [line(r) for r in rows]
    return "\n".join(out) + "\n"


def order_rows(rows: Sequence[ImpactRow], order: str = "impact") -> list[ImpactRow]:
    if order == "code":
        return sorted(rows, key=lambda r: r.wiod_code)
    if order == "impact":
        return sorted(rows, key=lambda r: (r.delta_emissions.central, r.wiod_code))
    raise ValueError(f"unknown order {order!r}")


def full_industry_table(rows: Sequence[ImpactRow], order: str = "impact", provenance: str | None = None):
    """Central values with [lower, upper] brackets underneath, 5 decimals."""
    names = industry_names()
    header = ["Industry", "Code", "Change in GDP", "Change in Energy", "Change in Emissions"]
    text_rows, csv_rows = [], []
    for r in order_rows(rows, order):
        name = names.get(r.wiod_code, r.wiod_code)
        bands = [r.delta_output, r.delta_energy, r.delta_emissions]
        text_rows.append([name, r.wiod_code] + [f"{b.central:.5f}" for b in bands])
        text_rows.append(["", ""] + [f"[{b.lower:.5f}, {b.upper:.5f}]" for b in bands])
        csv_rows.append(
            [r.wiod_code, name]
            + [f"{getattr(b, v.value):.5f}" for b in bands for v in (Variant.CENTRAL, Variant.LOWER, Variant.UPPER)]
        )
    csv_header = ["wiod_code", "industry"] + [
        f"delta_{q}_{v}" for q in ("output", "energy", "emissions") for v in ("central", "lower", "upper")
    ]
    return _grid(header, text_rows, align_left=2), _csv(csv_header, csv_rows, provenance)


def selected_industries_table(
    codes: Sequence[str],
    rows: Mapping[str, ImpactRow],
    accounts: Mapping[str, IndustryAccount],
    shocks: Mapping[str, ProductivityShock],
    intens: Mapping[str, Intensities],
    provenance: str | None = None,
):
    """Central estimates for a few industries, with their inputs, 3 decimals."""
    names = industry_names()
    header = [
        "Industry", "Output ($BB)", "Exposure rate (%)", "Energy intensity (PJ/$BB)",
        "Emissions intensity (ktCO2/PJ)", "dy ($BB)", "dE (PJ)", "dC (ktCO2)",
    ]
    body = []
    for code in codes:
        r = rows[code]
        body.append([
            names.get(code, code),
            f"{accounts[code].output:.3f}",
            f"{shocks[code].delta_a_over_a.central * 100:.3f}",
            f"{intens[code].energy_intensity:.3f}",
            f"{intens[code].emissions_intensity:.3f}",
            f"{r.delta_output.central:.3f}",
            f"{r.delta_energy.central:.3f}",
            f"{r.delta_emissions.central:.3f}",
        ])
    csv_header = ["industry", "output_bb", "exposure_rate_pct", "energy_intensity", "emissions_intensity",
                  "delta_output_bb", "delta_energy_pj", "delta_emissions_ktco2"]
    return _grid(header, body), _csv(csv_header, body, provenance)


def aggregate_summary_table(
    agg: AggregateImpact, context: Mapping[Variant, ContextReport], provenance: str | None = None
):
    header = ["Quantity"] + [v.value for v in VARIANTS]
    lines = [
        ("Change in output ($BB)", lambda v: f"{agg.delta_output[v]:.3f}"),
        ("Change in energy (PJ)", lambda v: f"{agg.delta_energy[v]:.3f}"),
        ("Change in emissions (ktCO2)", lambda v: f"{agg.delta_emissions[v]:.3f}"),
        ("Energy (TWh)", lambda v: f"{context[v].energy_twh:.3f}"),
        ("Average generation (GW)", lambda v: f"{context[v].average_gw:.3f}"),
        ("Share of national capacity (%)", lambda v: f"{context[v].capacity_share * 100:.4f}"),
        ("Share of national emissions (%)", lambda v: f"{context[v].emissions_share * 100:.4f}"),
    ]
    if context[Variant.CENTRAL].energy_share is not None:
        lines.append(("Share of national energy (%)", lambda v: f"{context[v].energy_share * 100:.4f}"))
    for name in context[Variant.CENTRAL].comparator_ratios:
        lines.append((f"Ratio to {name}", lambda v, n=name: f"{context[v].comparator_ratios[n]:.3f}"))
    body = [[label] + [fmt(v) for v in VARIANTS] for label, fmt in lines]
    return _grid(header, body), _csv(["quantity"] + header[1:], body, provenance)


def render_table(bundle, kind: str, order: str | None = None) -> tuple[str, str]:
    """Render one of :data:`TABLE_KINDS`; returns (text, csv)."""
    prov = bundle.provenance_line
    if kind == "full-industry":
        return full_industry_table(bundle.rows, order or bundle.config.order, prov)
    if kind == "selected-industries":
        rows = {r.wiod_code: r for r in bundle.rows}
        codes = [c for c in bundle.config.selected_industries if c in rows]
        return selected_industries_table(
            codes, rows, bundle.reference_accounts, bundle.shocks, bundle.intensities, prov
        )
    if kind == "aggregate-summary":
        return aggregate_summary_table(bundle.aggregate, bundle.context, prov)
    raise ValueError(f"unknown table kind {kind!r}; expected one of {TABLE_KINDS}")
