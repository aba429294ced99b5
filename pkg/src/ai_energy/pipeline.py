"""End-to-end orchestration: run config -> result bundle -> export files."""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__
from .concordance import IndustryMap, aggregate_to_wiod, load_isic_wiod, resolve_crosswalk, write_map_audit
from .diagnostics import Diagnostic
from .exposure import IndustryExposure, exposure_tables, write_exposure_audit
from .impact import (
    AggregateImpact,
    Context,
    ContextReport,
    ImpactRow,
    Intensities,
    aggregate,
    contextualize,
    industry_impact,
    intensities,
)
from .ingest import (
    DEFAULT_BASE_YEAR,
    DEFAULT_WAGE_WINDOW,
    DatasetError,
    IndustryAccount,
    average_wage_bills,
    deflate_wage_bills,
    load_dataset,
)
from .projection import DEFAULT_TARGET_YEAR, DEFAULT_WINDOW
from .shock import CostSavings, ProductivityShock, aggregate_log_output_change, domar_weights, productivity_shock
from .variants import VARIANTS, Band, Variant

DATASETS = ("tasks", "wagebills", "deflator", "accounts", "crosswalk")


class ConfigError(ValueError):
    pass


def _year_range(text: str) -> tuple[int, int]:
    try:
        start, end = (int(p) for p in text.split(":"))
    except ValueError:
        raise ConfigError(f"expected a year range START:END, got {text!r}") from None
    if start > end:
        raise ConfigError(f"empty year range {text!r}")
    return start, end


def _variants(text: str) -> tuple[Variant, ...]:
    text = text.strip().lower()
    if text == "all":
        return VARIANTS
    try:
        chosen = {Variant(v.strip()) for v in text.split(",") if v.strip()}
    except ValueError:
        raise ConfigError(f"unknown variant in {text!r}; use lower, central, upper or all") from None
    return tuple(v for v in VARIANTS if v in chosen)


@dataclass(frozen=True)
class RunConfig:
    tasks: Path
    wagebills: Path
    deflator: Path
    accounts: Path
    crosswalk: Path
    isic_wiod: Path | None = None
    reference_year: int = 2014
    base_year: int = DEFAULT_BASE_YEAR
    wage_window: tuple[int, int] = DEFAULT_WAGE_WINDOW
    cost_savings: CostSavings = CostSavings()
    variants: tuple[Variant, ...] = VARIANTS
    context: Context = Context()
    projection_window: tuple[int, int] = DEFAULT_WINDOW
    projection_target: int = DEFAULT_TARGET_YEAR
    selected_industries: tuple[str, ...] = ("P85", "J58", "G45")
    order: str = "impact"
    out: Path | None = None

    def validate(self) -> None:
        missing = [f"{name}={getattr(self, name)}" for name in DATASETS if not Path(getattr(self, name)).is_file()]
        if self.isic_wiod is not None and not Path(self.isic_wiod).is_file():
            missing.append(f"isic_wiod={self.isic_wiod}")
        if missing:
            raise ConfigError(f"dataset file(s) not found: {', '.join(missing)}")
        if self.order not in ("impact", "code"):
            raise ConfigError(f"order must be 'impact' or 'code', got {self.order!r}")

    def settings(self) -> dict:
        """Everything except file locations, in a stable JSON-friendly form."""
        return {
            "reference_year": self.reference_year,
            "base_year": self.base_year,
            "wage_window": list(self.wage_window),
            "cost_savings": {
                "task_fraction": self.cost_savings.task_fraction,
                "labor_savings": self.cost_savings.labor_savings,
                "annualization_divisor": self.cost_savings.annualization_divisor,
            },
            "variants": [v.value for v in self.variants],
            "context": {
                "national_capacity_gw": self.context.national_capacity_gw,
                "national_emissions_gtco2": self.context.national_emissions_gtco2,
                "national_energy_pj": self.context.national_energy_pj,
                "comparators": dict(sorted(self.context.comparators_twh.items())),
            },
            "projection_window": list(self.projection_window),
            "projection_target": self.projection_target,
            "selected_industries": list(self.selected_industries),
            "order": self.order,
        }


def parse_config(values: Mapping[str, str], base_dir: Path = Path(".")) -> RunConfig:
    """Build a :class:`RunConfig` from flat ``key -> string`` settings."""
    values = {k.strip().lower(): v.strip() for k, v in values.items()}

    def path(key):
        p = Path(values[key]).expanduser()
        return p if p.is_absolute() else base_dir / p

    known = set(DATASETS) | {
        "isic_wiod", "reference_year", "base_year", "wage_window", "variants",
        "cost_savings.task_fraction", "cost_savings.labor_savings", "cost_savings.annualization_divisor",
        "context.national_capacity_gw", "context.national_emissions_gtco2", "context.national_energy_pj",
        "projection.window", "projection.target", "selected_industries", "order", "out",
    }
    unknown = sorted(k for k in values if k not in known and not k.startswith("comparators."))
    if unknown:
        raise ConfigError(f"unknown config key(s): {unknown}")
    absent = [k for k in DATASETS if not values.get(k)]
    if absent:
        raise ConfigError(f"config is missing dataset path(s): {absent}")

    kwargs = {k: path(k) for k in DATASETS}
    try:
        if values.get("isic_wiod"):
            kwargs["isic_wiod"] = path("isic_wiod")
        if "reference_year" in values:
            kwargs["reference_year"] = int(values["reference_year"])
        if "base_year" in values:
            kwargs["base_year"] = int(values["base_year"])
        if "wage_window" in values:
            kwargs["wage_window"] = _year_range(values["wage_window"])
        if "variants" in values:
            kwargs["variants"] = _variants(values["variants"])
        defaults = CostSavings()
        kwargs["cost_savings"] = CostSavings(
            float(values.get("cost_savings.task_fraction", defaults.task_fraction)),
            float(values.get("cost_savings.labor_savings", defaults.labor_savings)),
            float(values.get("cost_savings.annualization_divisor", defaults.annualization_divisor)),
        )
        ctx = Context()
        comparators = {k.split(".", 1)[1]: float(v) for k, v in values.items() if k.startswith("comparators.")}
        energy = values.get("context.national_energy_pj")
        kwargs["context"] = Context(
            float(values.get("context.national_capacity_gw", ctx.national_capacity_gw)),
            float(values.get("context.national_emissions_gtco2", ctx.national_emissions_gtco2)),
            comparators or dict(ctx.comparators_twh),
            float(energy) if energy else None,
        )
        if "projection.window" in values:
            kwargs["projection_window"] = _year_range(values["projection.window"])
        if "projection.target" in values:
            kwargs["projection_target"] = int(values["projection.target"])
        if "selected_industries" in values:
            kwargs["selected_industries"] = tuple(c.strip() for c in values["selected_industries"].split(",") if c.strip())
        if "order" in values:
            kwargs["order"] = values["order"]
        if values.get("out"):
            kwargs["out"] = path("out")
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
    return RunConfig(**kwargs)


def load_config(path, overrides: Mapping[str, str] | None = None) -> RunConfig:
    """Read a flat ``key = value`` config file; ``overrides`` win over file values."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + path.read_text(encoding="utf-8"), source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    values = dict(parser["run"])
    values.update(overrides or {})
    return parse_config(values, path.parent)


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class Estimate:
    """Shocks through aggregates for one cost-savings factor."""

    shocks: dict[str, ProductivityShock]
    intensities: dict[str, Intensities]
    rows: list[ImpactRow]
    aggregate: AggregateImpact


def estimate(
    wiod_exposure: Mapping[Variant, Sequence[IndustryExposure]],
    accounts: Mapping[str, IndustryAccount],
    phi,
    diagnostics: list | None = None,
) -> Estimate:
    by_variant = {v: {ie.code: ie for ie in wiod_exposure[v]} for v in VARIANTS}
    shocks, intens, rows = {}, {}, []
    for code in sorted(by_variant[Variant.CENTRAL]):
        acc = accounts[code]
        exposed = Band.from_mapping({v: by_variant[v][code].exposed_wage_bill for v in VARIANTS})
        shocks[code] = productivity_shock(code, exposed, acc.output, phi)
        intens[code] = intensities(acc, diagnostics)
        rows.append(industry_impact(shocks[code], acc, intens[code]))
    return Estimate(shocks, intens, rows, aggregate(rows))


@dataclass
class RunBundle:
    config: RunConfig
    provenance: dict
    naics_exposure: dict[Variant, list[IndustryExposure]]
    industry_map: IndustryMap
    naics_codes: list[str]
    wiod_exposure: dict[Variant, list[IndustryExposure]]
    accounts_history: tuple[IndustryAccount, ...]
    reference_accounts: dict[str, IndustryAccount]
    shocks: dict[str, ProductivityShock]
    intensities: dict[str, Intensities]
    rows: list[ImpactRow]
    aggregate: AggregateImpact
    context: dict[Variant, ContextReport]
    domar_weights: dict[str, float]
    aggregate_log_output_change: Band
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def evaluate(self, phi) -> AggregateImpact:
        """Aggregate impact at another cost-savings factor, exposure held fixed."""
        return estimate(self.wiod_exposure, self.reference_accounts, phi).aggregate

    @property
    def provenance_line(self) -> str:
        p = self.provenance
        files = " ".join(f"{k}={p['datasets'][k][:16]}" for k in sorted(p["datasets"]))
        return f"# engine=ai_energy/{p['engine']} config={p['config'][:16]} {files}"


def run(config: RunConfig) -> RunBundle:
    config.validate()
    diagnostics: list[Diagnostic] = []

    tasks = load_dataset(config.tasks, "tasks")
    wages = load_dataset(config.wagebills, "wagebills")
    deflator = load_dataset(config.deflator, "deflator", base_year=config.base_year)
    history = load_dataset(config.accounts, "accounts")
    crosswalk = load_dataset(config.crosswalk, "crosswalk")
    isic_wiod = load_isic_wiod(config.isic_wiod)

    averaged = average_wage_bills(deflate_wage_bills(wages, deflator), config.wage_window)
    naics_exposure = exposure_tables(tasks, averaged, diagnostics)
    naics_codes = sorted({ie.code for ie in naics_exposure[Variant.CENTRAL]})

    imap = IndustryMap(resolve_crosswalk(crosswalk, diagnostics), isic_wiod)
    wiod_exposure = {v: aggregate_to_wiod(naics_exposure[v], imap) for v in VARIANTS}

    reference = {a.wiod_code: a for a in history if a.year == config.reference_year}
    if not reference:
        raise DatasetError(f"reference year {config.reference_year} not present", config.accounts)
    missing = sorted(set(imap.wiod_codes) - set(reference))
    if missing:
        raise DatasetError(f"no {config.reference_year} account for industries {missing}", config.accounts)
    extra = sorted(set(reference) - set(imap.wiod_codes))
    if extra:
        raise DatasetError(f"accounts carry industries outside the WIOD grouping: {extra}", config.accounts)

    est = estimate(wiod_exposure, reference, config.cost_savings, diagnostics)
    weights = domar_weights({code: acc.output for code, acc in reference.items()})
    context = {
        v: contextualize(est.aggregate.delta_energy[v], est.aggregate.delta_emissions[v], config.context)
        for v in VARIANTS
    }

    dataset_paths = {k: getattr(config, k) for k in DATASETS}
    if config.isic_wiod is not None:
        dataset_paths["isic_wiod"] = config.isic_wiod
    hashes = {k: file_sha256(p) for k, p in dataset_paths.items()}
    config_hash = hashlib.sha256(
        json.dumps({"settings": config.settings(), "datasets": hashes}, sort_keys=True).encode()
    ).hexdigest()
    provenance = {"engine": __version__, "config": config_hash, "datasets": hashes}

    return RunBundle(
        config=config,
        provenance=provenance,
        naics_exposure=naics_exposure,
        industry_map=imap,
        naics_codes=naics_codes,
        wiod_exposure=wiod_exposure,
        accounts_history=tuple(history),
        reference_accounts=dict(sorted(reference.items())),
        shocks=est.shocks,
        intensities=est.intensities,
        rows=est.rows,
        aggregate=est.aggregate,
        context=context,
        domar_weights=weights,
        aggregate_log_output_change=aggregate_log_output_change(est.shocks.values(), weights),
        diagnostics=diagnostics,
    )


# -- exports -----------------------------------------------------------------

IMPACT_COLUMNS = ["wiod_code", "variant", "delta_output_bb", "delta_energy_pj", "delta_emissions_ktco2"]


def _csv_text(header: Sequence[str], rows, provenance: str | None) -> str:
    buf = io.StringIO()
    if provenance:
        buf.write(provenance + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x: float) -> str:
    return repr(float(x))


def impact_rows_csv(rows: Sequence[ImpactRow], variants: Sequence[Variant], provenance: str | None = None) -> str:
    body = [
        [r.wiod_code, v.value, _num(r.delta_output[v]), _num(r.delta_energy[v]), _num(r.delta_emissions[v])]
        for r in sorted(rows, key=lambda r: r.wiod_code)
        for v in variants
    ]
    return _csv_text(IMPACT_COLUMNS, body, provenance)


def aggregate_record(bundle: RunBundle, variants: Sequence[Variant] | None = None) -> dict:
    variants = variants or bundle.config.variants
    out = {"provenance": bundle.provenance, "variants": {}}
    for v in variants:
        ctx = bundle.context[v]
        out["variants"][v.value] = {
            "delta_output_bb": bundle.aggregate.delta_output[v],
            "delta_energy_pj": bundle.aggregate.delta_energy[v],
            "delta_emissions_ktco2": bundle.aggregate.delta_emissions[v],
            "energy_twh": ctx.energy_twh,
            "average_gw": ctx.average_gw,
            "capacity_share": ctx.capacity_share,
            "emissions_share": ctx.emissions_share,
            "energy_share": ctx.energy_share,
            "comparator_ratios": dict(ctx.comparator_ratios),
            "aggregate_log_output_change": bundle.aggregate_log_output_change[v],
        }
    out["cost_savings_phi"] = bundle.config.cost_savings.phi
    return out


def aggregate_csv(bundle: RunBundle, variants: Sequence[Variant] | None = None) -> str:
    record = aggregate_record(bundle, variants)
    header = ["variant", "delta_output_bb", "delta_energy_pj", "delta_emissions_ktco2", "energy_twh",
              "average_gw", "capacity_share", "emissions_share"]
    body = [[v] + [_num(vals[h]) for h in header[1:]] for v, vals in record["variants"].items()]
    return _csv_text(header, body, bundle.provenance_line)


def write_bundle(bundle: RunBundle, out_dir, variants: Sequence[Variant] | None = None) -> list[Path]:
    """Write every run export into ``out_dir``; returns the paths written."""
    variants = tuple(variants or bundle.config.variants)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prov = bundle.provenance_line
    written = []

    def put(name: str, text: str):
        p = out / name
        p.write_text(text, encoding="utf-8", newline="")
        written.append(p)

    put("industry_impacts.csv", impact_rows_csv(bundle.rows, variants, prov))
    put("aggregate.csv", aggregate_csv(bundle, variants))
    put("aggregate.json", json.dumps(aggregate_record(bundle, variants), indent=2, sort_keys=True) + "\n")

    write_exposure_audit(bundle.naics_exposure, out / "exposure_naics.csv")
    write_map_audit(bundle.industry_map, bundle.naics_codes, out / "naics_wiod_map.csv")
    written += [out / "exposure_naics.csv", out / "naics_wiod_map.csv"]

    shock_rows = [
        [code, v.value, _num(s.delta_a_over_a[v])] for code, s in sorted(bundle.shocks.items()) for v in variants
    ]
    put("shocks.csv", _csv_text(["wiod_code", "variant", "delta_a_over_a"], shock_rows, prov))
    intens_rows = [
        [code, _num(i.energy_intensity), _num(i.emissions_intensity), _num(bundle.domar_weights[code])]
        for code, i in sorted(bundle.intensities.items())
    ]
    put("intensities.csv", _csv_text(
        ["wiod_code", "energy_intensity_pj_per_bb", "emissions_intensity_kt_per_pj", "domar_weight"], intens_rows, prov
    ))
    put("diagnostics.txt", "".join(f"{d}\n" for d in bundle.diagnostics))
    return written
