"""Command-line front end.

Exit codes: 0 success, 1 validation failure (config or input data),
2 computation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .concordance import ConcordanceError
from .ingest import DatasetError, dump_dataset
from .pipeline import (
    ConfigError,
    RunBundle,
    aggregate_csv,
    aggregate_record,
    impact_rows_csv,
    load_config,
    run,
    write_bundle,
)
from .projection import fit_accounts, projected_impact, write_fit_diagnostics
from .report import TABLE_KINDS, render_table
from .sensitivity import even_axis, sweep
from .variants import VARIANTS

log = logging.getLogger("ai_energy")

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE = 0, 1, 2


def _overrides(args) -> dict[str, str]:
    out = {}
    for item in args.set or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    if args.out:
        out["out"] = str(Path(args.out).resolve())
    if getattr(args, "variant", None):
        out["variants"] = args.variant
    return out


def _bundle(args) -> RunBundle:
    return run(load_config(args.config, _overrides(args)))


def _out_dir(args, bundle: RunBundle) -> Path:
    if bundle.config.out is None:
        raise ConfigError("no output directory: pass --out or set 'out' in the config")
    return Path(bundle.config.out)


def _emit(text: str) -> None:
    sys.stdout.write(text)


def cmd_run(args) -> None:
    bundle = _bundle(args)
    write_bundle(bundle, _out_dir(args, bundle))
    if args.format == "json":
        _emit(json.dumps(aggregate_record(bundle), indent=2, sort_keys=True) + "\n")
    elif args.format == "csv":
        _emit(aggregate_csv(bundle))
    else:
        _emit(render_table(bundle, "aggregate-summary")[0])
    for d in bundle.diagnostics:
        print(d, file=sys.stderr)


def cmd_sensitivity(args) -> None:
    bundle = _bundle(args)
    cs = bundle.config.cost_savings
    grid = sweep(
        bundle.evaluate,
        even_axis(args.task_fraction_steps),
        even_axis(args.labor_savings_steps),
        cs.annualization_divisor,
    )
    header = "task_fraction,labor_savings,variant,delta_energy_pj,delta_emissions_ktco2\n"
    lines = [bundle.provenance_line + "\n", header]
    variants = set(bundle.config.variants)
    for c in grid.cells:
        if c.variant in variants:
            lines.append(
                f"{c.task_fraction!r},{c.labor_savings!r},{c.variant.value},{c.delta_energy!r},{c.delta_emissions!r}\n"
            )
    text = "".join(lines)
    if bundle.config.out is not None:
        out = Path(bundle.config.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sensitivity.csv").write_text(text, encoding="utf-8", newline="")
    if args.format != "text" or bundle.config.out is None:
        _emit(text)
    else:
        _emit(f"wrote {len(grid.cells)} cells to {Path(bundle.config.out) / 'sensitivity.csv'}\n")


def cmd_project(args) -> None:
    overrides = {}
    if args.window:
        overrides["projection.window"] = args.window
    if args.target:
        overrides["projection.target"] = str(args.target)
    args.set = list(args.set or ()) + [f"{k}={v}" for k, v in overrides.items()]
    bundle = _bundle(args)
    cfg = bundle.config
    diagnostics = []
    fits = fit_accounts(bundle.accounts_history, cfg.projection_window, diagnostics)
    hold = {r.wiod_code: r.delta_output for r in bundle.rows} if args.hold_output_change else None
    result = projected_impact(
        fits, bundle.wiod_exposure, cfg.cost_savings, cfg.projection_target, hold, diagnostics
    )
    out = _out_dir(args, bundle)
    out.mkdir(parents=True, exist_ok=True)
    dump_dataset(result.accounts, out / "projected_accounts.csv", "accounts")
    write_fit_diagnostics(fits, out / "fit_diagnostics.csv")
    prov = bundle.provenance_line
    (out / "projected_impacts.csv").write_text(
        impact_rows_csv(result.rows, cfg.variants, prov), encoding="utf-8", newline=""
    )
    agg = result.aggregate
    record = {
        "provenance": bundle.provenance,
        "target_year": cfg.projection_target,
        "window": list(cfg.projection_window),
        "excluded": list(result.excluded),
        "variants": {
            v.value: {
                "delta_output_bb": agg.delta_output[v],
                "delta_energy_pj": agg.delta_energy[v],
                "delta_emissions_ktco2": agg.delta_emissions[v],
            }
            for v in cfg.variants
        },
    }
    text = json.dumps(record, indent=2, sort_keys=True) + "\n"
    (out / "projected_aggregate.json").write_text(text, encoding="utf-8", newline="")
    if args.format == "json":
        _emit(text)
    else:
        for v in cfg.variants:
            _emit(f"{v.value}: dE = {agg.delta_energy[v]:.3f} PJ, dC = {agg.delta_emissions[v]:.3f} ktCO2\n")
    for d in bundle.diagnostics + diagnostics:
        print(d, file=sys.stderr)


def cmd_report(args) -> None:
    bundle = _bundle(args)
    text, csv_text = render_table(bundle, args.table, args.order)
    if args.format == "csv":
        _emit(csv_text)
    elif args.format == "json":
        rows = list(csv.reader(csv_text.splitlines()[1:]))
        _emit(json.dumps({"provenance": bundle.provenance, "table": args.table,
                          "header": rows[0], "rows": rows[1:]}, indent=2) + "\n")
    else:
        _emit(text)
    if bundle.config.out is not None:
        out = Path(bundle.config.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"table_{args.table}.txt").write_text(text, encoding="utf-8", newline="")
        (out / f"table_{args.table}.csv").write_text(csv_text, encoding="utf-8", newline="")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ai-energy", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="run-config file (key = value lines)")
        p.add_argument("--out", help="output directory (overrides config 'out')")
        p.add_argument("--variant", choices=[v.value for v in VARIANTS] + ["all"], help="variants to emit")
        p.add_argument("--format", choices=["text", "csv", "json"], default="text")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")

    p = sub.add_parser("run", help="estimate impacts and write the result bundle")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sensitivity", help="sweep the two cost-savings parameters")
    common(p)
    p.add_argument("--task-fraction-steps", type=int, default=21)
    p.add_argument("--labor-savings-steps", type=int, default=21)
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("project", help="re-estimate with log-linearly projected accounts")
    common(p)
    p.add_argument("--window", help="fit window START:END (default 2000:2014)")
    p.add_argument("--target", type=int, help="projection year (default 2023)")
    p.add_argument("--hold-output-change", action="store_true",
                   help="keep reference-year output changes, swap in projected intensities only")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("report", help="render a results table")
    common(p)
    p.add_argument("--table", choices=TABLE_KINDS, default="full-industry")
    p.add_argument("--order", choices=["impact", "code"], help="row order for the full-industry table")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (ConfigError, DatasetError, ConcordanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, KeyError, ArithmeticError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
