"""Loading and validation of the five delimited input datasets.

Every dataset is a UTF-8, comma-delimited file with one header row. Column
order is free; column names are not. Loads are all-or-nothing: the first bad
cell raises :class:`DatasetError` carrying the file, row number and column.
"""

from __future__ import annotations

import csv
import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

log = logging.getLogger(__name__)

AUTOMATION_SCORES = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_BASE_YEAR = 2017
DEFAULT_WAGE_WINDOW = (2019, 2022)

SCHEMAS: dict[str, tuple[str, ...]] = {
    "tasks": ("task_id", "soc8", "automation_score"),
    "wagebills": ("soc_code", "naics4", "year", "wage_bill_usd"),
    "deflator": ("year", "index"),
    "accounts": ("wiod_code", "year", "output_bb_usd2017", "energy_pj", "emissions_ktco2"),
    "crosswalk": ("naics4", "isic2", "occurrence_count"),
}

_SOC8 = re.compile(r"^(\d{2})-(\d{4})\.(\d{2})$")
_SOC_COARSE = re.compile(r"^(\d{2})-?(\d{3,4})$")
_NAICS4 = re.compile(r"^\d{4}$")
_ISIC2 = re.compile(r"^\d{2}$")


class DatasetError(ValueError):
    """A dataset file failed to load or validate."""

    def __init__(self, message: str, path=None, row: int | None = None, column: str | None = None):
        self.path = path
        self.row = row
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{': '.join([', '.join(where), message]) if where else message}")


@dataclass(frozen=True)
class TaskExposureRecord:
    task_id: str
    soc8: str  # digit-only, 8 characters
    automation_score: float


@dataclass(frozen=True)
class WageBillRecord:
    soc_code: str  # digit-only, 6 or 5 characters
    naics4: str
    year: int
    wage_bill: float  # USD


@dataclass(frozen=True)
class IndustryAccount:
    wiod_code: str
    year: int
    output: float  # $BB, 2017 USD
    energy: float  # PJ
    emissions: float  # ktCO2


@dataclass(frozen=True)
class CrosswalkEntry:
    naics4: str
    isic2: str
    occurrence_count: int


@dataclass(frozen=True)
class DeflatorSeries:
    """Price index by year; amounts are converted into ``base_year`` dollars."""

    index: Mapping[int, float]
    base_year: int = DEFAULT_BASE_YEAR

    def __post_init__(self):
        object.__setattr__(self, "index", dict(sorted(self.index.items())))
        for year, value in self.index.items():
            if not value > 0:
                raise DatasetError(f"deflator index for {year} must be positive, got {value}")
        if self.base_year not in self.index:
            raise DatasetError(f"base year {self.base_year} missing from deflator series")

    def factor(self, year: int) -> float:
        if year not in self.index:
            raise KeyError(f"year {year} missing from deflator series")
        return self.index[self.base_year] / self.index[year]


def normalize_soc(code: str, digits: int | None = None) -> str:
    """Return the digit-only form of an SOC code.

    Accepts ``NN-NNNN.NN`` (8 digits), ``NN-NNNN`` (6), ``NN-NNN`` (5) or
    an already-normalized digit string.
    """
    code = code.strip()
    if m := _SOC8.match(code):
        out = "".join(m.groups())
    elif m := _SOC_COARSE.match(code):
        out = "".join(m.groups())
    elif code.isdigit() and len(code) in (5, 6, 8):
        out = code
    else:
        raise ValueError(f"malformed SOC code {code!r}")
    if digits is not None and len(out) != digits:
        raise ValueError(f"expected a {digits}-digit SOC code, got {code!r}")
    return out


def format_soc(code: str) -> str:
    """Inverse of :func:`normalize_soc` for display and re-serialization."""
    if len(code) == 8:
        return f"{code[:2]}-{code[2:6]}.{code[6:]}"
    return f"{code[:2]}-{code[2:]}"


def _score(text: str) -> float:
    value = float(text)
    if value not in AUTOMATION_SCORES:
        raise ValueError(f"automation_score {text} is not one of {AUTOMATION_SCORES}")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if not value >= 0:  # also rejects nan
        raise ValueError(f"value {text} must be nonnegative")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise ValueError(f"value {text} must be nonnegative")
    return value


def _pattern(regex: re.Pattern, what: str):
    def parse(text: str) -> str:
        text = text.strip()
        if not regex.match(text):
            raise ValueError(f"malformed {what} {text!r}")
        return text

    return parse


def _code(text: str) -> str:
    text = text.strip()
    if not text:
        raise ValueError("empty code")
    return text


_PARSERS = {
    "tasks": (
        TaskExposureRecord,
        {"task_id": _code, "soc8": lambda s: normalize_soc(s, 8), "automation_score": _score},
    ),
    "wagebills": (
        WageBillRecord,
        {
            "soc_code": normalize_soc,
            "naics4": _pattern(_NAICS4, "NAICS-4 code"),
            "year": int,
            "wage_bill_usd": _nonneg_float,
        },
    ),
    "accounts": (
        IndustryAccount,
        {
            "wiod_code": _code,
            "year": int,
            "output_bb_usd2017": _nonneg_float,
            "energy_pj": _nonneg_float,
            "emissions_ktco2": _nonneg_float,
        },
    ),
    "crosswalk": (
        CrosswalkEntry,
        {
            "naics4": _pattern(_NAICS4, "NAICS-4 code"),
            "isic2": _pattern(_ISIC2, "ISIC-2 code"),
            "occurrence_count": _nonneg_int,
        },
    ),
    "deflator": (None, {"year": int, "index": float}),
}

_UNIQUE_KEYS = {
    "tasks": ("task_id",),
    "wagebills": ("soc_code", "naics4", "year"),
    "accounts": ("wiod_code", "year"),
    "crosswalk": ("naics4", "isic2"),
}

# column name -> dataclass field name, where they differ
_FIELD_NAMES = {
    "wage_bill_usd": "wage_bill",
    "output_bb_usd2017": "output",
    "energy_pj": "energy",
    "emissions_ktco2": "emissions",
}


def _read_rows(path: Path, kind: str):
    if not path.is_file():
        raise DatasetError("file not found", path)
    expected = SCHEMAS[kind]
    with path.open(newline="", encoding="utf-8") as fh:
        lines = (line for line in fh if not line.startswith("#"))
        reader = csv.DictReader(lines)
        header = [h.strip() for h in (reader.fieldnames or [])]
        unknown = sorted(set(header) - set(expected))
        if unknown:
            raise DatasetError(f"unknown column(s) {unknown} for {kind} dataset", path)
        missing = [c for c in expected if c not in header]
        if missing:
            raise DatasetError(f"missing column(s) {missing} for {kind} dataset", path)
        reader.fieldnames = header
        # row numbers count the header as row 1
        for row_number, row in enumerate(reader, start=2):
            yield row_number, row


def load_dataset(path, kind: str, base_year: int = DEFAULT_BASE_YEAR):
    """Load one dataset file of the given kind into typed records.

    Returns a tuple of records, or a :class:`DeflatorSeries` for ``deflator``.
    """
    if kind not in SCHEMAS:
        raise ValueError(f"unknown dataset kind {kind!r}; expected one of {sorted(SCHEMAS)}")
    path = Path(path)
    record_type, parsers = _PARSERS[kind]
    parsed = []
    for row_number, row in _read_rows(path, kind):
        values = {}
        for column, parse in parsers.items():
            cell = row.get(column)
            if cell is None:
                raise DatasetError("missing cell", path, row_number, column)
            try:
                values[_FIELD_NAMES.get(column, column)] = parse(cell)
            except ValueError as exc:
                raise DatasetError(str(exc), path, row_number, column) from None
        parsed.append((row_number, values))

    if kind == "deflator":
        index = {}
        for row_number, values in parsed:
            if values["year"] in index:
                raise DatasetError(f"duplicate year {values['year']}", path, row_number, "year")
            index[values["year"]] = values["index"]
        try:
            series = DeflatorSeries(index, base_year)
        except DatasetError as exc:
            raise DatasetError(str(exc), path) from None
        log.info("loaded %s: %d years", path, len(index))
        return series

    key_fields = _UNIQUE_KEYS[kind]
    seen = {}
    for row_number, values in parsed:
        key = tuple(values[k] for k in key_fields)
        if key in seen:
            raise DatasetError(f"duplicate key {key} (first seen on row {seen[key]})", path, row_number)
        seen[key] = row_number
    records = tuple(record_type(**values) for _, values in parsed)
    log.info("loaded %s: %d %s rows", path, len(records), kind)
    return records


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_dataset(data, path, kind: str) -> None:
    """Write records (or a deflator series) back in the input file format."""
    path = Path(path)
    columns = SCHEMAS[kind]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        if kind == "deflator":
            for year, value in data.index.items():
                writer.writerow([year, repr(float(value))])
            return
        for record in data:
            row = []
            for column in columns:
                value = getattr(record, _FIELD_NAMES.get(column, column))
                if column == "soc8" or column == "soc_code":
                    value = format_soc(value)
                row.append(_format_cell(value))
            writer.writerow(row)


def deflate(amount: float, year: int, series: DeflatorSeries) -> float:
    """Convert a nominal amount for ``year`` into base-year dollars."""
    return amount * series.factor(year)


def deflate_wage_bills(records: Iterable[WageBillRecord], series: DeflatorSeries) -> list[WageBillRecord]:
    out = []
    for r in records:
        try:
            value = deflate(r.wage_bill, r.year, series)
        except KeyError:
            raise DatasetError(f"no deflator for year {r.year} (cell {r.soc_code}/{r.naics4})") from None
        out.append(WageBillRecord(r.soc_code, r.naics4, r.year, value))
    return out


def average_wage_bills(
    records: Iterable[WageBillRecord], window: tuple[int, int] = DEFAULT_WAGE_WINDOW
) -> dict[tuple[str, str], float]:
    """Mean wage bill per (soc_code, naics4) cell over the years present in ``window``.

    Records must already be in base-year dollars. Records outside the window
    are ignored; a cell missing from some window years is averaged over the
    years it does appear in. Duplicate (cell, year) rows are summed first.
    """
    start, end = window
    if start > end:
        raise ValueError(f"empty averaging window {start}:{end}")
    by_year: dict[tuple[str, str], dict[int, float]] = defaultdict(lambda: defaultdict(float))
    for r in records:
        if start <= r.year <= end:
            by_year[(r.soc_code, r.naics4)][r.year] += r.wage_bill
    if not by_year:
        raise ValueError(f"no wage-bill records fall in the window {start}:{end}")
    return {
        cell: sum(years[y] for y in sorted(years)) / len(years)
        for cell, years in sorted(by_year.items())
    }
