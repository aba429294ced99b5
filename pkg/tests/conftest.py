import csv
from importlib import resources
from pathlib import Path

import pytest

from ai_energy.impact import ImpactRow
from ai_energy.pipeline import load_config, run
from ai_energy.variants import Band

DATA = Path(str(resources.files("ai_energy.data")))
FIXTURE = DATA / "fixture"
FIXTURE_CONFIG = FIXTURE / "run.cfg"

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def read_published_impacts() -> list[ImpactRow]:
    rows = []
    with open(DATA / "published_impacts.csv", newline="") as fh:
        for r in csv.DictReader(fh):
            def band(q):
                return Band(float(r[f"delta_{q}_lower"]), float(r[f"delta_{q}_central"]), float(r[f"delta_{q}_upper"]))

            rows.append(ImpactRow(r["wiod_code"], band("output"), band("energy"), band("emissions")))
    return rows


@pytest.fixture(scope="session")
def published_rows():
    return read_published_impacts()


@pytest.fixture(scope="session")
def bundle():
    return run(load_config(FIXTURE_CONFIG))
