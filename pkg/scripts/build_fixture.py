"""Regenerate the bundled synthetic input datasets under src/ai_energy/data/fixture/.

The raw national datasets (task scores, OEWS wage bills, WIOD accounts) are
not redistributable, so the fixture is synthetic. It is calibrated so that
running the pipeline with the default cost-savings factor reproduces the
published per-industry central estimates and bounds
(``data/published_impacts.csv``), and so that projecting the 2000-2014 accounts
to 2023 gives the published projected intensities for the three highlighted
industries and economy-wide totals of 24 PJ / 790 ktCO2.

Industry outputs other than the three highlighted ones are illustrative
round numbers, not WIOD values.

Usage: python scripts/build_fixture.py
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "ai_energy" / "data"
OUT = DATA / "fixture"

PHI = 0.27 * 0.23
REFERENCE_YEAR = 2014
HISTORY = range(2000, 2015)
TARGET_YEAR = 2023
PROJECTED_ENERGY_PJ = 24.0
PROJECTED_EMISSIONS_KT = 790.0

# $BB 2017 USD, 2014
OUTPUT = {
    "A01": 170, "A02": 25, "A03": 8, "B": 300, "C10_12": 250, "C13_15": 30, "C16": 40, "C17": 60,
    "C18": 40, "C19": 150, "C20": 260, "C21": 140, "C22": 75, "C23": 55, "C24": 60, "C25": 140,
    "C26": 280, "C27": 60, "C28": 150, "C29": 120, "C30": 140, "C31_32": 120, "C33": 50, "D35": 290,
    "E36": 30, "E37_39": 80, "F": 750, "G45": 389, "G46": 1050, "G47": 1000, "H49": 300, "H50": 12,
    "H51": 120, "H52": 130, "H53": 90, "I": 650, "J58": 343, "J59_60": 120, "J61": 400, "J62_63": 350,
    "K64": 700, "K65": 380, "K66": 250, "L68": 2100, "M69_70": 370, "M71": 180, "M72": 150, "M73": 100,
    "M74_75": 130, "N": 700, "O84": 2300, "P85": 332, "Q": 1300, "R_S": 500, "T": 25,
}
# intensities for industries with no exposure (not identifiable from impacts)
ZERO_IMPACT_INTENSITIES = {"A03": (5.0, 70.0), "O84": (1.5, 55.0), "T": (0.05, 50.0)}

# 2023 projections for the highlighted industries: output, energy intensity, emissions intensity
PROJECTED = {"P85": (422.0, 12.367, 4.17), "J58": (321.0, 0.004, 21.93), "G45": (339.0, 0.502, 58.03)}

# NAICS-4 -> (winning ISIC-2, count, [(other ISIC-2, count)])
NAICS = {
    "A01": [("1111", "01", 9, [("10", 2)])], "A02": [("1133", "02", 6, [("16", 1)])],
    "A03": [("1141", "03", 4, [])], "B": [("2111", "06", 8, [("19", 2)])],
    "C10_12": [("3111", "10", 7, [("01", 1)]), ("3121", "11", 6, [("12", 2)])],
    "C13_15": [("3131", "13", 5, [("14", 3)])], "C16": [("3211", "16", 6, [])],
    "C17": [("3221", "17", 7, [("18", 1)])], "C18": [("3231", "18", 8, [("58", 3)])],
    "C19": [("3241", "19", 5, [("20", 1)])], "C20": [("3251", "20", 9, [("19", 2)])],
    "C21": [("3254", "21", 6, [("20", 2)])], "C22": [("3261", "22", 7, [])],
    "C23": [("3271", "23", 5, [])], "C24": [("3311", "24", 8, [("25", 1)])],
    "C25": [("3321", "25", 9, [("28", 2)])], "C26": [("3341", "26", 7, [("28", 1)])],
    "C27": [("3351", "27", 6, [("26", 2)])], "C28": [("3331", "28", 10, [("33", 2)])],
    "C29": [("3361", "29", 8, [("30", 1)])], "C30": [("3364", "30", 6, [("29", 1)])],
    "C31_32": [("3371", "31", 5, [("16", 1)]), ("3399", "32", 9, [("13", 1)])],
    "C33": [("8113", "33", 6, [("95", 4)])], "D35": [("2211", "35", 7, [])],
    "E36": [("2213", "36", 3, [("37", 2)])], "E37_39": [("5621", "38", 6, [("39", 2)])],
    "F": [("2361", "41", 6, [("43", 2)]), ("2371", "42", 7, [("43", 3)])],
    "G45": [("4411", "45", 8, [("47", 1)])], "G46": [("4231", "46", 10, [("45", 2)])],
    "G47": [("4451", "47", 12, [])], "H49": [("4841", "49", 7, [("52", 1)])],
    "H50": [("4831", "50", 5, [])], "H51": [("4811", "51", 6, [("52", 1)])],
    "H52": [("4931", "52", 6, [])], "H53": [("4921", "53", 5, [("49", 1)])],
    "I": [("7211", "55", 6, []), ("7225", "56", 9, [])],
    "J58": [("5111", "58", 7, [("18", 2)])], "J59_60": [("5121", "59", 6, [("60", 2)])],
    "J61": [("5173", "61", 8, [])], "J62_63": [("5415", "62", 9, [("63", 3)])],
    "K64": [("5221", "64", 8, [])], "K65": [("5241", "65", 7, [("66", 2)])],
    "K66": [("5239", "66", 6, [("64", 2)])], "L68": [("5311", "68", 9, [])],
    "M69_70": [("5411", "69", 6, [("70", 1)])], "M71": [("5413", "71", 7, [])],
    "M72": [("5417", "72", 6, [])], "M73": [("5418", "73", 7, [("70", 1)])],
    "M74_75": [("5419", "74", 6, [("75", 3)])], "N": [("5613", "78", 8, [("82", 1)])],
    "O84": [("9211", "84", 10, [])], "P85": [("6111", "85", 9, [])],
    "Q": [("6221", "86", 8, [("87", 2)])], "R_S": [("7111", "90", 5, [("93", 2)]), ("8131", "94", 6, [])],
    "T": [("8141", "97", 3, [])],
}
# crosswalk rows for a code that never appears in the wage data
UNUSED_CROSSWALK = [("5191", "63", 4), ("5191", "58", 1)]

DEFLATOR = {2015: 0.9815, 2016: 0.9911, 2017: 1.0, 2018: 1.0241, 2019: 1.034, 2020: 1.0474,
            2021: 1.0939, 2022: 1.1714}
WAGE_YEARS = (2019, 2020, 2021, 2022)

# occupation kind -> SOC-8 codes with their task scores
TASKS = {
    "43-9021.00": [1, 1, 1], "43-9021.01": [1, 1],  # lower = central = upper = 1
    "13-2011.00": [0.75, 0.75, 0.75], "13-2011.01": [0.75, 0.75],  # central and upper
    "23-2011.00": [0.75, 0.75, 0.75, 0.75],
    "41-2031.00": [0.25, 0.5, 0.25],  # upper only
    "11-1021.00": [1, 0.75, 0.5, 0],  # mixed: 0.25 / 0.5 / 0.75
    "47-2061.00": [0, 0, 0],
    "15-1252.00": [1, 0.75, 0.25, 0, 0.5],  # no wage cells
}


def read_impacts():
    rows = {}
    with open(DATA / "published_impacts.csv", newline="") as fh:
        for r in csv.DictReader(fh):
            rows[r["wiod_code"]] = {k: float(v) for k, v in r.items() if k.startswith("delta_")}
    return rows


def orthogonal_noise(seed: int, amplitude: float) -> np.ndarray:
    """Noise over HISTORY orthogonal to [1, year] and zero in the reference year."""
    years = np.array(list(HISTORY), dtype=float)
    raw = amplitude * np.sin(1.7 * years + seed) * np.cos(0.3 * seed * years)
    basis = np.column_stack([np.ones_like(years), years - years.mean(), (years == REFERENCE_YEAR).astype(float)])
    q, _ = np.linalg.qr(basis)
    return raw - q @ (q.T @ raw)


def main():
    impacts = read_impacts()
    assert set(impacts) == set(OUTPUT) == set(NAICS)
    codes = sorted(OUTPUT)

    # reference-year intensities
    nu, mu = {}, {}
    for code in codes:
        d = impacts[code]
        if d["delta_output_central"] > 0:
            nu[code] = d["delta_energy_central"] / d["delta_output_central"]
            mu[code] = d["delta_emissions_central"] / d["delta_energy_central"]
        else:
            nu[code], mu[code] = ZERO_IMPACT_INTENSITIES[code]

    # wage bills by occupation kind, $BB
    wages = {}
    for code in codes:
        d = impacts[code]
        xl, xc, xu = (d[f"delta_output_{v}"] / PHI for v in ("lower", "central", "upper"))
        m = 2 * min(xl, xc - xl, xu - xc)
        parts = {"L": xl - 0.25 * m, "C": xc - xl - 0.25 * m, "U": xu - xc - 0.25 * m, "M": m}
        total = max(0.55 * OUTPUT[code], 1.2 * xu)
        parts["N"] = total - sum(parts.values())
        assert all(v >= 0 for v in parts.values()), (code, parts)
        wages[code] = parts

    OUT.mkdir(parents=True, exist_ok=True)

    with open(OUT / "tasks.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["task_id", "soc8", "automation_score"])
        n = 0
        for soc8, scores in TASKS.items():
            for s in scores:
                n += 1
                w.writerow([f"T{n:05d}", soc8, s])

    with open(OUT / "deflator.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["year", "index"])
        for year, idx in DEFLATOR.items():
            w.writerow([year, idx])

    # kind -> [(wage SOC code, share)]
    cells = {
        "L": [("43-9021", 1.0)],
        "C": [("13-201", 0.5), ("23-2011", 0.5)],  # 13-201 is a 5-digit wage cell
        "U": [("41-2031", 1.0)],
        "M": [("11-1021", 1.0)],
        "N": [("47-2061", 0.7), ("53-7062", 0.3)],  # 53-7062 has no task scores
    }
    with open(OUT / "wagebills.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["soc_code", "naics4", "year", "wage_bill_usd"])
        for i, code in enumerate(codes):
            naics_list = NAICS[code]
            splits = [1.0] if len(naics_list) == 1 else [0.6, 0.4]
            for (naics4, *_), split in zip(naics_list, splits):
                for kind, parts in cells.items():
                    for soc, share in parts:
                        real_bb = wages[code][kind] * share * split
                        if real_bb == 0:
                            continue
                        years = WAGE_YEARS
                        if soc == "53-7062":
                            years = WAGE_YEARS[1:]
                        elif kind == "L" and i % 2:
                            years = WAGE_YEARS[:-1]
                        for year in years:
                            nominal = real_bb * 1e9 * DEFLATOR[year] / DEFLATOR[2017]
                            w.writerow([soc, naics4, year, repr(nominal)])

    with open(OUT / "crosswalk.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["naics4", "isic2", "occurrence_count"])
        for code in codes:
            for naics4, isic, count, others in NAICS[code]:
                w.writerow([naics4, isic, count])
                for other, n in others:
                    w.writerow([naics4, other, n])
        for row in UNUSED_CROSSWALK:
            w.writerow(row)

    # projected intensity factors: highlighted industries from their 2023 values,
    # the rest share common factors chosen to hit the economy-wide totals
    dy = {c: impacts[c]["delta_output_central"] for c in codes}
    f_energy, f_carbon = {}, {}
    for code, (_, nu23, mu23) in PROJECTED.items():
        f_energy[code] = nu23 / nu[code]
        f_carbon[code] = mu23 / mu[code]
    named_e = sum(dy[c] * nu[c] * f_energy[c] for c in PROJECTED)
    named_c = sum(dy[c] * nu[c] * f_energy[c] * mu[c] * f_carbon[c] for c in PROJECTED)
    others = [c for c in codes if c not in PROJECTED]
    other_e = sum(dy[c] * nu[c] for c in others)
    other_c = sum(dy[c] * nu[c] * mu[c] for c in others)
    fe = (PROJECTED_ENERGY_PJ - named_e) / other_e
    fc = (PROJECTED_EMISSIONS_KT - named_c) / (fe * other_c)
    for c in others:
        f_energy[c], f_carbon[c] = fe, fc
    print(f"common projected intensity factors: energy {fe:.4f}, emissions {fc:.4f}")

    horizon = TARGET_YEAR - REFERENCE_YEAR
    with open(OUT / "accounts.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["wiod_code", "year", "output_bb_usd2017", "energy_pj", "emissions_ktco2"])
        for i, code in enumerate(codes):
            y14 = float(OUTPUT[code])
            e14 = nu[code] * y14
            c14 = mu[code] * e14
            if code in PROJECTED:
                g_y = math.log(PROJECTED[code][0] / y14) / horizon
            else:
                g_y = 0.005 + 0.025 * ((i * 7) % 11) / 10
            g_e = g_y + math.log(f_energy[code]) / horizon
            g_c = g_e + math.log(f_carbon[code]) / horizon
            noise = [orthogonal_noise(3 * i + k, 0.02) for k in range(3)]
            for j, year in enumerate(HISTORY):
                t = year - REFERENCE_YEAR
                if year == REFERENCE_YEAR:
                    values = (y14, e14, c14)
                else:
                    values = (
                        y14 * math.exp(g_y * t + noise[0][j]),
                        e14 * math.exp(g_e * t + noise[1][j]),
                        c14 * math.exp(g_c * t + noise[2][j]),
                    )
                w.writerow([code, year] + [repr(float(v)) for v in values])

    (OUT / "run.cfg").write_text(
        "# Synthetic bundle calibrated to the published per-industry estimates.\n"
        "tasks = tasks.csv\n"
        "wagebills = wagebills.csv\n"
        "deflator = deflator.csv\n"
        "accounts = accounts.csv\n"
        "crosswalk = crosswalk.csv\n"
        "reference_year = 2014\n"
        "base_year = 2017\n"
        "wage_window = 2019:2022\n"
        "cost_savings.task_fraction = 0.23\n"
        "cost_savings.labor_savings = 0.27\n"
        "cost_savings.annualization_divisor = 1\n"
        "variants = all\n"
        "context.national_capacity_gw = 1144\n"
        "context.national_emissions_gtco2 = 5\n"
        "comparators.chatgpt_inference = 0.2\n"
        "comparators.hardware_low = 5.7\n"
        "comparators.hardware_high = 8.9\n"
        "projection.window = 2000:2014\n"
        "projection.target = 2023\n"
        "selected_industries = P85, J58, G45\n"
        "order = impact\n"
    )
    print(f"wrote fixture to {OUT}")


if __name__ == "__main__":
    main()
