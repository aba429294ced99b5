import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ai_energy.exposure import (
    IndustryExposure,
    OccupationExposure,
    binarize,
    exposure_tables,
    industry_exposure,
    occupation_exposure,
    resolve_exposure,
    rollup_soc,
)
from ai_energy.ingest import AUTOMATION_SCORES, TaskExposureRecord
from ai_energy.variants import Variant

from . import oracles

SCORES = st.sampled_from(AUTOMATION_SCORES)


def tasks_for(soc8, scores):
    return [TaskExposureRecord(f"{soc8}-{i}", soc8, s) for i, s in enumerate(scores)]


@pytest.mark.parametrize(
    "score, lower, central, upper",
    [(0.0, 0, 0, 0), (0.25, 0, 0, 1), (0.5, 0, 0, 1), (0.75, 0, 1, 1), (1.0, 1, 1, 1)],
)
def test_binarize_thresholds(score, lower, central, upper):
    assert binarize(score, Variant.LOWER) == lower
    assert binarize(score, Variant.CENTRAL) == central
    assert binarize(score, Variant.UPPER) == upper


def test_binarize_rejects_off_scale_score():
    with pytest.raises(ValueError):
        binarize(0.3, Variant.CENTRAL)


def test_five_task_occupation():
    tasks = tasks_for("11101100", [0.0, 0.25, 0.5, 0.75, 1.0])
    assert occupation_exposure(tasks, Variant.CENTRAL).exposure == 0.4
    assert occupation_exposure(tasks, Variant.UPPER).exposure == 0.8
    assert occupation_exposure(tasks, Variant.LOWER).exposure == 0.2


def test_all_zero_and_all_one():
    assert occupation_exposure(tasks_for("11101100", [0.0] * 4), Variant.UPPER).exposure == 0.0
    assert occupation_exposure(tasks_for("11101100", [1.0] * 4), Variant.LOWER).exposure == 1.0


def test_occupation_needs_one_code():
    with pytest.raises(ValueError):
        occupation_exposure(tasks_for("11101100", [1.0]) + tasks_for("11101200", [1.0]), Variant.CENTRAL)
    with pytest.raises(ValueError):
        occupation_exposure([], Variant.CENTRAL)


def test_rollup_simple_average():
    occ8 = [OccupationExposure("11101100", 0.2), OccupationExposure("11101101", 0.6),
            OccupationExposure("11101200", 1.0)]
    six = {o.soc_code: o.exposure for o in rollup_soc(occ8, 6)}
    assert six == pytest.approx({"111011": 0.4, "111012": 1.0})
    five = {o.soc_code: o.exposure for o in rollup_soc(rollup_soc(occ8, 6), 5)}
    assert five == pytest.approx({"11101": 0.7})


def test_rollup_rejects_short_codes():
    with pytest.raises(ValueError):
        rollup_soc([OccupationExposure("11101", 0.2)], 6)
    with pytest.raises(ValueError):
        rollup_soc([OccupationExposure("11101100", 0.2)], 4)


def test_resolution_order():
    occ6 = {"111011": 0.9}
    occ5 = {"11101": 0.3, "13201": 0.5}
    assert resolve_exposure("111011", occ6, occ5) == 0.9
    assert resolve_exposure("111012", occ6, occ5) == 0.3
    assert resolve_exposure("13201", occ6, occ5) == 0.5
    assert resolve_exposure("999999", occ6, occ5) == 0.0


def test_industry_rate_from_two_occupations():
    occ6 = [OccupationExposure("111011", 1.0), OccupationExposure("132011", 0.0)]
    wages = {("111011", "5111"): 30e9, ("132011", "5111"): 70e9}
    (ie,) = industry_exposure(occ6, [], wages)
    assert ie.exposed_wage_bill == pytest.approx(30.0)
    assert ie.total_wage_bill == pytest.approx(100.0)
    assert ie.exposure_rate == pytest.approx(0.30, abs=1e-12)


def test_unscored_occupation_contributes_zero():
    occ6 = [OccupationExposure("111011", 0.5)]
    wages = {("111011", "5111"): 10e9, ("537062", "5111"): 10e9}
    (ie,) = industry_exposure(occ6, [], wages)
    assert ie.exposure_rate == pytest.approx(0.25)


def test_zero_wage_industry_is_reported():
    diags = []
    out = industry_exposure([OccupationExposure("111011", 0.5)], [], {("111011", "5111"): 0.0}, diags)
    assert out[0].exposure_rate == 0.0
    assert diags and diags[0].subject == "5111"


def test_three_industries_against_oracle():
    task_scores = {
        "11101100": [0.0, 0.75, 1.0],
        "11101101": [0.25, 0.25],
        "13201100": [0.5, 0.75, 0.75, 1.0],
        "13201200": [0.0],
        "41203100": [1.0, 1.0, 0.0],
    }
    tasks = [t for soc, sc in task_scores.items() for t in tasks_for(soc, sc)]
    wages = {
        ("111011", "5111"): 4.0e9, ("132011", "5111"): 6.0e9,
        ("132012", "6111"): 2.5e9, ("412031", "6111"): 7.5e9,
        ("111011", "4451"): 1.0e9, ("999999", "4451"): 3.0e9,
    }
    tables = exposure_tables(tasks, wages)
    for variant in ("lower", "central", "upper"):
        want = oracles.industry_rates(task_scores, {k: int(v) for k, v in wages.items()}, variant)
        got = {ie.code: ie for ie in tables[Variant(variant)]}
        assert got.keys() == want.keys()
        for naics, (exposed, total) in want.items():
            assert got[naics].exposed_wage_bill == pytest.approx(float(exposed) / 1e9, rel=1e-12)
            assert got[naics].total_wage_bill == pytest.approx(float(total) / 1e9, rel=1e-12)


def test_industry_exposure_rejects_overshoot():
    with pytest.raises(ValueError):
        IndustryExposure("5111", 2.0, 1.0)


# -- properties ---------------------------------------------------------------

task_lists = st.lists(SCORES, min_size=1, max_size=12)


@settings(max_examples=300)
@given(task_lists)
def test_occupation_exposure_bounded_and_ordered(scores):
    tasks = tasks_for("11101100", scores)
    lo, mid, hi = (occupation_exposure(tasks, v).exposure for v in (Variant.LOWER, Variant.CENTRAL, Variant.UPPER))
    assert 0.0 <= lo <= mid <= hi <= 1.0


@settings(max_examples=300)
@given(task_lists, st.randoms(use_true_random=False))
def test_occupation_exposure_permutation_invariant(scores, rnd):
    shuffled = list(scores)
    rnd.shuffle(shuffled)
    for v in Variant:
        assert occupation_exposure(tasks_for("11101100", scores), v) == occupation_exposure(
            tasks_for("11101100", shuffled), v
        )


@settings(max_examples=300)
@given(task_lists, st.sampled_from(list(Variant)))
def test_occupation_exposure_matches_oracle(scores, variant):
    got = occupation_exposure(tasks_for("11101100", scores), variant).exposure
    assert got == pytest.approx(float(oracles.occupation_share(scores, variant.value)), abs=1e-15)


wage_cells = st.dictionaries(
    st.tuples(st.sampled_from(["111011", "132011", "412031", "13201"]), st.sampled_from(["5111", "6111"])),
    # USD amounts; subnormal floats are not meaningful wage bills
    st.one_of(st.just(0.0), st.floats(1e-3, 1e12)),
    min_size=1,
)
exposure_values = st.fixed_dictionaries(
    {"111011": st.floats(0, 1), "132011": st.floats(0, 1), "412031": st.floats(0, 1), "13201": st.floats(0, 1)}
)


def _industries(expo, wages):
    occ6 = [OccupationExposure(k, v) for k, v in expo.items() if len(k) == 6]
    occ5 = [OccupationExposure(k, v) for k, v in expo.items() if len(k) == 5]
    return industry_exposure(occ6, occ5, wages)


@settings(max_examples=300)
@given(exposure_values, wage_cells)
def test_industry_rate_bounded(expo, wages):
    for ie in _industries(expo, wages):
        assert 0.0 <= ie.exposure_rate <= 1.0


@settings(max_examples=200)
@given(exposure_values, wage_cells, st.floats(1e-3, 1e3))
def test_industry_rate_scale_invariant(expo, wages, c):
    base = _industries(expo, wages)
    scaled = _industries(expo, {k: v * c for k, v in wages.items()})
    for a, b in zip(base, scaled):
        assert a.exposure_rate == pytest.approx(b.exposure_rate, rel=1e-9, abs=1e-12)
