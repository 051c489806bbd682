import math
import random

import pytest

import ecograde as eg


def test_band_scores():
    labels = {"Very Good": 1.0, "good": 0.75, "Average": 0.5, "poor": 0.25, "very_poor": 0.0}
    for label, score in labels.items():
        assert eg.band_to_score(label) == score
    with pytest.raises(ValueError):
        eg.band_to_score("N/A")


def test_haversine_and_walking():
    assert eg.haversine_km(51.5, -0.12, 51.5, -0.12) == 0.0
    assert eg.haversine_km(0, 0, 0, 180) == pytest.approx(math.pi * 6371.0, rel=1e-12)
    assert eg.haversine_km(51.5074, -0.1278, 48.8566, 2.3522) == pytest.approx(343.556, abs=1e-3)
    assert eg.walking_time_hours(2.5) == 0.5
    with pytest.raises(eg.EcoGradeError):
        eg.haversine_km(91, 0, 0, 0)


def test_factors_and_leaf_scale():
    assert eg.consumption_factor(250) == 0.5
    assert eg.consumption_factor(900) == 0.0
    assert eg.efficiency_factor([1.0, None, 0.5]) == 0.75
    assert eg.efficiency_factor([None, None]) is None
    assert eg.supplier_factor(0.6, True) == pytest.approx(0.3)
    assert eg.supplier_factor(0.6) == 0.6
    assert eg.supplier_factor(None) is None
    assert eg.transport_factor(0.25) == 0.75
    assert eg.to_leaf_scale(0.0) == 0.0
    assert eg.to_leaf_scale(1.0) == 5.0
    assert eg.to_leaf_scale(0.5) == pytest.approx(5 * math.log(5.5) / math.log(10), rel=1e-14)
    assert eg.ecograde([3.0, None, 4.0, None]) == 3.5
    assert eg.leaves_for(2.5) == 3
    with pytest.raises(eg.EcoGradeError):
        eg.ecograde([None, None, None, None])


def test_co2():
    e = eg.co2_estimate(100, 100, 100, 50, electricity_kg_per_kwh=0.2)
    assert e == {"avg": 1.0, "low": 1.0, "high": 1.0}
    r = eg.co2_estimate(200, 150, 260, 40, gas_heated=True)
    assert r["low"] <= r["avg"] <= r["high"]


def test_effect_size_and_label():
    assert eg.cohens_d_percent(2.0) == pytest.approx(100 * 2 / math.sqrt(8), abs=1e-12)
    d = eg.cohens_d(1.0, 0.5, 10, 2.0, 0.5, 10)
    assert d == pytest.approx(-2.0)
    label = eg.emissions_label(1.0, 0.5, 10, "London", 1, 2.0, 0.5, 10)
    assert label == "-70.7% Lower emissions compared to a typical 1-bed apartment in London"


def test_tost_against_statsmodels():
    weightstats = pytest.importorskip("statsmodels.stats.weightstats")
    rng = random.Random(5)
    for _ in range(10):
        g1 = [rng.gauss(2.8, 0.3) for _ in range(rng.randint(5, 120))]
        g2 = [rng.gauss(2.8 + rng.uniform(-0.1, 0.1), 0.3) for _ in range(rng.randint(5, 120))]
        ours = eg.tost_equivalence(g1, g2)
        p, lower, upper = weightstats.ttost_ind(g1, g2, -0.1, 0.1, usevar="unequal")
        assert ours["p_lower"] == pytest.approx(lower[1], abs=1e-9)
        assert ours["p_upper"] == pytest.approx(upper[1], abs=1e-9)
        assert ours["equivalent"] == (p < 0.05)


def test_small_validation_run():
    summary = eg.run_validation(seed=3, cities=2, addresses=200)
    assert summary["n_direct"] + summary["n_interpolated"] == 400
    assert len(summary["cities"]) == 2
    shifted = eg.run_validation(seed=3, cities=2, addresses=200, inject_shift=0.5)
    assert not shifted["tost"]["equivalent"]
    assert eg.run_validation(seed=3, cities=2, addresses=200) == summary


def test_score_from_records():
    bands = {k: "good" for k in ("walls", "roof", "windows", "lighting")}
    cert = {"address_key": "1 MILL ST", "postcode": "LS1 1AA", "floor_area": 50.0, "kwh_per_m2": 250.0,
            "lodgement_date": "2021-01-01", "headline_rating": "D", "gas_main_heat": False, "bands": bands}
    listing = {"id": "X", "address": "1 Mill St", "postcode": "ls1 1aa", "latitude": 53.8, "longitude": -1.55,
               "bedrooms": 1, "city": "Leeds"}
    out = eg.score([listing], [cert])
    report = out["reports"][0]
    assert out["diagnostics"] == []
    assert report["provenance"]["kind"] == "direct"
    expected = (eg.to_leaf_scale(0.5) + eg.to_leaf_scale(0.75)) / 2
    assert report["overall"] == pytest.approx(expected, rel=1e-14)
    assert report["missing_factors"] == ["supplier", "transport"]
