import json

import pytest

import mmvplan


TINY = json.dumps(
    {
        "name": "tiny",
        "horizon": 2,
        "temp_center_cost": 10.0,
        "groups": [
            {"id": "A", "risk": 0.8, "eps": 0.06, "temporary_only": False},
            {"id": "B", "risk": 0.5, "eps": 0.025, "temporary_only": False},
        ],
        "permanent_centers": [{"id": "I1", "capacity": 6.0}],
        "temporary_centers": [{"id": "J1", "capacity": 5.0}],
        "macrozones": [{"id": "Z1", "neighborhoods": ["N1", "N2"]}],
        "neighborhoods": [
            {"id": "N1", "coverage": ["N1", "N2"], "demand": {"A": 4, "B": 3}},
            {"id": "N2", "coverage": ["N1", "N2"], "demand": {"A": 2, "B": 5}},
        ],
        "supply": [9, 9],
    }
)


def test_priority_weight_anchor():
    assert mmvplan.priority_weight(0.8, 0.3, 1) == pytest.approx(0.26)


def test_generate_validates():
    doc = mmvplan.generate("s1", seed=1)
    assert mmvplan.validate(doc) == []
    assert mmvplan.temp_share_lower_bound(doc) == pytest.approx(51.58, abs=0.01)


def test_generate_requires_seed():
    with pytest.raises(ValueError):
        mmvplan.generate("s2")


def test_solve_tiny():
    result = mmvplan.solve(TINY, alpha=0.5, backend="oracle")
    assert result["status"] == "optimal"
    metrics = result["metrics"]
    assert metrics["total_doses"] == pytest.approx(14.0, abs=1e-6)
    assert 0.0 <= metrics["P"] <= 100.0
    assert metrics["D"] == 2


def test_sweep_anchors():
    points = mmvplan.sweep(TINY, alphas=[0.0, 1.0], backend="oracle")
    assert [p["alpha"] for p in points] == [0.0, 1.0]
    f1 = [p["objective_values"]["f1"] for p in points]
    f2 = [p["objective_values"]["f2"] for p in points]
    assert f1[1] <= f1[0] + 1e-9
    assert f2[0] <= f2[1] + 1e-9
