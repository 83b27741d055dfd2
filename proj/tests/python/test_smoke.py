import math

import pytest

import jambeam


def test_moments():
    wrinkle, collapse = jambeam.characteristic_moments(6900.0)
    assert wrinkle == pytest.approx(math.pi / 2 * 6900.0 * 0.043**3)
    assert collapse == pytest.approx(2 * wrinkle)
    assert jambeam.critical_moment(5200.0) == pytest.approx(0.68 * math.pi * 5200.0 * 0.043**3)
    assert jambeam.critical_moment(5200.0, jammed=True) == pytest.approx(2 * jambeam.critical_moment(5200.0))


def test_scenario_run():
    doc = {
        "spec": {},
        "script": [
            {"action": "UnjamPouch", "pouch": 3},
            {"action": "PullCable", "side": "left", "length_m": 0.0608},
            {"action": "JamPouch", "pouch": 3},
        ],
    }
    records = jambeam.run_scenario(doc)
    snaps = [r for r in records if r["type"] == "snapshot"]
    assert len(snaps) == 4
    joint = snaps[-1]["joints"][0]
    assert joint["pouch"] == 3 and joint["locked"]
    assert joint["angle_rad"] == pytest.approx(math.pi / 2, abs=2e-3)


def test_schema_error_has_path():
    with pytest.raises(jambeam.Error) as info:
        jambeam.run_scenario({"spec": {}, "script": [{"action": "JamPouch", "pouch": 9}]})
    message, kind, path = info.value.args
    assert kind == "schema"
    assert path == "script[0].pouch"
    assert "JamPouch" in message


def test_deflection_sweep():
    psi = 6894.757293168
    rows = jambeam.deflection_experiment(
        [0.5 * psi, 1.0 * psi, 2.0 * psi], 0.150 * 9.81, False, {"length_m": 0.6, "num_pouches": 4}
    )
    assert rows[0]["buckled"] and rows[0]["tip_deflection_m"] is None
    assert rows[1]["tip_deflection_m"] > rows[2]["tip_deflection_m"]


def test_plan_and_session():
    goal = {"polyline": [[0, 0], [0.45, 0], [0.45, 0.75]]}
    result = jambeam.plan(goal)
    assert [a["action"] for a in result["script"]] == ["UnjamPouch", "PullCable", "JamPouch"]
    s = jambeam.Session()
    assert s.state()["revision"] == 0
    for action in result["script"]:
        state = s.apply(action)
    assert state["revision"] == 3
    assert state["pouch_states"][3] == "jammed"
    assert s.plan(goal)["angles_rad"][3] == pytest.approx(math.pi / 2)
    with pytest.raises(jambeam.Error):
        s.apply({"action": "Grow", "length_m": 5.0})
