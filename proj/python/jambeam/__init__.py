"""Jamming-beam robot simulator: Python front end to the C++ core."""

import json

from . import _core
from ._core import Error, characteristic_moments, critical_moment

__all__ = [
    "Error",
    "Session",
    "characteristic_moments",
    "critical_moment",
    "deflection_experiment",
    "plan",
    "run_scenario",
]


def _text(obj):
    if obj is None:
        return ""
    return obj if isinstance(obj, str) else json.dumps(obj)


def run_scenario(document):
    """Runs a scenario (dict or JSON text) and returns the trace records."""
    return [json.loads(line) for line in _core.run_scenario(_text(document)).splitlines()]


def deflection_experiment(pressures_pa, load_n, jammed, spec=None):
    return json.loads(_core.deflection_experiment(list(pressures_pa), load_n, jammed, _text(spec)))


def plan(goal, spec=None):
    """Joint angles and action script for a goal polyline [[x, y], ...]."""
    return json.loads(_core.plan(_text(goal), _text(spec)))


class Session:
    """One simulated robot held in process."""

    _manager = None

    def __init__(self, spec=None):
        if Session._manager is None:
            Session._manager = _core.SessionManager()
        self.id = Session._manager.create(_text(spec))

    def state(self):
        return json.loads(Session._manager.state(self.id))

    def apply(self, action):
        return json.loads(Session._manager.apply(self.id, _text(action)))

    def plan(self, goal):
        return json.loads(Session._manager.plan(self.id, _text(goal)))
