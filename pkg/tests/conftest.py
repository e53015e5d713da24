"""Shared fixtures: the bundled environments, their formulas, and the
radius schedules the end-to-end tests run with."""

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from ltlplan.buchi import translate
from ltlplan.ltl import parse_formula
from ltlplan.workspace import RadiusSchedule, load_environment

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

DATA = Path(__file__).parent / "data"

LOOP2D_FORMULA = "G (F (R1 && F R2) && !O1)"
PATROL2D_FORMULA = "G (F r1 && (F r2 && (F r3 && F r4)) && !(o1 || o2 || o3 || o4))"
HYPER10_FORMULA = "G (F r1 && (F r2 && (F r3)) && !o1)"


class Scenario:
    """Environment, parsed formula, automaton, and a schedule at the
    full conservative radius bound (the 2-D growth tests need the fast
    expansion; the halved CLI default is exercised separately)."""

    def __init__(self, env_name: str, formula: str):
        self.env_path = str(DATA / env_name)
        self.env = load_environment(self.env_path)
        self.formula_text = formula
        self.formula = parse_formula(formula)
        self.buchi = translate(self.formula)
        self.schedule = RadiusSchedule.for_environment(self.env, ratio=2.0, safety=1.0)


@pytest.fixture(scope="session")
def loop2d():
    return Scenario("loop2d_env.json", LOOP2D_FORMULA)


@pytest.fixture(scope="session")
def patrol2d():
    return Scenario("patrol2d_env.json", PATROL2D_FORMULA)


@pytest.fixture(scope="session")
def hyper10():
    return Scenario("hyper10_env.json", HYPER10_FORMULA)
