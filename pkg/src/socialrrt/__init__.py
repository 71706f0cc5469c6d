"""Socially aware whole-body RRT* for a mobile manipulator carrying an object."""

from .control import ControlParams, follow_path
from .model import Configuration, InterestPointSet, ObjectGeometry, RobotGeometry
from .planner import VARIANTS, PlannerParams, PlanResult, plan
from .scenario import Scenario, ScenarioError, load_fixture, load_scenario
from .social import Person, SocialField, agf, agf_raw
from .world import Disc, Rect, WorldMap

__version__ = "0.1.0"

__all__ = [
    "ControlParams", "follow_path", "Configuration", "InterestPointSet", "ObjectGeometry",
    "RobotGeometry", "VARIANTS", "PlannerParams", "PlanResult", "plan", "Scenario",
    "ScenarioError", "load_fixture", "load_scenario", "Person", "SocialField", "agf",
    "agf_raw", "Disc", "Rect", "WorldMap",
]
