"""Scenario files: YAML documents describing one planning problem.

Schema (SI units, angles in radians; only ``bounds``, ``start`` and
``goal`` are required)::

    name: office-replica
    bounds: [xmin, ymin, xmax, ymax]
    obstacles:
      - rect: [xmin, ymin, xmax, ymax]
      - disc: [x, y, radius]
    persons:
      - {x: 1.0, y: 2.0, theta: 0.0}     # sigma_h, sigma_s, sigma_r, tau, body_radius optional
    robot: {base_radius: 0.3, link1_length: 0.6, link2_length: 0.5, wheel_radius: 0.05, link_inflation: 0.0}
    object: {polyline: [[0.0, -0.75], [0.0, 0.75]]}
    interest_points: {base: 1.0, link1_tip: 1.0, object_0: 1.0}   # default: every point, weight 1
    start: [x, y, psi1, psi2]
    goal: [x, y]
    planner: {K: 2000, delta: 1.0, r_near: 1.5, resolution: 0.05, lambda_len: 0.001, seed: 0}
    control: {Kp: 1.5, dt: 0.02}
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path

import yaml

from .control import ControlParams
from .model import Configuration, InterestPointSet, ObjectGeometry, RobotGeometry, point_labels
from .planner import PlannerParams
from .social import Person, SocialField
from .world import Disc, Rect, WorldMap, is_valid


class ScenarioError(ValueError):
    """Parse or validation failure, naming the offending field and line when known."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field {field}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


@dataclass(frozen=True)
class Scenario:
    world: WorldMap
    start: Configuration
    goal_base: tuple[float, float]
    persons: tuple[Person, ...] = ()
    robot: RobotGeometry = field(default_factory=RobotGeometry)
    object: ObjectGeometry = field(default_factory=ObjectGeometry)
    interest_points: InterestPointSet | None = None
    planner: PlannerParams = field(default_factory=PlannerParams)
    control: ControlParams = field(default_factory=ControlParams)
    name: str = "scenario"

    def __post_init__(self):
        if self.interest_points is None:
            object.__setattr__(self, "interest_points", InterestPointSet.uniform(self.object))
        object.__setattr__(self, "persons", tuple(self.persons))
        object.__setattr__(self, "goal_base", (float(self.goal_base[0]), float(self.goal_base[1])))

    @property
    def field(self) -> SocialField:
        return SocialField(self.persons)

    def validate(self) -> None:
        try:
            self.interest_points.validate(self.object)
        except ValueError as exc:
            raise ScenarioError(str(exc), "interest_points") from None
        if not self.world.contains(*self.goal_base):
            raise ScenarioError("goal lies outside the map bounds", "goal")
        if not is_valid(self.start, self.world, self.field, self.robot, self.object):
            raise ScenarioError("start configuration is in collision or out of bounds", "start")

    def with_weights(self, weights: dict[str, float]) -> "Scenario":
        return replace(self, interest_points=InterestPointSet(tuple(weights.items())))


# ---------------------------------------------------------------- parsing


def _line_of(node, path):
    """1-based line of the YAML node at ``path`` (keys and list indices), best effort."""
    line = None
    for key in path:
        if node is None:
            break
        line = node.start_mark.line + 1
        nxt = None
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                if k.value == key:
                    line = k.start_mark.line + 1
                    nxt = v
                    break
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            nxt = node.value[key]
            line = nxt.start_mark.line + 1
        node = nxt
    return line


def _named_key(mapping, exc):
    """The longest key of ``mapping`` mentioned as a whole word in ``exc``, if any."""
    hits = [k for k in mapping if re.search(rf"\b{re.escape(str(k))}\b", str(exc))]
    return max(hits, key=lambda k: len(str(k)), default=None)


class _Reader:
    def __init__(self, data, root_node):
        self.data = data
        self.root = root_node

    def fail(self, msg, *path):
        name = ".".join(str(p) for p in path) if path else None
        raise ScenarioError(msg, name, _line_of(self.root, path))

    def floats(self, value, n, *path):
        if not isinstance(value, (list, tuple)) or len(value) != n:
            self.fail(f"expected a list of {n} numbers", *path)
        try:
            return [float(v) for v in value]
        except (TypeError, ValueError):
            self.fail(f"expected a list of {n} numbers", *path)

    def section(self, key, cls, mapping=None):
        raw = self.data.get(key) or {}
        if not isinstance(raw, dict):
            self.fail("expected a mapping", key)
        allowed = {f.name for f in fields(cls)}
        mapping = mapping or {}
        kwargs = {}
        for k, v in raw.items():
            name = mapping.get(k, k)
            if name not in allowed:
                self.fail(f"unknown key {k!r}", key, k)
            kwargs[name] = v
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            bad = _named_key(raw, exc)
            self.fail(str(exc), *((key, bad) if bad else (key,)))


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    try:
        data = yaml.safe_load(text)
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ScenarioError(f"{source}: invalid YAML: {getattr(exc, 'problem', exc)}", None,
                            mark.line + 1 if mark else None) from None
    if not isinstance(data, dict):
        raise ScenarioError(f"{source}: top level must be a mapping")
    r = _Reader(data, root)
    known = {"name", "bounds", "obstacles", "persons", "robot", "object", "interest_points",
             "start", "goal", "planner", "control"}
    for k in data:
        if k not in known:
            r.fail(f"unknown key {k!r}", k)
    for k in ("bounds", "start", "goal"):
        if k not in data:
            r.fail("missing required key", k)

    try:
        bounds = Rect(*r.floats(data["bounds"], 4, "bounds"))
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        r.fail(str(exc), "bounds")
    obstacles = []
    for i, ob in enumerate(data.get("obstacles") or []):
        if not isinstance(ob, dict) or len(ob) != 1:
            r.fail("obstacle must be {rect: [...]} or {disc: [...]}", "obstacles", i)
        (kind, vals), = ob.items()
        try:
            if kind == "rect":
                obstacles.append(Rect(*r.floats(vals, 4, "obstacles", i, kind)))
            elif kind == "disc":
                obstacles.append(Disc(*r.floats(vals, 3, "obstacles", i, kind)))
            else:
                r.fail(f"unknown obstacle kind {kind!r}", "obstacles", i)
        except ScenarioError:
            raise
        except ValueError as exc:
            r.fail(str(exc), "obstacles", i)

    persons = []
    for i, p in enumerate(data.get("persons") or []):
        if not isinstance(p, dict):
            r.fail("person must be a mapping", "persons", i)
        try:
            persons.append(Person(**{k: float(v) for k, v in p.items()}))
        except (TypeError, ValueError) as exc:
            bad = _named_key(p, exc)
            r.fail(str(exc), *(("persons", i, bad) if bad else ("persons", i)))

    robot = r.section("robot", RobotGeometry)
    raw_obj = data.get("object") or {}
    if not isinstance(raw_obj, dict) or set(raw_obj) - {"polyline"}:
        r.fail("object must be a mapping with a 'polyline' key", "object")
    try:
        polyline = raw_obj.get("polyline", [[0.0, 0.0]])
        obj = ObjectGeometry(tuple(tuple(r.floats(v, 2, "object", "polyline", i)) for i, v in enumerate(polyline)))
    except ScenarioError:
        raise
    except (TypeError, ValueError) as exc:
        r.fail(str(exc), "object", "polyline")

    raw_pts = data.get("interest_points")
    if raw_pts is None:
        pts = InterestPointSet.uniform(obj)
    else:
        if not isinstance(raw_pts, dict):
            r.fail("interest_points must map labels to weights", "interest_points")
        labels = set(point_labels(obj))
        for label in raw_pts:
            if label not in labels:
                r.fail(f"interest point {label!r} does not exist on an object with "
                       f"{len(obj.polyline)} polyline vertices", "interest_points", label)
        try:
            pts = InterestPointSet(tuple((str(k), float(v)) for k, v in raw_pts.items()))
        except (TypeError, ValueError) as exc:
            r.fail(str(exc), "interest_points")

    start = Configuration(*r.floats(data["start"], 4, "start"))
    goal = tuple(r.floats(data["goal"], 2, "goal"))
    planner = r.section("planner", PlannerParams)
    control = r.section("control", ControlParams)
    scenario = Scenario(
        world=WorldMap(bounds, tuple(obstacles)),
        start=start,
        goal_base=goal,
        persons=tuple(persons),
        robot=robot,
        object=obj,
        interest_points=pts,
        planner=planner,
        control=control,
        name=str(data.get("name", Path(source).stem)),
    )
    try:
        scenario.validate()
    except ScenarioError as exc:
        raise ScenarioError(str(exc).split(" (field")[0], exc.field, _line_of(root, (exc.field,))) from None
    return scenario


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc.strerror}") from None
    return parse_scenario(text, str(path))


FIXTURES = ("office", "generic", "weights")


def fixture_path(name: str) -> Path:
    """Path of a shipped replica scenario (``office``, ``generic`` or ``weights``)."""
    if name not in FIXTURES:
        raise ValueError(f"unknown fixture {name!r}; expected one of {FIXTURES}")
    return Path(str(resources.files("socialrrt") / "fixtures" / f"{name}.yaml"))


def load_fixture(name: str) -> Scenario:
    return load_scenario(fixture_path(name))
