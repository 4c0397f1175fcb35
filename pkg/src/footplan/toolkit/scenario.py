"""Scripted worlds that change over time, replayed one step per tick.

A scenario script bundles a starting environment, start and goal poses, and a
timeline of region insertions and removals. The runner replans every tick
from the simulated stance, advances one step along the fresh plan, and logs a
trace entry per tick.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..geometry import GeometryError, Pose2
from ..params import ParamsBundle, ParamsError, load_params
from ..planner import PlannerRequest, PlanStatus, plan
from ..world import Environment, PlanarRegion, WorldLoadError, load_environment


class ScenarioError(ValueError):
    """Raised when a scenario script is malformed."""


@dataclass(frozen=True)
class TimelineEvent:
    time: float
    action: str
    region: PlanarRegion | None = None
    region_id: int | None = None


@dataclass(frozen=True)
class ScenarioScript:
    environment: Environment
    start_left: Pose2
    start_right: Pose2
    goal: Pose2
    events: tuple[TimelineEvent, ...] = ()
    replan_period: float = 1.0
    timeout: float = 1.0
    max_ticks: int = 120
    params: ParamsBundle = field(default_factory=ParamsBundle)


def _pose_of(doc, key: str) -> Pose2:
    try:
        x, y, yaw = (float(v) for v in doc[key])
        return Pose2(x, y, yaw)
    except (KeyError, TypeError, ValueError):
        raise ScenarioError(f"scenario field {key!r} must be [x, y, yaw]") from None


def _region_of(doc: dict) -> PlanarRegion:
    loaded = load_environment({"regions": [doc]})
    return loaded.regions[0]


def load_scenario_script(document) -> ScenarioScript:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ScenarioError("scenario document must be a JSON object")
    try:
        environment = load_environment(document.get("environment", {}))
    except WorldLoadError as exc:
        raise ScenarioError(f"environment: {exc}") from None
    start_left = _pose_of(document, "start_left")
    start_right = _pose_of(document, "start_right")
    goal = _pose_of(document, "goal")

    events = []
    for idx, entry in enumerate(document.get("events", [])):
        if not isinstance(entry, dict) or "time" not in entry or "action" not in entry:
            raise ScenarioError(f"event {idx}: needs time and action")
        time = float(entry["time"])
        action = str(entry["action"])
        if action == "add-region":
            if "region" not in entry:
                raise ScenarioError(f"event {idx}: add-region needs a region object")
            try:
                region = _region_of(entry["region"])
            except (WorldLoadError, GeometryError) as exc:
                raise ScenarioError(f"event {idx}: {exc}") from None
            events.append(TimelineEvent(time, action, region=region))
        elif action == "remove-region":
            if "id" not in entry:
                raise ScenarioError(f"event {idx}: remove-region needs an id")
            events.append(TimelineEvent(time, action, region_id=int(entry["id"])))
        else:
            raise ScenarioError(f"event {idx}: unknown action {action!r}")
    events.sort(key=lambda e: e.time)

    try:
        params = load_params(document.get("params", {}))
    except ParamsError as exc:
        raise ScenarioError(f"params: {exc}") from None
    return ScenarioScript(
        environment=environment,
        start_left=start_left,
        start_right=start_right,
        goal=goal,
        events=tuple(events),
        replan_period=float(document.get("replan_period", 1.0)),
        timeout=float(document.get("timeout", 1.0)),
        max_ticks=int(document.get("max_ticks", 120)),
        params=params,
    )


def _apply_events(env: Environment, events, now: float, cursor: int):
    applied = []
    while cursor < len(events) and events[cursor].time <= now + 1e-12:
        event = events[cursor]
        if event.action == "add-region":
            env = env.with_region(event.region)
        else:
            if event.region_id not in env:
                raise ScenarioError(f"remove-region: id {event.region_id} not present")
            env = env.without_region(event.region_id)
        applied.append(event)
        cursor += 1
    return env, applied, cursor


def _request(script: ScenarioScript, env, left: Pose2, right: Pose2) -> PlannerRequest:
    p = script.params
    return PlannerRequest(
        env=env,
        start_left=left,
        start_right=right,
        goal_midstance=script.goal,
        goal_tolerance=p.goal_tolerance,
        goal_tolerance_yaw=p.goal_tolerance_yaw,
        timeout=script.timeout,
        lattice=p.lattice,
        expansion=p.expansion,
        checker=p.checker,
        cost=p.cost,
        foot=p.foot,
    )


def run_anytime_scenario(script: ScenarioScript) -> dict:
    """Run the scripted timeline and return a JSON-ready trace.

    Arrival means the planner reports a solution with zero remaining steps,
    i.e. a start foot already satisfies its goal pose.
    """
    env = script.environment
    left, right = script.start_left, script.start_right
    cursor = 0
    ticks = []
    arrived = False
    tick = 0
    while tick < script.max_ticks and not arrived:
        now = tick * script.replan_period
        env, applied, cursor = _apply_events(env, script.events, now, cursor)
        result = plan(_request(script, env, left, right))
        arrived = result.status is PlanStatus.FOUND_SOLUTION and not result.steps
        advanced = None
        if result.steps:
            step = result.steps[0]
            snap = step.snap
            pose = Pose2(float(snap.center[0]), float(snap.center[1]), snap.yaw)
            if step.side.value == "left":
                left = pose
            else:
                right = pose
            advanced = {
                "side": step.side.value,
                "pose": [pose.x, pose.y, pose.yaw],
                "area_fraction": snap.area_fraction,
            }
        ticks.append(
            {
                "time": now,
                "events": [
                    {
                        "action": e.action,
                        "id": e.region.region_id if e.region is not None else e.region_id,
                    }
                    for e in applied
                ],
                "region_ids": [r.region_id for r in env.regions],
                "status": result.status.value,
                "plan_steps": len(result.steps),
                "path_cost": result.stats.path_cost,
                "nodes_expanded": result.stats.nodes_expanded,
                "tracker_history": list(result.tracker_history),
                "advanced": advanced,
            }
        )
        if not arrived and not result.steps and cursor >= len(script.events):
            break  # stuck with no pending world changes
        tick += 1
    return {
        "arrived": arrived,
        "final_stance": {
            "left": [left.x, left.y, left.yaw],
            "right": [right.x, right.y, right.yaw],
        },
        "ticks": ticks,
    }
