"""Edge costs and the inflated cost-to-go heuristic with blended goal heading."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import COST_EPS
from .geometry import Point2, Pose2, wrap_angle
from .lattice import Side
from .snapping import SnapResult
from .validity import midstance_pose


@dataclass(frozen=True)
class CostParams:
    w_distance: float = 1.0
    w_height: float = 2.0
    w_yaw: float = 0.3
    w_area: float = 1.0
    w_roll_pitch: float = 0.5
    cost_per_step: float = 0.15
    inflation: float = 1.5
    final_turn_radius: float = 0.5
    max_step_length_for_heuristic: float = 0.45
    nominal_stance_width: float = 0.25

    def __post_init__(self):
        for name in ("w_distance", "w_height", "w_yaw", "w_area", "w_roll_pitch", "cost_per_step"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.inflation < 1.0:
            raise ValueError("inflation must be at least 1")
        if self.final_turn_radius <= 0:
            raise ValueError("final_turn_radius must be positive")
        if self.max_step_length_for_heuristic <= 0:
            raise ValueError("max_step_length_for_heuristic must be positive")
        if self.nominal_stance_width <= 0:
            raise ValueError("nominal_stance_width must be positive")


def _planar(snap: SnapResult) -> Pose2:
    return snap.planar_pose


def edge_cost(
    parent_snap: SnapResult,
    child_snap: SnapResult,
    stance_side: Side,
    params: CostParams,
) -> float:
    """Step cost: midstance displacement from the parent's nominal midstance,
    height change, midstance yaw change, uncovered foothold area, and surface
    roll/pitch, plus a constant per-step charge."""
    parent = _planar(parent_snap)
    child = _planar(child_snap)

    offset = stance_side.mirror_sign * params.nominal_stance_width / 2.0
    cos_y, sin_y = math.cos(parent.yaw), math.sin(parent.yaw)
    nominal_mid = (parent.x - sin_y * offset, parent.y + cos_y * offset)

    mid = midstance_pose(parent, child)
    d_mid = math.hypot(mid.x - nominal_mid[0], mid.y - nominal_mid[1])
    d_yaw = abs(wrap_angle(mid.yaw - parent.yaw))
    dz = abs(
        float(child_snap.foothold_pose.translation[2])
        - float(parent_snap.foothold_pose.translation[2])
    )
    return (
        params.w_distance * d_mid
        + params.w_height * dz
        + params.w_yaw * d_yaw
        + params.w_area * (1.0 - child_snap.area_fraction)
        + params.w_roll_pitch * (abs(child_snap.surface_roll) + abs(child_snap.surface_pitch))
        + params.cost_per_step
    )


def reference_yaw(position: Point2, goal: Pose2, start: Pose2, params: CostParams) -> float:
    """Desired heading at a position: toward the goal far away, blending into
    the goal's own yaw inside the final turn radius."""
    dx = goal.x - position[0]
    dy = goal.y - position[1]
    distance = math.hypot(dx, dy)
    if distance < 1e-12:
        sx, sy = goal.x - start.x, goal.y - start.y
        heading = math.atan2(sy, sx) if math.hypot(sx, sy) > 1e-12 else goal.yaw
    else:
        heading = math.atan2(dy, dx)
    if distance >= params.final_turn_radius:
        return heading
    blend = 1.0 - distance / params.final_turn_radius
    return wrap_angle(heading + wrap_angle(goal.yaw - heading) * blend)


def heuristic_cost(pose: Pose2, goal: Pose2, start: Pose2, params: CostParams) -> float:
    distance = math.hypot(goal.x - pose.x, goal.y - pose.y)
    yaw_error = abs(wrap_angle(pose.yaw - reference_yaw((pose.x, pose.y), goal, start, params)))
    steps = math.ceil(distance / params.max_step_length_for_heuristic - COST_EPS)
    steps = max(0, steps)
    return params.inflation * (
        params.w_distance * distance
        + params.w_yaw * yaw_error
        + steps * params.cost_per_step
    )
