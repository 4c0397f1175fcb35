"""Edge validity battery: every reason a parent-to-child step can be rejected.

Checks run in a fixed, short-circuiting order so rejection statistics are
stable: snap failure, incline, support area, step geometry (self overlap,
stance bounds, height change, tall-step shrink), cliff clearance, step-over
obstacle, body box.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .constants import BOUNDARY_SLACK
from .geometry import (
    ConvexPolygon2,
    Pose2,
    convex_sets_distance,
    polygons_overlap,
    rectangle_polygon,
    transform_points,
    wrap_angle,
)
from .lattice import Side
from .snapping import FootPolygon, SnapFailure, SnapResult
from .world import Environment, plane_height_at


class RejectionReason(enum.Enum):
    UNSNAPPABLE = "unsnappable"
    TOO_STEEP = "too_steep"
    INSUFFICIENT_AREA = "insufficient_area"
    BAD_STANCE_GEOMETRY = "bad_stance_geometry"
    STEP_TOO_HIGH_OR_LOW = "step_too_high_or_low"
    TALL_STEP_TOO_LONG = "tall_step_too_long"
    CLIFF_TOO_CLOSE = "cliff_too_close"
    STEP_OVER_OBSTACLE = "step_over_obstacle"
    BODY_BOX_COLLISION = "body_box_collision"
    SELF_OVERLAP = "self_overlap"


def _default_clearance() -> ConvexPolygon2:
    return rectangle_polygon(0.23, 0.115)


@dataclass(frozen=True)
class CheckerParams:
    max_incline: float = math.radians(40.0)
    min_area_fraction: float = 0.75
    stance_clearance: ConvexPolygon2 = field(default_factory=_default_clearance)
    max_forward: float = 0.45
    max_backward: float = 0.25
    max_inward: float = 0.0
    max_outward: float = 0.40
    max_reach: float = 0.50
    max_step_up: float = 0.35
    max_step_down: float = 0.35
    tall_step_height: float = 0.20
    tall_step_max_length: float = 0.32
    tall_step_max_width: float = 0.25
    cliff_height: float = 0.10
    cliff_clearance: float = 0.05
    step_over_height: float = 0.35
    body_box_width: float = 0.60
    body_box_depth: float = 0.40
    body_box_bottom: float = 0.30
    body_box_top: float = 1.50

    def __post_init__(self):
        if not 0.0 < self.min_area_fraction <= 1.0:
            raise ValueError("min_area_fraction must lie in (0, 1]")
        for name in (
            "max_incline",
            "max_reach",
            "max_step_up",
            "max_step_down",
            "tall_step_height",
            "cliff_height",
            "cliff_clearance",
            "step_over_height",
            "body_box_width",
            "body_box_depth",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.body_box_top <= self.body_box_bottom:
            raise ValueError("body_box_top must exceed body_box_bottom")


def check_incline(snap: SnapResult, params: CheckerParams) -> RejectionReason | None:
    cos_r, sin_r = math.cos(snap.surface_roll), math.sin(snap.surface_roll)
    cos_p, sin_p = math.cos(snap.surface_pitch), math.sin(snap.surface_pitch)
    tilt = math.atan2(math.hypot(sin_p * cos_r, sin_r), cos_p * cos_r)
    if tilt > params.max_incline + BOUNDARY_SLACK:
        return RejectionReason.TOO_STEEP
    return None


def check_area(snap: SnapResult, params: CheckerParams) -> RejectionReason | None:
    if snap.area_fraction < params.min_area_fraction - BOUNDARY_SLACK:
        return RejectionReason.INSUFFICIENT_AREA
    return None


def _planar_pose(snap: SnapResult) -> Pose2:
    return snap.planar_pose


@lru_cache(maxsize=64)
def _circumradius(polygon: ConvexPolygon2) -> float:
    return max(math.hypot(x, y) for x, y in polygon.vertices)


def check_step_geometry(
    parent_snap: SnapResult,
    child_snap: SnapResult,
    stance_side: Side,
    params: CheckerParams,
    foot: FootPolygon,
) -> RejectionReason | None:
    parent = _planar_pose(parent_snap)
    child = _planar_pose(child_snap)

    # Bounding circles screen out the far-apart majority before the exact test.
    reach_limit = _circumradius(params.stance_clearance) + _circumradius(foot.sole)
    if math.hypot(child.x - parent.x, child.y - parent.y) <= reach_limit:
        child_outline = transform_points(foot.sole.vertices, child)
        clearance = transform_points(params.stance_clearance.vertices, parent)
        if polygons_overlap(child_outline, clearance):
            return RejectionReason.SELF_OVERLAP

    cos_y, sin_y = math.cos(parent.yaw), math.sin(parent.yaw)
    ox, oy = child.x - parent.x, child.y - parent.y
    dx = ox * cos_y + oy * sin_y
    lateral = stance_side.mirror_sign * (-ox * sin_y + oy * cos_y)
    slack = BOUNDARY_SLACK
    if (
        dx > params.max_forward + slack
        or -dx > params.max_backward + slack
        or lateral > params.max_outward + slack
        or -lateral > params.max_inward + slack
        or math.hypot(ox, oy) > params.max_reach + slack
    ):
        return RejectionReason.BAD_STANCE_GEOMETRY

    dz = float(child_snap.foothold_pose.translation[2] - parent_snap.foothold_pose.translation[2])
    if dz > params.max_step_up + slack or -dz > params.max_step_down + slack:
        return RejectionReason.STEP_TOO_HIGH_OR_LOW

    if abs(dz) >= params.tall_step_height - slack:
        if dx > params.tall_step_max_length + slack or lateral > params.tall_step_max_width + slack:
            return RejectionReason.TALL_STEP_TOO_LONG
    return None


def _projected_sole(snap: SnapResult, foot: FootPolygon) -> list[tuple[float, float]]:
    linear = snap.foothold_pose.rotation[:2, :2]
    center = snap.foothold_pose.translation[:2]
    return [tuple(linear @ (u, v) + center) for u, v in foot.sole.vertices]


def check_cliff_clearance(
    child_snap: SnapResult, env: Environment, params: CheckerParams, foot: FootPolygon
) -> RejectionReason | None:
    center = child_snap.foothold_pose.translation
    foot_z = float(center[2])
    outline = _projected_sole(child_snap, foot)
    ox_lo = min(p[0] for p in outline)
    oy_lo = min(p[1] for p in outline)
    ox_hi = max(p[0] for p in outline)
    oy_hi = max(p[1] for p in outline)
    limit = params.cliff_clearance - BOUNDARY_SLACK
    for region in env.regions:
        height = plane_height_at(region, float(center[0]), float(center[1]))
        if height is None or height < foot_z + params.cliff_height - BOUNDARY_SLACK:
            continue
        for piece, box in zip(region.projected_pieces, region.piece_bounds_xy):
            # Box separation lower-bounds the exact distance, so a clear box
            # gap can skip the segment-pair scan without changing the verdict.
            gx = max(box[0] - ox_hi, ox_lo - box[2], 0.0)
            gy = max(box[1] - oy_hi, oy_lo - box[3], 0.0)
            if gx * gx + gy * gy >= limit * limit:
                continue
            if convex_sets_distance(outline, piece) < limit:
                return RejectionReason.CLIFF_TOO_CLOSE
    return None


def _sat_disjoint(verts_a: np.ndarray, verts_b: np.ndarray, axes) -> bool:
    for axis in axes:
        norm = float(np.linalg.norm(axis))
        if norm < 1e-12:
            continue
        unit = axis / norm
        pa = verts_a @ unit
        pb = verts_b @ unit
        if pa.max() < pb.min() - BOUNDARY_SLACK or pb.max() < pa.min() - BOUNDARY_SLACK:
            return True
    return False


def _piece_axes(piece: np.ndarray, normal: np.ndarray):
    edges = np.roll(piece, -1, axis=0) - piece
    rim = [np.cross(e, normal) for e in edges]
    return edges, rim


def _polytope_hits_piece(
    verts: np.ndarray, face_normals, edge_dirs, piece: np.ndarray, piece_normal: np.ndarray
) -> bool:
    piece_edges, piece_rim = _piece_axes(piece, piece_normal)
    axes = list(face_normals) + [piece_normal] + piece_rim
    for d in edge_dirs:
        for e in piece_edges:
            axes.append(np.cross(d, e))
    return not _sat_disjoint(verts, piece, axes)


def check_step_over(
    parent_snap: SnapResult,
    child_snap: SnapResult,
    env: Environment,
    params: CheckerParams,
    foot: FootPolygon,
) -> RejectionReason | None:
    """Swept-leg proxy: a horizontal rectangle between the feet must be clear."""
    pa = parent_snap.foothold_pose.translation
    pb = child_snap.foothold_pose.translation
    z = max(float(pa[2]), float(pb[2])) + params.step_over_height
    ax, ay = float(pa[0]), float(pa[1])
    bx, by = float(pb[0]), float(pb[1])
    length = math.hypot(bx - ax, by - ay)
    if length < 1e-12:
        direction = (1.0, 0.0)
    else:
        direction = ((bx - ax) / length, (by - ay) / length)
    perp = (-direction[1], direction[0])
    _, min_w, _, max_w = foot.sole.bounds
    half = (max_w - min_w) / 2.0
    corners = [
        (ax + perp[0] * half, ay + perp[1] * half),
        (ax - perp[0] * half, ay - perp[1] * half),
        (bx - perp[0] * half, by - perp[1] * half),
        (bx + perp[0] * half, by + perp[1] * half),
    ]
    x_lo = min(c[0] for c in corners)
    y_lo = min(c[1] for c in corners)
    x_hi = max(c[0] for c in corners)
    y_hi = max(c[1] for c in corners)
    rect = None
    for region in env.regions:
        if region.z_min > z + BOUNDARY_SLACK or region.z_max < z - BOUNDARY_SLACK:
            continue
        rx0, ry0, rx1, ry1 = region.bounds_xy
        if rx1 < x_lo or rx0 > x_hi or ry1 < y_lo or ry0 > y_hi:
            continue
        if rect is None:
            rect = np.array([(cx, cy, z) for cx, cy in corners])
            up = np.array([0.0, 0.0, 1.0])
            rect_edges = [
                np.array([direction[0], direction[1], 0.0]),
                np.array([perp[0], perp[1], 0.0]),
            ]
            rect_axes = [up] + [np.cross(e, up) for e in rect_edges]
        for piece in region.world_pieces:
            if _polytope_hits_piece(rect, rect_axes, rect_edges, piece, region.up_normal):
                return RejectionReason.STEP_OVER_OBSTACLE
    return None


def midstance_pose(parent: Pose2, child: Pose2) -> Pose2:
    return Pose2(
        (parent.x + child.x) / 2.0,
        (parent.y + child.y) / 2.0,
        parent.yaw + wrap_angle(child.yaw - parent.yaw) / 2.0,
    )


def check_body_box(
    parent_snap: SnapResult,
    child_snap: SnapResult,
    env: Environment,
    params: CheckerParams,
) -> RejectionReason | None:
    mid_z = (
        float(parent_snap.foothold_pose.translation[2])
        + float(child_snap.foothold_pose.translation[2])
    ) / 2.0
    z_lo = mid_z + params.body_box_bottom
    z_hi = mid_z + params.body_box_top
    near = [
        region
        for region in env.regions
        if not (region.z_min > z_hi + BOUNDARY_SLACK or region.z_max < z_lo - BOUNDARY_SLACK)
    ]
    if not near:
        return None
    mid = midstance_pose(_planar_pose(parent_snap), _planar_pose(child_snap))
    cos_y, sin_y = math.cos(mid.yaw), math.sin(mid.yaw)
    half_d = params.body_box_depth / 2.0
    half_w = params.body_box_width / 2.0
    corners_2d = [
        (mid.x + cos_y * sx * half_d - sin_y * sy * half_w,
         mid.y + sin_y * sx * half_d + cos_y * sy * half_w)
        for sx, sy in ((1, 1), (1, -1), (-1, -1), (-1, 1))
    ]
    x_lo = min(c[0] for c in corners_2d)
    y_lo = min(c[1] for c in corners_2d)
    x_hi = max(c[0] for c in corners_2d)
    y_hi = max(c[1] for c in corners_2d)
    verts = None
    for region in near:
        rx0, ry0, rx1, ry1 = region.bounds_xy
        if rx1 < x_lo or rx0 > x_hi or ry1 < y_lo or ry0 > y_hi:
            continue
        if verts is None:
            verts = np.array([(x, y, z) for z in (z_lo, z_hi) for x, y in corners_2d])
            axes_box = [
                np.array([cos_y, sin_y, 0.0]),
                np.array([-sin_y, cos_y, 0.0]),
                np.array([0.0, 0.0, 1.0]),
            ]
        for piece in region.world_pieces:
            if _polytope_hits_piece(verts, axes_box, axes_box, piece, region.up_normal):
                return RejectionReason.BODY_BOX_COLLISION
    return None


def validate_edge(
    parent_snap: SnapResult,
    child_snap: SnapResult | SnapFailure,
    stance_side: Side,
    env: Environment,
    params: CheckerParams,
    foot: FootPolygon,
) -> RejectionReason | None:
    """First failing check in battery order, or None when the edge is valid."""
    if isinstance(child_snap, SnapFailure):
        return RejectionReason.UNSNAPPABLE
    verdict = check_incline(child_snap, params)
    if verdict is None:
        verdict = check_area(child_snap, params)
    if verdict is None:
        verdict = check_step_geometry(parent_snap, child_snap, stance_side, params, foot)
    if verdict is None:
        verdict = check_cliff_clearance(child_snap, env, params, foot)
    if verdict is None:
        verdict = check_step_over(parent_snap, child_snap, env, params, foot)
    if verdict is None:
        verdict = check_body_box(parent_snap, child_snap, env, params)
    return verdict
