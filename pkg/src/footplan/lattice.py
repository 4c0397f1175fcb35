"""Footstep lattice: discrete node set and the reachability-box expansion."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from .constants import EXPANSION_BOUND_SLACK, YAW_DIVISION_TOL
from .geometry import Pose2, wrap_angle


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def opposite(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT

    @property
    def mirror_sign(self) -> float:
        """+1 when the swing foot sits at positive stance-frame y, else -1."""
        return -1.0 if self is Side.LEFT else 1.0


@dataclass(frozen=True, slots=True)
class FootstepNode:
    """One lattice vertex: grid position, yaw bin, and which foot stands there."""

    x_index: int
    y_index: int
    yaw_index: int
    side: Side


@dataclass(frozen=True, slots=True)
class LatticeParams:
    xy_resolution: float = 0.05
    yaw_resolution: float = math.tau / 36.0

    def __post_init__(self):
        if self.xy_resolution <= 0 or self.yaw_resolution <= 0:
            raise ValueError("lattice resolutions must be positive")
        count = math.tau / self.yaw_resolution
        if abs(count - round(count)) > YAW_DIVISION_TOL:
            raise ValueError("yaw_resolution must evenly divide a full turn")

    @property
    def yaw_count(self) -> int:
        return round(math.tau / self.yaw_resolution)


@dataclass(frozen=True, slots=True)
class ExpansionParams:
    """Reachability box for child placement, in the parent's stance frame.

    Lengths run along the stance foot's heading (negative = backward). Widths
    are measured toward the swing side and mirror automatically for the other
    foot, as do the yaw bounds.
    """

    min_length: float = -0.25
    max_length: float = 0.45
    min_width: float = 0.125
    max_width: float = 0.40
    min_yaw_delta: float = -math.pi / 6.0
    max_yaw_delta: float = math.pi / 6.0
    max_reach: float = 0.55

    def __post_init__(self):
        if self.min_length > self.max_length:
            raise ValueError("min_length must not exceed max_length")
        if self.min_width > self.max_width:
            raise ValueError("min_width must not exceed max_width")
        if self.min_yaw_delta > self.max_yaw_delta:
            raise ValueError("min_yaw_delta must not exceed max_yaw_delta")
        if self.max_reach <= 0:
            raise ValueError("max_reach must be positive")


def node_to_pose(node: FootstepNode, params: LatticeParams) -> Pose2:
    return Pose2(
        node.x_index * params.xy_resolution,
        node.y_index * params.xy_resolution,
        wrap_angle(node.yaw_index * params.yaw_resolution),
    )


def _round_half_away(value: float) -> int:
    if value >= 0.0:
        return int(math.floor(value + 0.5))
    return int(math.ceil(value - 0.5))


def pose_to_node(pose: Pose2, side: Side, params: LatticeParams) -> FootstepNode:
    """Nearest lattice vertex, rounding half away from zero on each axis."""
    return FootstepNode(
        _round_half_away(pose.x / params.xy_resolution),
        _round_half_away(pose.y / params.xy_resolution),
        _round_half_away(pose.yaw / params.yaw_resolution) % params.yaw_count,
        side,
    )


@lru_cache(maxsize=512)
def _expansion_offsets(
    lattice: LatticeParams, expansion: ExpansionParams, side: Side, yaw_index: int
) -> tuple[tuple[int, int, int], ...]:
    """Child index offsets (dx_index, dy_index, dyaw_steps) for one yaw bin.

    Offsets are translation-invariant: the reachability box depends only on
    the stance side and the parent's yaw bin, so the scan runs once per
    (side, yaw) and is cached.
    """
    res = lattice.xy_resolution
    yaw = wrap_angle(yaw_index * lattice.yaw_resolution)
    sign = side.mirror_sign
    cos_y, sin_y = math.cos(yaw), math.sin(yaw)
    slack = EXPANSION_BOUND_SLACK

    # Mirrored lateral bounds give the stance-frame dy interval for this side.
    dy_lo, dy_hi = sorted((sign * expansion.min_width, sign * expansion.max_width))
    corners = [
        (dx, dy)
        for dx in (expansion.min_length, expansion.max_length)
        for dy in (dy_lo, dy_hi)
    ]
    world = [(dx * cos_y - dy * sin_y, dx * sin_y + dy * cos_y) for dx, dy in corners]
    reach = expansion.max_reach
    wx_lo = max(min(w[0] for w in world), -reach)
    wx_hi = min(max(w[0] for w in world), reach)
    wy_lo = max(min(w[1] for w in world), -reach)
    wy_hi = min(max(w[1] for w in world), reach)

    yaw_steps = sorted(
        int(sign) * k
        for k in range(
            math.ceil(expansion.min_yaw_delta / lattice.yaw_resolution - slack),
            math.floor(expansion.max_yaw_delta / lattice.yaw_resolution + slack) + 1,
        )
    )

    cells = []
    for jx in range(math.ceil(wx_lo / res - slack) - 1, math.floor(wx_hi / res + slack) + 2):
        for jy in range(math.ceil(wy_lo / res - slack) - 1, math.floor(wy_hi / res + slack) + 2):
            ox = jx * res
            oy = jy * res
            dx = ox * cos_y + oy * sin_y
            dy = -ox * sin_y + oy * cos_y
            lateral = sign * dy
            if not (expansion.min_length - slack <= dx <= expansion.max_length + slack):
                continue
            if not (expansion.min_width - slack <= lateral <= expansion.max_width + slack):
                continue
            if math.hypot(dx, dy) > reach + slack:
                continue
            cells.append((dx, dy, jx, jy))

    ordered = []
    for dx, dy, jx, jy in sorted(cells):
        for step in yaw_steps:
            ordered.append((dx, dy, step * lattice.yaw_resolution, jx, jy, step))
    ordered.sort(key=lambda item: (item[0], item[1], item[2]))
    return tuple((jx, jy, step) for _, _, _, jx, jy, step in ordered)


def expand_node(
    parent: FootstepNode, lattice: LatticeParams, expansion: ExpansionParams
) -> list[FootstepNode]:
    """All opposite-side lattice vertices inside the parent's reachability box.

    Candidates come from scanning the box's world-aligned bounding rectangle,
    keeping cells whose stance-frame offset satisfies the length, width, and
    Euclidean-reach bounds, then crossing with the allowed yaw offsets. The
    result is duplicate-free and sorted by stance-frame (dx, dy, dyaw).
    """
    count = lattice.yaw_count
    offsets = _expansion_offsets(lattice, expansion, parent.side, parent.yaw_index % count)
    child_side = parent.side.opposite
    return [
        FootstepNode(
            parent.x_index + jx, parent.y_index + jy, (parent.yaw_index + step) % count, child_side
        )
        for jx, jy, step in offsets
    ]
