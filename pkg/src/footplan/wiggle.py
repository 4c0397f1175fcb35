"""Foothold wiggling: shift each planned step a set distance inside its region.

A three-variable QP (x shift, y shift, small rotation) pushes every sole
vertex at least an inset distance inside the support region's convex piece
while moving as little as possible. Infeasible insets retry with the distance
halved down to zero; a still-infeasible foothold is left where it was.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import linprog

from .constants import QP_FEAS_TOL
from .geometry import (
    ConvexPolygon2,
    RigidTransform3,
    clip_area,
    clip_vertices,
    polygon_half_planes,
)
from .planner import PlanStep
from .snapping import FootPolygon, SnapResult, align_to_normal, crop_foothold
from .world import Environment, PlanarRegion, plane_height_at


def _default_weights() -> np.ndarray:
    return np.diag([1.0, 1.0, 0.05])


@dataclass(frozen=True)
class WiggleParams:
    inset_distance: float = 0.02
    max_translation: float = 0.02
    max_rotation: float = math.radians(5.0)
    weights: np.ndarray = field(default_factory=_default_weights)

    def __post_init__(self):
        if self.inset_distance < 0:
            raise ValueError("inset_distance must be non-negative")
        if self.max_translation <= 0 or self.max_rotation <= 0:
            raise ValueError("shift bounds must be positive")
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (3, 3) or not np.allclose(w, np.diag(np.diag(w))) or np.any(np.diag(w) <= 0):
            raise ValueError("weights must be a positive diagonal 3x3 matrix")


@dataclass(frozen=True)
class WiggleQP:
    weights: np.ndarray
    rows: np.ndarray
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray


def build_wiggle_qp(
    foothold: ConvexPolygon2, region_piece: ConvexPolygon2, params: WiggleParams
) -> WiggleQP:
    """Assemble vertex-containment rows for q = (v_x, v_y, theta).

    Vertex i at centroid offset r_i moves by J_i q with the small-angle
    Jacobian J_i = [[1, 0, -r_iy], [0, 1, r_ix]]; each region half-plane row
    a^T x <= b becomes a^T J_i q <= b - d - a^T x_i.
    """
    planes = polygon_half_planes(region_piece)
    normals = np.array(planes.normals)
    offsets = np.array(planes.offsets)
    cx, cy = foothold.centroid()

    rows = []
    rhs = []
    for vx, vy in foothold.vertices:
        rx, ry = vx - cx, vy - cy
        jac = np.array([[1.0, 0.0, -ry], [0.0, 1.0, rx]])
        rows.append(normals @ jac)
        rhs.append(offsets - params.inset_distance - normals @ (vx, vy))
    bound = np.array([params.max_translation, params.max_translation, params.max_rotation])
    return WiggleQP(
        np.asarray(params.weights, dtype=float),
        np.vstack(rows),
        np.concatenate(rhs),
        -bound,
        bound,
    )


def _stationary_point(weights, rows_active, q):
    """Solve the equality-constrained KKT system at the current active set."""
    k = len(rows_active)
    size = 3 + k
    kkt = np.zeros((size, size))
    kkt[:3, :3] = 2.0 * weights
    if k:
        g = np.vstack(rows_active)
        kkt[:3, 3:] = g.T
        kkt[3:, :3] = g
    target = np.zeros(size)
    target[:3] = -2.0 * weights @ q
    try:
        sol = np.linalg.solve(kkt, target)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(kkt, target, rcond=None)[0]
    return sol[:3], sol[3:]


def solve_qp3(qp: WiggleQP) -> np.ndarray | None:
    """Minimize q^T W q subject to rows*q <= rhs and the box bounds.

    Primal active-set iteration started from a phase-1 feasible point; returns
    None when the constraints admit no point (within tolerance).
    """
    box = np.vstack([np.eye(3), -np.eye(3)])
    box_rhs = np.concatenate([qp.upper, -qp.lower])
    g_all = np.vstack([qp.rows, box]) if len(qp.rows) else box
    h_all = np.concatenate([qp.rhs, box_rhs]) if len(qp.rhs) else box_rhs

    feas = linprog(
        np.zeros(3),
        A_ub=qp.rows if len(qp.rows) else None,
        b_ub=qp.rhs if len(qp.rhs) else None,
        bounds=list(zip(qp.lower, qp.upper)),
        method="highs",
    )
    if not feas.success:
        return None
    q = np.asarray(feas.x, dtype=float)
    violation = g_all @ q - h_all
    if violation.max() > QP_FEAS_TOL * 100:
        return None

    active: list[int] = []
    for _ in range(200):
        step, lam = _stationary_point(qp.weights, [g_all[i] for i in active], q)
        if float(np.linalg.norm(step)) <= 1e-12:
            if len(lam) == 0 or float(lam.min()) >= -1e-11:
                return q
            worst = active[int(np.argmin(lam))]
            active.remove(worst)
            continue
        alpha = 1.0
        blocker = -1
        for i in range(len(g_all)):
            if i in active:
                continue
            advance = float(g_all[i] @ step)
            if advance <= 1e-14:
                continue
            room = max(0.0, float(h_all[i] - g_all[i] @ q))
            ratio = room / advance
            if ratio < alpha - 1e-15:
                alpha = ratio
                blocker = i
        q = q + alpha * step
        if blocker >= 0 and alpha < 1.0:
            active.append(blocker)
    return q


def kkt_residual(qp: WiggleQP, q: np.ndarray) -> float:
    """Max of stationarity, complementarity, and feasibility residuals at q."""
    box = np.vstack([np.eye(3), -np.eye(3)])
    g_all = np.vstack([qp.rows, box]) if len(qp.rows) else box
    h_all = np.concatenate([qp.rhs, qp.upper, -qp.lower])
    slack = h_all - g_all @ q
    feasibility = max(0.0, float(-slack.min()))
    active = [i for i in range(len(g_all)) if slack[i] <= 1e-7]
    gradient = 2.0 * qp.weights @ q
    if active:
        g_act = g_all[active]
        lam, *_ = np.linalg.lstsq(g_act.T, -gradient, rcond=None)
        lam = np.maximum(lam, 0.0)
        stationarity = float(np.linalg.norm(gradient + g_act.T @ lam))
    else:
        stationarity = float(np.linalg.norm(gradient))
    return max(feasibility, stationarity)


@dataclass(frozen=True)
class WiggleOutcome:
    step: PlanStep
    translation: tuple[float, float]
    rotation: float
    inset_used: float | None

    @property
    def shift_magnitude(self) -> float:
        return math.hypot(*self.translation)


def _projected_sole_polygon(snap: SnapResult, foot: FootPolygon) -> ConvexPolygon2:
    linear = snap.foothold_pose.rotation[:2, :2]
    center = snap.foothold_pose.translation[:2]
    return ConvexPolygon2(
        [tuple(linear @ (u, v) + center) for u, v in foot.sole.vertices]
    )


def _best_piece(region: PlanarRegion, sole: ConvexPolygon2) -> ConvexPolygon2 | None:
    best = None
    best_area = 0.0
    for piece in region.projected_pieces:
        area = clip_area(clip_vertices(sole.vertices, piece))
        if area > best_area:
            best_area = area
            best = piece
    if best is None:
        return None
    return ConvexPolygon2(best)


def _resnap(
    snap: SnapResult,
    region: PlanarRegion,
    foot: FootPolygon,
    q: np.ndarray,
    centroid: tuple[float, float],
) -> SnapResult:
    vx, vy, theta = float(q[0]), float(q[1]), float(q[2])
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    ox = float(snap.foothold_pose.translation[0]) - centroid[0]
    oy = float(snap.foothold_pose.translation[1]) - centroid[1]
    new_x = centroid[0] + cos_t * ox - sin_t * oy + vx
    new_y = centroid[1] + sin_t * ox + cos_t * oy + vy
    new_yaw = snap.yaw + theta
    z = plane_height_at(region, new_x, new_y)
    rotation, roll, pitch = align_to_normal(new_yaw, region.up_normal)
    pose = RigidTransform3(rotation, np.array([new_x, new_y, z]))
    cropped, fraction = crop_foothold(pose, region, foot)
    return SnapResult(pose, region.region_id, cropped, fraction, roll, pitch)


def wiggle_step(
    step: PlanStep, env: Environment, foot: FootPolygon, params: WiggleParams
) -> WiggleOutcome:
    """Shift one planned step inside its region; unchanged when impossible."""
    snap = step.snap
    region = env.region(snap.region_id)
    sole = _projected_sole_polygon(snap, foot)
    piece = _best_piece(region, sole)
    if piece is None:
        return WiggleOutcome(step, (0.0, 0.0), 0.0, None)

    inset = params.inset_distance
    schedule = [inset / (2.0**k) for k in range(6)] + [0.0]
    centroid = sole.centroid()
    for d in schedule:
        qp = build_wiggle_qp(sole, piece, replace(params, inset_distance=d))
        q = solve_qp3(qp)
        if q is None:
            continue
        new_snap = _resnap(snap, region, foot, q, centroid)
        return WiggleOutcome(
            PlanStep(step.side, new_snap), (float(q[0]), float(q[1])), float(q[2]), d
        )
    return WiggleOutcome(step, (0.0, 0.0), 0.0, None)


def wiggle_plan(
    steps: list[PlanStep], env: Environment, foot: FootPolygon, params: WiggleParams
) -> list[WiggleOutcome]:
    return [wiggle_step(step, env, foot, params) for step in steps]
