"""2D convex polygons, half-plane sets, planar poses and 3D rigid transforms.

Everything 2D is pure Python over float tuples: the polygons involved are
tiny (4-8 vertices) and sit on the planner's hottest path, where tuple math
beats array round-trips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import (
    BOUNDARY_SLACK,
    CONVEXITY_TOL,
    DUPLICATE_VERTEX_TOL,
    MIN_POLYGON_AREA,
    ROTATION_TOL,
    SLIVER_AREA,
)

Point2 = tuple[float, float]


class GeometryError(ValueError):
    """Raised when a polygon or transform invariant is violated."""


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = angle % math.tau
    if a > math.pi:
        a -= math.tau
    return a


def _signed_area(vertices) -> float:
    total = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return 0.5 * total


def _dedupe(vertices) -> list[Point2]:
    out: list[Point2] = []
    for v in vertices:
        p = (float(v[0]), float(v[1]))
        if out and abs(p[0] - out[-1][0]) <= DUPLICATE_VERTEX_TOL and abs(p[1] - out[-1][1]) <= DUPLICATE_VERTEX_TOL:
            continue
        out.append(p)
    if len(out) > 1 and abs(out[0][0] - out[-1][0]) <= DUPLICATE_VERTEX_TOL and abs(out[0][1] - out[-1][1]) <= DUPLICATE_VERTEX_TOL:
        out.pop()
    return out


class ConvexPolygon2:
    """Convex polygon with counter-clockwise winding, validated on construction.

    Vertices are stored as a tuple of (x, y) float tuples. Consecutive
    duplicates are merged; fewer than three distinct vertices, clockwise
    winding, concavity beyond tolerance, or near-zero area raise
    GeometryError.
    """

    __slots__ = ("vertices", "area")

    def __init__(self, vertices):
        verts = _dedupe(vertices)
        if len(verts) < 3:
            raise GeometryError(f"polygon needs >= 3 distinct vertices, got {len(verts)}")
        for x, y in verts:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise GeometryError("polygon vertex is not finite")
        area = _signed_area(verts)
        if area <= MIN_POLYGON_AREA:
            if area < 0:
                raise GeometryError("polygon winding is clockwise, expected counter-clockwise")
            raise GeometryError(f"polygon area {area:g} is degenerate")
        n = len(verts)
        for i in range(n):
            ax, ay = verts[i]
            bx, by = verts[(i + 1) % n]
            cx, cy = verts[(i + 2) % n]
            e1x, e1y = bx - ax, by - ay
            e2x, e2y = cx - bx, cy - by
            cross = e1x * e2y - e1y * e2x
            scale = max(1.0, math.hypot(e1x, e1y) * math.hypot(e2x, e2y))
            if cross < -CONVEXITY_TOL * scale:
                raise GeometryError("polygon is not convex")
        self.vertices: tuple[Point2, ...] = tuple(verts)
        self.area: float = area

    def __eq__(self, other):
        return isinstance(other, ConvexPolygon2) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"ConvexPolygon2({list(self.vertices)!r})"

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def centroid(self) -> Point2:
        cx = cy = 0.0
        n = len(self.vertices)
        for i in range(n):
            x0, y0 = self.vertices[i]
            x1, y1 = self.vertices[(i + 1) % n]
            w = x0 * y1 - x1 * y0
            cx += (x0 + x1) * w
            cy += (y0 + y1) * w
        k = 1.0 / (6.0 * self.area)
        return cx * k, cy * k


def rectangle_polygon(length: float, width: float, center: Point2 = (0.0, 0.0)) -> ConvexPolygon2:
    """Axis-aligned rectangle, length along x and width along y."""
    hx, hy = length / 2.0, width / 2.0
    cx, cy = center
    return ConvexPolygon2(
        [(cx + hx, cy - hy), (cx + hx, cy + hy), (cx - hx, cy + hy), (cx - hx, cy - hy)]
    )


@dataclass(frozen=True)
class HalfPlaneSet:
    """Intersection of half-planes normal . p <= offset, unit outward normals."""

    normals: tuple[Point2, ...]
    offsets: tuple[float, ...]

    def contains(self, point, slack: float = BOUNDARY_SLACK) -> bool:
        x, y = point
        for (nx, ny), off in zip(self.normals, self.offsets):
            if nx * x + ny * y - off > slack:
                return False
        return True

    def margins(self, point) -> list[float]:
        """Signed distance inside each half-plane (positive = inside)."""
        x, y = point
        return [off - (nx * x + ny * y) for (nx, ny), off in zip(self.normals, self.offsets)]


def polygon_half_planes(polygon: ConvexPolygon2) -> HalfPlaneSet:
    """Edge half-planes of a CCW convex polygon, outward unit normals."""
    normals = []
    offsets = []
    verts = polygon.vertices
    n = len(verts)
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        length = math.hypot(ex, ey)
        nx, ny = ey / length, -ex / length
        normals.append((nx, ny))
        offsets.append(nx * ax + ny * ay)
    return HalfPlaneSet(tuple(normals), tuple(offsets))


def inset_half_planes(polygon: ConvexPolygon2, distance: float) -> HalfPlaneSet:
    """Half-plane set of the polygon with every edge pulled inward by distance.

    The result may be empty as a set; callers test membership rather than
    rebuilding a polygon.
    """
    if distance < 0:
        raise GeometryError(f"inset distance must be >= 0, got {distance}")
    hp = polygon_half_planes(polygon)
    return HalfPlaneSet(hp.normals, tuple(o - distance for o in hp.offsets))


def point_in_polygon(point, polygon: ConvexPolygon2, slack: float = BOUNDARY_SLACK) -> bool:
    """Boundary-inclusive containment test."""
    x, y = point
    verts = polygon.vertices
    n = len(verts)
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        # outward normal is (ey, -ex); allow `slack` meters outside the edge
        d = (ey * (x - ax) - ex * (y - ay)) / math.hypot(ex, ey)
        if d > slack:
            return False
    return True


def polygon_area(polygon: ConvexPolygon2) -> float:
    return polygon.area


def clip_vertices(subject, clip_verts, slack: float = BOUNDARY_SLACK) -> list[Point2]:
    """Sutherland-Hodgman clip of `subject` against convex CCW `clip_verts`.

    Operates on raw vertex sequences so hot paths can skip polygon
    re-validation. Returns a (possibly empty) vertex list.
    """
    output = list(subject)
    n = len(clip_verts)
    for i in range(n):
        if not output:
            return []
        ax, ay = clip_verts[i]
        bx, by = clip_verts[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        scale = math.hypot(ex, ey)
        if scale <= DUPLICATE_VERTEX_TOL:
            continue
        input_verts = output
        output = []
        prev = input_verts[-1]
        prev_d = (ey * (prev[0] - ax) - ex * (prev[1] - ay)) / scale
        for cur in input_verts:
            cur_d = (ey * (cur[0] - ax) - ex * (cur[1] - ay)) / scale
            if cur_d <= slack:
                if prev_d > slack:
                    t = prev_d / (prev_d - cur_d)
                    output.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
                output.append(cur)
            elif prev_d <= slack:
                t = prev_d / (prev_d - cur_d)
                output.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
            prev, prev_d = cur, cur_d
    return output


def clip_area(vertices) -> float:
    """Area of a raw clip output; 0.0 for degenerate results."""
    verts = _dedupe(vertices)
    if len(verts) < 3:
        return 0.0
    return max(0.0, _signed_area(verts))


def clip_convex(a: ConvexPolygon2, b: ConvexPolygon2) -> ConvexPolygon2 | None:
    """Intersection of two convex polygons; None when empty or a sliver."""
    raw = clip_vertices(a.vertices, b.vertices)
    if clip_area(raw) <= SLIVER_AREA:
        return None
    return ConvexPolygon2(raw)


@dataclass(frozen=True)
class Pose2:
    """Planar pose; yaw normalized to (-pi, pi]."""

    x: float
    y: float
    yaw: float

    def __post_init__(self):
        object.__setattr__(self, "yaw", wrap_angle(self.yaw))


def transform_polygon(polygon: ConvexPolygon2, pose: Pose2) -> ConvexPolygon2:
    """Rigidly map a polygon by a planar pose (rotate by yaw, then translate)."""
    c, s = math.cos(pose.yaw), math.sin(pose.yaw)
    return ConvexPolygon2(
        [(pose.x + c * x - s * y, pose.y + s * x + c * y) for x, y in polygon.vertices]
    )


def transform_points(points, pose: Pose2) -> list[Point2]:
    c, s = math.cos(pose.yaw), math.sin(pose.yaw)
    return [(pose.x + c * x - s * y, pose.y + s * x + c * y) for x, y in points]


# ---------------------------------------------------------------------------
# Separation / distance helpers (2D)


def _project_interval(verts, ax, ay):
    lo = hi = ax * verts[0][0] + ay * verts[0][1]
    for x, y in verts[1:]:
        d = ax * x + ay * y
        if d < lo:
            lo = d
        elif d > hi:
            hi = d
    return lo, hi


def polygons_overlap(verts_a, verts_b, slack: float = BOUNDARY_SLACK) -> bool:
    """Separating-axis overlap test; touching within `slack` counts as disjoint."""
    for verts in (verts_a, verts_b):
        n = len(verts)
        for i in range(n):
            ax, ay = verts[i]
            bx, by = verts[(i + 1) % n]
            ex, ey = bx - ax, by - ay
            length = math.hypot(ex, ey)
            if length < 1e-15:
                continue
            nx, ny = ey / length, -ex / length
            lo_a, hi_a = _project_interval(verts_a, nx, ny)
            lo_b, hi_b = _project_interval(verts_b, nx, ny)
            if hi_a <= lo_b + slack or hi_b <= lo_a + slack:
                return False
    return True


def point_segment_distance(p, a, b) -> float:
    px, py = p
    ax, ay = a
    bx, by = b
    ex, ey = bx - ax, by - ay
    denom = ex * ex + ey * ey
    if denom < 1e-30:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * ex + (py - ay) * ey) / denom
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(px - (ax + t * ex), py - (ay + t * ey))


def segment_segment_distance(a0, a1, b0, b1) -> float:
    if _segments_intersect(a0, a1, b0, b1):
        return 0.0
    return min(
        point_segment_distance(a0, b0, b1),
        point_segment_distance(a1, b0, b1),
        point_segment_distance(b0, a0, a1),
        point_segment_distance(b1, a0, a1),
    )


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _segments_intersect(a0, a1, b0, b1) -> bool:
    d1 = _orient(b0, b1, a0)
    d2 = _orient(b0, b1, a1)
    d3 = _orient(a0, a1, b0)
    d4 = _orient(a0, a1, b1)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    return False


def convex_sets_distance(verts_a, verts_b) -> float:
    """Distance between two convex vertex sets (0 when they overlap).

    Either argument may be degenerate (collinear points); the test walks the
    closed vertex chains, so segments cover every boundary.
    """
    if len(verts_a) >= 3 and len(verts_b) >= 3 and polygons_overlap(verts_a, verts_b, slack=0.0):
        return 0.0
    best = math.inf
    na, nb = len(verts_a), len(verts_b)
    for i in range(na):
        a0 = verts_a[i]
        a1 = verts_a[(i + 1) % na]
        for j in range(nb):
            b0 = verts_b[j]
            b1 = verts_b[(j + 1) % nb]
            d = segment_segment_distance(a0, a1, b0, b1)
            if d < best:
                best = d
                if best == 0.0:
                    return 0.0
    return best


def point_to_convex_distance(point, verts) -> float:
    """Distance from a point to a convex vertex set (0 inside)."""
    if len(verts) >= 3:
        area = abs(_signed_area(verts))
        if area > MIN_POLYGON_AREA:
            inside = True
            ccw = _signed_area(verts) > 0
            n = len(verts)
            for i in range(n):
                a = verts[i]
                b = verts[(i + 1) % n]
                o = _orient(a, b, point)
                if (o < 0) if ccw else (o > 0):
                    inside = False
                    break
            if inside:
                return 0.0
    n = len(verts)
    if n == 1:
        return math.hypot(point[0] - verts[0][0], point[1] - verts[0][1])
    best = math.inf
    for i in range(n):
        d = point_segment_distance(point, verts[i], verts[(i + 1) % n])
        if d < best:
            best = d
    return best


# ---------------------------------------------------------------------------
# 3D rigid transforms


@dataclass(frozen=True, eq=False)
class RigidTransform3:
    """Proper rigid transform: rotation (3x3, orthonormal, det +1) + translation."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rot = np.array(self.rotation, dtype=float)
        tr = np.array(self.translation, dtype=float)
        if rot.shape != (3, 3):
            raise GeometryError(f"rotation must be 3x3, got {rot.shape}")
        if tr.shape != (3,):
            raise GeometryError(f"translation must be length 3, got {tr.shape}")
        if not np.all(np.isfinite(rot)) or not np.all(np.isfinite(tr)):
            raise GeometryError("transform entries must be finite")
        err = np.abs(rot.T @ rot - np.eye(3)).max()
        if err > ROTATION_TOL * 10:
            raise GeometryError(f"rotation is not orthonormal (error {err:g})")
        det = float(np.linalg.det(rot))
        if abs(det - 1.0) > ROTATION_TOL * 10:
            raise GeometryError(f"rotation determinant {det:g} != 1")
        rot.setflags(write=False)
        tr.setflags(write=False)
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", tr)

    @classmethod
    def identity(cls) -> "RigidTransform3":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def trusted(cls, rotation: np.ndarray, translation: np.ndarray) -> "RigidTransform3":
        """Skip validation for rotations built from known-orthonormal factors."""
        obj = object.__new__(cls)
        rotation.setflags(write=False)
        translation.setflags(write=False)
        object.__setattr__(obj, "rotation", rotation)
        object.__setattr__(obj, "translation", translation)
        return obj

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map (N,3) or (3,) points into the parent frame."""
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation.T + self.translation

    def inverse(self) -> "RigidTransform3":
        rt = self.rotation.T
        return RigidTransform3(rt, -(rt @ self.translation))


def rotation_z(yaw: float) -> np.ndarray:
    c, s = math.cos(yaw), math.sin(yaw)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def yaw_of_rotation(rotation: np.ndarray) -> float:
    """Yaw of a Rz(yaw) @ Ry(pitch) @ Rx(roll) factorization (|pitch| < pi/2)."""
    return math.atan2(rotation[1, 0], rotation[0, 0])
