"""Flat JSON parameter file covering lattice, expansion, checks, costs, wiggle.

Every key is optional and falls back to the built-in default; unknown keys are
rejected so typos fail loudly. Geometry-valued entries (stance clearance, foot
sole) are vertex lists.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .costing import CostParams
from .geometry import ConvexPolygon2, GeometryError
from .lattice import ExpansionParams, LatticeParams
from .snapping import FootPolygon, default_foot
from .validity import CheckerParams
from .wiggle import WiggleParams


class ParamsError(ValueError):
    """Raised when a parameters document is malformed."""


@dataclass(frozen=True)
class ParamsBundle:
    lattice: LatticeParams = field(default_factory=LatticeParams)
    expansion: ExpansionParams = field(default_factory=ExpansionParams)
    checker: CheckerParams = field(default_factory=CheckerParams)
    cost: CostParams = field(default_factory=CostParams)
    wiggle: WiggleParams = field(default_factory=WiggleParams)
    foot: FootPolygon = field(default_factory=default_foot)
    goal_tolerance: float = 0.2
    goal_tolerance_yaw: float = 0.3

    def __post_init__(self):
        if self.wiggle.inset_distance >= self.lattice.xy_resolution:
            raise ParamsError("wiggle_inset_distance must be below xy_resolution")


_LATTICE_KEYS = {"xy_resolution", "yaw_resolution"}
_EXPANSION_KEYS = {
    "expansion_min_length",
    "expansion_max_length",
    "expansion_min_width",
    "expansion_max_width",
    "expansion_min_yaw_delta",
    "expansion_max_yaw_delta",
    "expansion_max_reach",
}
_CHECKER_KEYS = {
    "max_incline",
    "min_area_fraction",
    "max_forward",
    "max_backward",
    "max_inward",
    "max_outward",
    "max_reach",
    "max_step_up",
    "max_step_down",
    "tall_step_height",
    "tall_step_max_length",
    "tall_step_max_width",
    "cliff_height",
    "cliff_clearance",
    "step_over_height",
    "body_box_width",
    "body_box_depth",
    "body_box_bottom",
    "body_box_top",
}
_COST_KEYS = {
    "w_distance",
    "w_height",
    "w_yaw",
    "w_area",
    "w_roll_pitch",
    "cost_per_step",
    "inflation",
    "final_turn_radius",
    "max_step_length_for_heuristic",
    "nominal_stance_width",
}
_WIGGLE_KEYS = {"wiggle_inset_distance", "wiggle_max_translation", "wiggle_max_rotation"}
_POLYGON_KEYS = {"stance_clearance", "foot_sole"}
_SCALAR_EXTRAS = {"goal_tolerance", "goal_tolerance_yaw"}
_LIST_EXTRAS = {"wiggle_weights"}
_ALL_KEYS = (
    _LATTICE_KEYS
    | _EXPANSION_KEYS
    | _CHECKER_KEYS
    | _COST_KEYS
    | _WIGGLE_KEYS
    | _POLYGON_KEYS
    | _SCALAR_EXTRAS
    | _LIST_EXTRAS
)


def _float_of(doc: dict, key: str) -> float:
    value = doc[key]
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ParamsError(f"{key} must be a number")
    if not math.isfinite(float(value)):
        raise ParamsError(f"{key} must be finite")
    return float(value)


def _polygon_of(doc: dict, key: str) -> ConvexPolygon2:
    try:
        verts = [(float(p[0]), float(p[1])) for p in doc[key]]
        return ConvexPolygon2(verts)
    except (TypeError, ValueError, IndexError, GeometryError) as exc:
        raise ParamsError(f"{key}: {exc}") from None


def load_params(document) -> ParamsBundle:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParamsError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ParamsError("parameters document must be a JSON object")
    unknown = sorted(set(document) - _ALL_KEYS)
    if unknown:
        raise ParamsError(f"unknown parameter keys: {', '.join(unknown)}")

    def group(keys, strip=""):
        out = {}
        for key in keys:
            if key in document:
                out[key[len(strip):] if strip else key] = _float_of(document, key)
        return out

    try:
        lattice = LatticeParams(**group(_LATTICE_KEYS))
        expansion = ExpansionParams(**group(_EXPANSION_KEYS, strip="expansion_"))
        checker_kwargs = group(_CHECKER_KEYS)
        if "stance_clearance" in document:
            checker_kwargs["stance_clearance"] = _polygon_of(document, "stance_clearance")
        checker = CheckerParams(**checker_kwargs)
        cost = CostParams(**group(_COST_KEYS))
        wiggle_kwargs = group(_WIGGLE_KEYS, strip="wiggle_")
        if "wiggle_weights" in document:
            diag = [float(v) for v in document["wiggle_weights"]]
            if len(diag) != 3:
                raise ParamsError("wiggle_weights must have 3 diagonal entries")
            wiggle_kwargs["weights"] = np.diag(diag)
        wiggle = WiggleParams(**wiggle_kwargs)
        foot = (
            FootPolygon(_polygon_of(document, "foot_sole"))
            if "foot_sole" in document
            else default_foot()
        )
        return ParamsBundle(
            lattice,
            expansion,
            checker,
            cost,
            wiggle,
            foot,
            goal_tolerance=(
                _float_of(document, "goal_tolerance") if "goal_tolerance" in document else 0.2
            ),
            goal_tolerance_yaw=(
                _float_of(document, "goal_tolerance_yaw")
                if "goal_tolerance_yaw" in document
                else 0.3
            ),
        )
    except ParamsError:
        raise
    except (ValueError, GeometryError) as exc:
        raise ParamsError(str(exc)) from None


def params_to_dict(bundle: ParamsBundle) -> dict:
    checker = bundle.checker
    cost = bundle.cost
    expansion = bundle.expansion
    doc = {
        "xy_resolution": bundle.lattice.xy_resolution,
        "yaw_resolution": bundle.lattice.yaw_resolution,
        "goal_tolerance": bundle.goal_tolerance,
        "goal_tolerance_yaw": bundle.goal_tolerance_yaw,
        "foot_sole": [[x, y] for x, y in bundle.foot.sole.vertices],
        "stance_clearance": [[x, y] for x, y in checker.stance_clearance.vertices],
        "wiggle_inset_distance": bundle.wiggle.inset_distance,
        "wiggle_max_translation": bundle.wiggle.max_translation,
        "wiggle_max_rotation": bundle.wiggle.max_rotation,
        "wiggle_weights": [float(v) for v in np.diag(bundle.wiggle.weights)],
    }
    for key in _EXPANSION_KEYS:
        doc[key] = getattr(expansion, key[len("expansion_"):])
    for key in _CHECKER_KEYS:
        doc[key] = getattr(checker, key)
    for key in _COST_KEYS:
        doc[key] = getattr(cost, key)
    return doc


def params_to_json(bundle: ParamsBundle) -> str:
    return json.dumps(params_to_dict(bundle), indent=2, sort_keys=True) + "\n"
