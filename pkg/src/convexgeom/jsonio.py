"""JSON readers and writers.

Readers accept unsorted input and an absent ``format`` key.  Writers always
emit the normalized form: each set as a sorted label array, the family
sorted by size and then lexicographically, keys sorted, ``"format": 1``.
"""

from __future__ import annotations

import json
from typing import Any

from . import FORMAT_VERSION
from .affine import PointConfig
from .core import AxiomViolation, ConvexGeometry, GeometryError, GroundSet, SetFamily
from .ordinal import Poset
from .resolution import ResolutionSpec


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _check_format(data: Any) -> None:
    if not isinstance(data, dict):
        raise GeometryError("expected a JSON object")
    fmt = data.get("format", FORMAT_VERSION)
    if fmt != FORMAT_VERSION:
        raise GeometryError(f"unsupported format version {fmt!r}")


def _require(data: Any, key: str, kind: type) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise GeometryError(f"missing key {key!r}")
    value = data[key]
    if not isinstance(value, kind):
        raise GeometryError(f"{key!r} must be a {kind.__name__}")
    return value


def label_sets(family: SetFamily, masks=None) -> list[list[str]]:
    masks = family.sets if masks is None else masks
    out = [sorted(family.ground.labels_of(m)) for m in masks]
    return sorted(out, key=lambda s: (len(s), s))


def family_from_json(data: dict) -> SetFamily:
    _check_format(data)
    labels = _require(data, "ground", list)
    if not all(isinstance(x, str) for x in labels):
        raise GeometryError("ground labels must be strings")
    ground = GroundSet(tuple(labels))
    sets = _require(data, "sets", list)
    masks = []
    for s in sets:
        if not isinstance(s, list) or not all(isinstance(x, str) for x in s):
            raise GeometryError("every set must be a list of labels")
        if len(set(s)) != len(s):
            raise GeometryError(f"set {s} repeats a label")
        masks.append(ground.mask(s))
    return SetFamily(ground, tuple(masks))


def geometry_from_json(data: dict) -> ConvexGeometry:
    fam = family_from_json(data)
    try:
        return ConvexGeometry(fam.ground, fam.sets)
    except AxiomViolation as exc:
        exc.ground = fam.ground
        raise


def family_to_json(family: SetFamily) -> dict:
    return {"format": FORMAT_VERSION, "ground": list(family.ground.labels), "sets": label_sets(family)}


geometry_to_json = family_to_json


def spec_from_json(data: dict) -> ResolutionSpec:
    _check_format(data)
    base = geometry_from_json(_require(data, "base", dict))
    fibers = _require(data, "fibers", dict)
    return ResolutionSpec.from_mapping(base, {k: geometry_from_json(v) for k, v in fibers.items()})


def spec_to_json(spec: ResolutionSpec) -> dict:
    return {
        "format": FORMAT_VERSION,
        "base": geometry_to_json(spec.base),
        "fibers": {x: geometry_to_json(f) for x, f in zip(spec.base.ground.labels, spec.fibers)},
    }


def poset_from_json(data: dict) -> Poset:
    _check_format(data)
    elements = _require(data, "elements", list)
    pairs = _require(data, "leq", list)
    for pr in pairs:
        if not (isinstance(pr, list) and len(pr) == 2 and all(isinstance(x, str) for x in pr)):
            raise GeometryError("every leq entry must be a pair of labels")
    return Poset.from_pairs(elements, [tuple(pr) for pr in pairs])


def poset_to_json(p: Poset) -> dict:
    """Cover relations only; readers take the reflexive-transitive closure."""
    return {
        "format": FORMAT_VERSION,
        "elements": list(p.ground.labels),
        "leq": sorted([list(c) for c in p.covers()]),
    }


def config_from_json(data: dict) -> PointConfig:
    _check_format(data)
    points = _require(data, "points", dict)
    dim = data.get("dim")
    if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool)):
        raise GeometryError("'dim' must be an integer")
    for lab, coords in points.items():
        if not isinstance(coords, list) or not all(isinstance(c, (str, int)) and not isinstance(c, bool) for c in coords):
            raise GeometryError(f"coordinates of {lab!r} must be rational strings or integers")
    return PointConfig.from_mapping(points, dim)


def config_to_json(cfg: PointConfig) -> dict:
    return {
        "format": FORMAT_VERSION,
        "dim": cfg.dim,
        "points": {lab: [str(c) for c in pt] for lab, pt in zip(cfg.ground.labels, cfg.coords)},
    }


def load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise GeometryError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    except OSError as exc:
        raise GeometryError(f"{path}: {exc.strerror}") from exc
