"""Resolutions and compositions of convex geometries.

A resolution replaces every element ``x`` of a base geometry by a fiber
geometry on ``Y_x``.  The resolved ground set lists the fibers in base order,
each fiber in its own declared order, so fiber-local masks embed into the
resolved ground by a plain shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from operator import or_
from typing import Mapping, Sequence

from .core import (
    ConvexGeometry,
    GeometryError,
    GroundSet,
    InvariantError,
    SetFamily,
    bits,
    conv,
    extreme,
)


def qualified_labels(base_labels: Sequence[str], fiber_labels: Sequence[Sequence[str]]) -> list[list[str]]:
    """Fiber labels as used in the resolved ground set.

    Labels are kept verbatim when they are already pairwise distinct across
    fibers; otherwise every fiber label ``y`` over ``x`` becomes ``"x.y"``.
    """
    flat = [lab for labs in fiber_labels for lab in labs]
    if len(set(flat)) == len(flat):
        return [list(labs) for labs in fiber_labels]
    return [[f"{x}.{y}" for y in labs] for x, labs in zip(base_labels, fiber_labels)]


@dataclass(frozen=True)
class ResolutionSpec:
    base: ConvexGeometry
    fibers: tuple[ConvexGeometry, ...]
    ground: GroundSet = field(init=False)
    projection: tuple[int, ...] = field(init=False)
    offsets: tuple[int, ...] = field(init=False)
    fiber_masks: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        fibers = tuple(self.fibers)
        object.__setattr__(self, "fibers", fibers)
        if len(fibers) != self.base.n:
            raise GeometryError(f"base has {self.base.n} elements but {len(fibers)} fibers were given")
        labels = qualified_labels(self.base.ground.labels, [f.ground.labels for f in fibers])
        flat = [lab for labs in labels for lab in labs]
        if len(flat) > 64:
            raise GeometryError("resolved ground set exceeds 64 elements")
        projection, offsets, fiber_masks = [], [], []
        pos = 0
        for x, f in enumerate(fibers):
            offsets.append(pos)
            fiber_masks.append(((1 << f.n) - 1) << pos)
            projection.extend([x] * f.n)
            pos += f.n
        object.__setattr__(self, "ground", GroundSet(tuple(flat)))
        object.__setattr__(self, "projection", tuple(projection))
        object.__setattr__(self, "offsets", tuple(offsets))
        object.__setattr__(self, "fiber_masks", tuple(fiber_masks))

    @classmethod
    def from_mapping(cls, base: ConvexGeometry, fibers: Mapping[str, ConvexGeometry]) -> ResolutionSpec:
        missing = [x for x in base.ground.labels if x not in fibers]
        extra = [x for x in fibers if x not in base.ground.labels]
        if missing or extra:
            raise GeometryError(f"fiber keys must match base labels (missing {missing}, unexpected {extra})")
        return cls(base, tuple(fibers[x] for x in base.ground.labels))

    @property
    def is_trivial(self) -> bool:
        """Nontrivial means a base and at least one fiber with two or more elements."""
        return self.base.n < 2 or all(f.n < 2 for f in self.fibers)

    def project(self, a: int) -> int:
        out = 0
        for x, ym in enumerate(self.fiber_masks):
            if a & ym:
                out |= 1 << x
        return out

    def preimage(self, b: int) -> int:
        out = 0
        for x in bits(b):
            out |= self.fiber_masks[x]
        return out

    def trace(self, a: int, x: int) -> int:
        """``a`` restricted to fiber ``x``, as a fiber-local mask."""
        return (a & self.fiber_masks[x]) >> self.offsets[x]

    def lift(self, m: int, x: int) -> int:
        return m << self.offsets[x]

    def fiber_label(self, x: int) -> str:
        return self.base.ground.labels[x]


def _generate(spec: ResolutionSpec, *, respect_extremes: bool) -> list[int]:
    fiber_members = [
        [spec.lift(m, x) for m in f.sets if m] for x, f in enumerate(spec.fibers)
    ]
    out = []
    for g in spec.base.sets:
        free = extreme(spec.base, g) if respect_extremes else g
        choices = [
            fiber_members[x] if free >> x & 1 else [spec.fiber_masks[x]]
            for x in bits(g)
        ]
        for combo in product(*choices):
            out.append(reduce(or_, combo, 0))
    return out


def resolve(spec: ResolutionSpec) -> ConvexGeometry:
    """The resolution of the base into the fibers.

    Generated directly: per base member ``G``, extreme elements of ``G`` take
    any nonempty fiber member, non-extreme ones take their whole fiber.
    """
    try:
        return ConvexGeometry(spec.ground, tuple(_generate(spec, respect_extremes=True)))
    except GeometryError as exc:
        raise InvariantError(f"resolution failed the geometry axioms: {exc}") from exc


def compose(spec: ResolutionSpec) -> SetFamily:
    """Same construction without non-extreme indiscernibility; may not be a geometry."""
    return SetFamily(spec.ground, tuple(_generate(spec, respect_extremes=False)))


def resolved_conv(spec: ResolutionSpec, a: int) -> int:
    spec.ground.check_mask(a)
    pa = spec.project(a)
    ex = extreme(spec.base, pa)
    hull = conv(spec.base, pa)
    out = 0
    for x in bits(ex):
        out |= spec.lift(conv(spec.fibers[x], spec.trace(a, x)), x)
    for x in bits(hull & ~ex):
        out |= spec.fiber_masks[x]
    return out


def resolved_extreme(spec: ResolutionSpec, a: int) -> int:
    spec.ground.check_mask(a)
    out = 0
    for x in bits(extreme(spec.base, spec.project(a))):
        out |= spec.lift(extreme(spec.fibers[x], spec.trace(a, x)), x)
    return out


def is_extreme_resolution(spec: ResolutionSpec) -> bool:
    ex = extreme(spec.base, spec.base.full)
    return all(f.n == 1 for x, f in enumerate(spec.fibers) if not ex >> x & 1)


def check_extreme_composition_equality(spec: ResolutionSpec) -> bool:
    """Whether resolution and composition coincide; cross-checked against extremeness."""
    equal = set(resolve(spec).sets) == set(compose(spec).sets)
    if equal != is_extreme_resolution(spec):
        raise InvariantError("resolution = composition disagrees with extremeness of the resolution")
    return equal
