"""Shared fixtures, oracles and hypothesis strategies for the test suite."""

from __future__ import annotations

from hypothesis import strategies as st

from convexgeom.core import ConvexGeometry, GroundSet, SetFamily

XYZ = ("x", "y", "z")

# The six geometries on {x, y, z}, one per isomorphism class.
NAMED_3 = {
    "G1": ["", "x", "xy", "xyz"],
    "G2": ["", "x", "y", "xy", "xyz"],
    "G3": ["", "x", "xy", "xz", "xyz"],
    "G4": ["", "x", "y", "xy", "xz", "xyz"],
    "G5": ["", "x", "y", "z", "xy", "xz", "xyz"],
    "G6": ["", "x", "y", "z", "xy", "xz", "yz", "xyz"],
}


def geom(labels, sets) -> ConvexGeometry:
    """Geometry from single-character labels and sets written as strings."""
    ground = GroundSet(tuple(labels))
    return ConvexGeometry(ground, tuple(ground.mask(list(s)) for s in sets))


def family(labels, sets) -> SetFamily:
    ground = GroundSet(tuple(labels))
    return SetFamily(ground, tuple(ground.mask(list(s)) for s in sets))


def named(name: str) -> ConvexGeometry:
    return geom(XYZ, NAMED_3[name])


def without(labels, removed) -> ConvexGeometry:
    """The power set of ``labels`` minus the listed sets."""
    ground = GroundSet(tuple(labels))
    drop = {ground.mask(list(s)) for s in removed}
    return ConvexGeometry(ground, tuple(m for m in range(ground.full + 1) if m not in drop))


def as_strs(g, masks) -> list[str]:
    return ["".join(sorted(g.ground.labels_of(m))) for m in masks]


# Oracles written straight from the definitions, sharing no code with the library.

def oracle_conv(g, a: int) -> int:
    best = None
    for m in g.sets:
        if m & a == a and (best is None or m.bit_count() < best.bit_count()):
            best = m
    return best


def oracle_extreme(g, a: int) -> int:
    out = 0
    for i in range(g.n):
        if a >> i & 1 and not oracle_conv(g, a & ~(1 << i)) >> i & 1:
            out |= 1 << i
    return out


def oracle_is_geometry(n: int, sets) -> bool:
    s = set(sets)
    full = (1 << n) - 1
    if 0 not in s or full not in s:
        return False
    if any((a & b) not in s for a in s for b in s):
        return False
    return all(m == full or any((m | 1 << i) in s for i in range(n) if not m >> i & 1) for m in s)


def union_closure(masks) -> set[int]:
    out = set(masks)
    frontier = set(out)
    while frontier:
        new = {a | b for a in frontier for b in out} - out
        out |= new
        frontier = new
    return out


@st.composite
def geometries(draw, min_n: int = 1, max_n: int = 5) -> ConvexGeometry:
    """Random geometry: complement of the union closure of prefixes of random orderings.

    Prefix families of words are accessible and union closure keeps them
    accessible, so the result is an antimatroid whose complement is a geometry.
    """
    n = draw(st.integers(min_n, max_n))
    k = draw(st.integers(1, 4))
    full = (1 << n) - 1
    prefixes = {0}
    for _ in range(k):
        word = draw(st.permutations(range(n)))
        m = 0
        for i in word:
            m |= 1 << i
            prefixes.add(m)
    feasible = union_closure(prefixes)
    ground = GroundSet(tuple("abcdefgh"[:n]))
    return ConvexGeometry(ground, tuple(full ^ m for m in feasible))


def subsets_of(g) -> range:
    return range(g.full + 1)


def small_specs(max_z: int = 5, max_part: int = 3):
    """Every resolution spec with base and fibers from the census on at most
    ``max_part`` elements and at most ``max_z`` resolved elements."""
    from itertools import product

    from convexgeom.census import as_geometry, enumerate_geometries
    from convexgeom.resolution import ResolutionSpec

    pool = {n: [as_geometry(c, n) for c in enumerate_geometries(n)] for n in range(1, max_part + 1)}
    specs = []
    for bn in range(1, max_part + 1):
        for base in pool[bn]:
            for sizes in product(range(1, max_part + 1), repeat=bn):
                if sum(sizes) > max_z:
                    continue
                for fibers in product(*(pool[s] for s in sizes)):
                    specs.append(ResolutionSpec(base, fibers))
    return specs


def resolution_violations(spec) -> list[str]:
    """Every resolution law checked on one spec; an empty list means all hold."""
    from itertools import product

    from convexgeom.core import conv, extreme, induced_subgeometry, is_atomistic, is_union_closed, check_axioms
    from convexgeom.census import isomorphism
    from convexgeom.ordinal import associated_order, lex_sum
    from convexgeom.resolution import (
        compose,
        is_extreme_resolution,
        resolve,
        resolved_conv,
        resolved_extreme,
    )

    bad = []
    g = resolve(spec)
    if check_axioms(g):
        bad.append("axioms")
    for a in range(g.full + 1):
        if resolved_conv(spec, a) != conv(g, a):
            bad.append(f"conv {a}")
        if resolved_extreme(spec, a) != extreme(g, a):
            bad.append(f"extreme {a}")
    c = set(compose(spec).sets)
    if not set(g.sets) <= c:
        bad.append("containment")
    if (set(g.sets) == c) != is_extreme_resolution(spec):
        bad.append("resolve = compose iff extreme")
    base = spec.base
    for b in range(base.full + 1):
        if (spec.preimage(b) in g) != (b in base):
            bad.append(f"preimage {b}")
    ex_x = extreme(base, base.full)
    for x in range(base.n):
        if (spec.fiber_masks[x] in g) != ((1 << x) in base):
            bad.append(f"fiber law {x}")
        if ((g.full & ~spec.fiber_masks[x]) in g) != bool(ex_x >> x & 1):
            bad.append(f"complement law {x}")
    if is_atomistic(g) != (is_atomistic(base) and all(is_atomistic(f) for f in spec.fibers)):
        bad.append("atomistic")
    for pick in product(*(list(range(f.n)) for f in spec.fibers)):
        t = sum(1 << (spec.offsets[x] + i) for x, i in enumerate(pick))
        if isomorphism(induced_subgeometry(g, t), base) is None:
            bad.append(f"transversal {t}")
    parts_ordinal = is_union_closed(base) and all(is_union_closed(f) for f in spec.fibers)
    if is_union_closed(g) != parts_ordinal:
        bad.append("ordinal stability")
    elif parts_ordinal:
        p = associated_order(g)
        q = lex_sum(associated_order(base), [associated_order(f) for f in spec.fibers])
        if p != q:
            bad.append("order correspondence")
    return bad


def shrink_discrepancies(g) -> list[str]:
    """Cross-check every characterization of (extreme) shrinkability on every S in the window."""
    from convexgeom.core import GeometryError
    from convexgeom.resolution import resolve
    from convexgeom.shrink import check_S, check_T, check_V, deresolve, in_window

    bad = []
    for s in range(1, g.full):
        if not in_window(g, s):
            continue
        s1, s2 = check_S(g, s)
        t1, t2, t3 = check_T(g, s)
        v1, v2 = check_V(g, s)
        shrinkable = bool(s1 and s2)
        try:
            spec = deresolve(g, s)
            deresolved = resolve(spec).same_as(g)
        except GeometryError:
            deresolved = False
        if not shrinkable == bool(t1 and t2 and t3) == deresolved:
            bad.append(f"shrinkable {g.ground.labels_of(s)}")
        if bool(v1 and v2) != (shrinkable and (g.full & ~s) in g):
            bad.append(f"extreme {g.ground.labels_of(s)}")
        if bool(check_S(g, s, single_hit=True)[1]) != bool(s2):
            bad.append(f"single-hit S2 {g.ground.labels_of(s)}")
    return bad
