"""Exhaustive generation and isomorphism classification of small convex geometries.

Generation walks the complementary antimatroids (union-closed, accessible
families) depth-first, deciding the subsets in order of size.  A subset is
forced in when it is the union of feasible proper subsets, and it may only be
added when one of its one-element deletions is feasible.  Each labeled
geometry is reached exactly once; a leaf is kept only when its mask list is
already the canonical one, so each isomorphism class is emitted once.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Iterator

from .core import (
    ConvexGeometry,
    GeometryError,
    GroundSet,
    InvariantError,
    bits,
    extreme,
    is_atomistic,
    is_union_closed,
)
from .resolution import ResolutionSpec, resolve

log = logging.getLogger(__name__)

MAX_ENUMERATE = 5
MAX_ORACLE = 4
MAX_CANONICAL = 8


@lru_cache(maxsize=None)
def _perm_tables(n: int) -> tuple[tuple[int, ...], ...]:
    """For every permutation of ``range(n)``, the induced map on all ``2**n`` masks."""
    size = 1 << n
    tables = []
    for perm in permutations(range(n)):
        t = [0] * size
        for i, p in enumerate(perm):
            bit, img = 1 << i, 1 << p
            for m in range(size):
                if m & bit:
                    t[m] |= img
        tables.append(tuple(t))
    return tuple(tables)


def canonical_form(sets, n: int) -> tuple[int, ...]:
    """Least sorted mask tuple over all relabelings of a family on ``n`` elements."""
    if n > MAX_CANONICAL:
        raise GeometryError(f"canonical forms are computed by brute force only for n <= {MAX_CANONICAL}")
    sets = tuple(sets)
    best = None
    for t in _perm_tables(n):
        cand = tuple(sorted(t[m] for m in sets))
        if best is None or cand < best:
            best = cand
    return best  # type: ignore[return-value]


def automorphism_count(sets, n: int) -> int:
    target = tuple(sorted(sets))
    return sum(1 for t in _perm_tables(n) if tuple(sorted(t[m] for m in target)) == target)


def canonical_geometry(g: ConvexGeometry) -> tuple[int, ...]:
    return canonical_form(g.sets, g.n)


def isomorphism(g: ConvexGeometry, h: ConvexGeometry) -> dict[str, str] | None:
    """A label bijection carrying ``g`` onto ``h``, or None."""
    if g.n != h.n or len(g) != len(h):
        return None
    target = h.sets
    for perm, t in zip(permutations(range(g.n)), _perm_tables(g.n)):
        if tuple(sorted(t[m] for m in g.sets)) == target:
            return {g.ground.labels[i]: h.ground.labels[p] for i, p in enumerate(perm)}
    return None


def default_ground(n: int) -> GroundSet:
    return GroundSet(tuple(str(i + 1) for i in range(n)))


def labeled_geometries(n: int) -> Iterator[tuple[int, ...]]:
    """Every convex geometry on ``n`` labeled elements, as a sorted mask tuple."""
    full = (1 << n) - 1
    order = sorted(range(1, full + 1), key=lambda m: (m.bit_count(), m))
    feasible = [0]
    present = {0}

    def walk(k: int) -> Iterator[tuple[int, ...]]:
        if k == len(order):
            if full in present:
                yield tuple(sorted(full ^ m for m in feasible))
            return
        f = order[k]
        cover = 0
        for m in feasible:
            if m & f == m:
                cover |= m
        if cover == f:
            options = (True,)
        elif any((f ^ (1 << i)) in present for i in bits(f)):
            options = (False, True)
        else:
            options = (False,)
        for take in options:
            if take:
                feasible.append(f)
                present.add(f)
                yield from walk(k + 1)
                feasible.pop()
                present.discard(f)
            else:
                yield from walk(k + 1)

    yield from walk(0)


@dataclass
class EnumerationResult:
    n: int
    classes: list[tuple[int, ...]]
    labeled_count: int
    orbit_sum: int = field(default=0)

    @property
    def audit_ok(self) -> bool:
        """Orbit-counting audit: class orbit sizes must add up to the labeled count."""
        return self.orbit_sum == self.labeled_count


def enumerate_with_audit(n: int) -> EnumerationResult:
    if not 1 <= n <= MAX_ENUMERATE:
        raise GeometryError(f"enumeration supports 1 <= n <= {MAX_ENUMERATE}")
    classes = []
    labeled = 0
    for fam in labeled_geometries(n):
        labeled += 1
        if canonical_form(fam, n) == fam:
            classes.append(fam)
    classes.sort()
    orbit = sum(factorial(n) // automorphism_count(c, n) for c in classes)
    log.info("n=%d: %d labeled geometries, %d classes", n, labeled, len(classes))
    return EnumerationResult(n, classes, labeled, orbit)


def enumerate_geometries(n: int) -> list[tuple[int, ...]]:
    """Canonical forms of all isomorphism classes of convex geometries on ``n`` elements."""
    res = enumerate_with_audit(n)
    if not res.audit_ok:
        raise InvariantError(f"orbit sum {res.orbit_sum} != labeled count {res.labeled_count}")
    return res.classes


def brute_force_geometries(n: int) -> list[tuple[int, ...]]:
    """Oracle: test each of the ``2**(2**n)`` families against the axioms."""
    if not 1 <= n <= MAX_ORACLE:
        raise GeometryError(f"the brute-force oracle supports 1 <= n <= {MAX_ORACLE}")
    size = 1 << n
    full = size - 1
    found = set()
    for code in range(1 << size):
        if not code & 1 or not code >> full & 1:
            continue
        members = [m for m in range(size) if code >> m & 1]
        ok = True
        for i, f in enumerate(members):
            for h in members[i + 1:]:
                if not code >> (f & h) & 1:
                    ok = False
                    break
            if not ok:
                break
            if f != full and not any(code >> (f | (1 << j)) & 1 for j in bits(full & ~f)):
                ok = False
                break
        if ok:
            found.add(canonical_form(members, n))
    return sorted(found)


def as_geometry(canon: tuple[int, ...], n: int) -> ConvexGeometry:
    return ConvexGeometry(default_ground(n), canon)


@lru_cache(maxsize=None)
def affine_reference_forms(n: int) -> frozenset[tuple[int, ...]]:
    from .affine import induced_geometry, small_configs

    return frozenset(canonical_geometry(induced_geometry(c)) for c in small_configs(n))


@dataclass(frozen=True)
class CensusEntry:
    n: int
    canonical: tuple[int, ...]
    ordinal: bool
    primitive: bool
    extremely_resolvable: bool
    atomistic: bool
    affine: bool | None
    shrinkable_count: int

    def geometry(self) -> ConvexGeometry:
        return as_geometry(self.canonical, self.n)


def classify(g: ConvexGeometry | tuple[int, ...], n: int | None = None) -> CensusEntry:
    """Fill every census flag for one geometry (affineness only decided for n <= 4)."""
    from .shrink import shrinkable_sets

    if not isinstance(g, ConvexGeometry):
        if n is None:
            raise GeometryError("n is required when classifying a raw mask tuple")
        g = as_geometry(tuple(g), n)
    n = g.n
    canon = canonical_geometry(g)
    geom = as_geometry(canon, n)
    shrinkable = shrinkable_sets(geom)
    entry = CensusEntry(
        n=n,
        canonical=canon,
        ordinal=is_union_closed(geom),
        primitive=not shrinkable,
        extremely_resolvable=any((geom.full & ~s) in geom for s in shrinkable),
        atomistic=is_atomistic(geom),
        affine=(canon in affine_reference_forms(n)) if n <= 4 else None,
        shrinkable_count=len(shrinkable),
    )
    if entry.primitive and entry.extremely_resolvable:
        raise InvariantError("primitive geometry reported as extremely resolvable")
    if entry.affine and not entry.atomistic:
        raise InvariantError("affine geometry reported as non-atomistic")
    return entry


def _classify_job(args: tuple[tuple[int, ...], int]) -> CensusEntry:
    canon, n = args
    return classify(canon, n)


def census(n: int, jobs: int = 1) -> list[CensusEntry]:
    classes = enumerate_geometries(n)
    work = [(c, n) for c in classes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_classify_job, work, chunksize=8))
    else:
        entries = [_classify_job(w) for w in work]
    return sorted(entries, key=lambda e: e.canonical)


@dataclass(frozen=True)
class CensusSummary:
    n: int
    classes: int
    ordinal: int
    primitive: int
    primitive_ordinal: int
    primitive_affine: int
    affine: int | None
    extremely_resolvable: int
    atomistic: int


def summarize(entries: list[CensusEntry]) -> CensusSummary:
    n = entries[0].n if entries else 0
    affine_known = all(e.affine is not None for e in entries)
    return CensusSummary(
        n=n,
        classes=len(entries),
        ordinal=sum(e.ordinal for e in entries),
        primitive=sum(e.primitive for e in entries),
        primitive_ordinal=sum(e.primitive and e.ordinal for e in entries),
        primitive_affine=sum(bool(e.primitive and e.affine) for e in entries),
        affine=sum(bool(e.affine) for e in entries) if affine_known else None,
        extremely_resolvable=sum(e.extremely_resolvable for e in entries),
        atomistic=sum(e.atomistic for e in entries),
    )


def _g5() -> ConvexGeometry:
    g = GroundSet(("x", "y", "z"))
    return ConvexGeometry(g, tuple(g.mask(s) for s in ["", "x", "y", "z", "xy", "xz", "xyz"]))


def _two_element_geometries(labels: tuple[str, str]) -> list[ConvexGeometry]:
    g = GroundSet(labels)
    return [
        ConvexGeometry(g, (0, 1, 3)),
        ConvexGeometry.powerset(g),
    ]


@dataclass(frozen=True)
class NonOrdinalBreakdown:
    type_a: int
    type_b: int
    total: int
    pairwise_distinct: bool


def count_resolvable_nonordinal_4() -> NonOrdinalBreakdown:
    """Resolvable non-ordinal geometries on four elements, up to isomorphism.

    Type (a): the non-ordinal three-element base with fiber sizes 1, 1, 2.
    Type (b): a two-element base with one fiber isomorphic to that geometry.
    """
    g5 = _g5()
    type_a: set[tuple[int, ...]] = set()
    for pos in range(3):
        for fiber in _two_element_geometries(("u", "v")):
            fibers = [ConvexGeometry.powerset([f"w{i}"]) for i in range(3)]
            fibers[pos] = fiber
            type_a.add(canonical_geometry(resolve(ResolutionSpec(g5, tuple(fibers)))))
    type_b: set[tuple[int, ...]] = set()
    for base in _two_element_geometries(("1", "2")):
        for pos in range(2):
            fibers = [ConvexGeometry.powerset(["w"]), ConvexGeometry.powerset(["w"])]
            fibers[pos] = g5
            fibers[1 - pos] = ConvexGeometry.powerset(["t"])
            type_b.add(canonical_geometry(resolve(ResolutionSpec(base, tuple(fibers)))))
    both = type_a | type_b
    for canon in both:
        if is_union_closed(as_geometry(canon, 4)):
            raise InvariantError("a resolution with a non-ordinal part came out ordinal")
    return NonOrdinalBreakdown(
        type_a=len(type_a),
        type_b=len(type_b),
        total=len(both),
        pairwise_distinct=len(both) == len(type_a) + len(type_b),
    )


def extreme_table(g: ConvexGeometry) -> list[int]:
    return [extreme(g, a) for a in range(g.full + 1)]
