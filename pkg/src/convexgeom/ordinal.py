"""Posets and their ideal geometries.

A poset is stored as one bitmask row per element: ``down[i]`` holds every
``j`` with ``j <= i``.  That is the comparability matrix packed by rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

from .core import (
    ConvexGeometry,
    GeometryError,
    GroundSet,
    InvariantError,
    bits,
    canonical_key,
    conv,
    extreme,
    union_closure_violation,
)
from .resolution import qualified_labels


class CycleError(GeometryError):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("relation has a cycle: " + " <= ".join(cycle + cycle[:1]))


@dataclass(frozen=True)
class Poset:
    ground: GroundSet
    down: tuple[int, ...]

    def __post_init__(self) -> None:
        down = tuple(self.down)
        object.__setattr__(self, "down", down)
        n = self.ground.size
        if len(down) != n:
            raise GeometryError("one row per element is required")
        for i, row in enumerate(down):
            self.ground.check_mask(row)
            if not row >> i & 1:
                raise GeometryError(f"relation is not reflexive at {self.ground.labels[i]!r}")
            for j in bits(row):
                if j != i and down[j] >> i & 1:
                    raise GeometryError(
                        f"relation is not antisymmetric at {self.ground.labels[j]!r}, {self.ground.labels[i]!r}"
                    )
                if down[j] & ~row:
                    raise GeometryError("relation is not transitive")

    @classmethod
    def from_pairs(cls, elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> Poset:
        """Reflexive-transitive closure of ``pairs`` (each pair reads first <= second)."""
        ground = GroundSet(tuple(elements))
        n = ground.size
        down = [1 << i for i in range(n)]
        for lo, hi in pairs:
            down[ground.index(hi)] |= 1 << ground.index(lo)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                row = down[i]
                for j in bits(row):
                    row |= down[j]
                if row != down[i]:
                    down[i] = row
                    changed = True
        for i in range(n):
            for j in bits(down[i]):
                if j != i and down[j] >> i & 1:
                    raise CycleError(_cycle_through(ground, down, pairs, i))
        return cls(ground, tuple(down))

    @classmethod
    def chain(cls, elements: Sequence[str]) -> Poset:
        return cls.from_pairs(elements, zip(elements, elements[1:]))

    @classmethod
    def antichain(cls, elements: Sequence[str]) -> Poset:
        return cls.from_pairs(elements, ())

    def leq(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    def pairs(self) -> list[tuple[str, str]]:
        """Strict comparabilities as (lower, upper) labels, sorted by position."""
        labs = self.ground.labels
        return [(labs[i], labs[j]) for j in range(self.ground.size) for i in bits(self.down[j]) if i != j]

    def covers(self) -> list[tuple[str, str]]:
        labs = self.ground.labels
        out = []
        for j in range(self.ground.size):
            strict = self.down[j] & ~(1 << j)
            for i in bits(strict):
                if not any(k != i and self.down[k] >> i & 1 for k in bits(strict)):
                    out.append((labs[i], labs[j]))
        return out


def _cycle_through(ground: GroundSet, down: list[int], pairs, start: int) -> list[str]:
    succ: dict[int, list[int]] = {}
    for lo, hi in pairs:
        succ.setdefault(ground.index(lo), []).append(ground.index(hi))
    path, seen = [start], {start}

    def walk(v: int) -> bool:
        for w in succ.get(v, ()):
            if w == start:
                return True
            if w not in seen:
                seen.add(w)
                path.append(w)
                if walk(w):
                    return True
                path.pop()
        return False

    walk(start)
    return [ground.labels[i] for i in path]


def _linear_extension(p: Poset) -> list[int]:
    return sorted(range(p.ground.size), key=lambda i: p.down[i].bit_count())


def ideals(p: Poset) -> ConvexGeometry:
    """All down-closed subsets, generated along a linear extension."""
    order = _linear_extension(p)
    out = []

    def grow(k: int, current: int) -> None:
        if k == len(order):
            out.append(current)
            return
        e = order[k]
        grow(k + 1, current)
        if p.down[e] & ~(1 << e) & ~current == 0:
            grow(k + 1, current | (1 << e))

    grow(0, 0)
    return ConvexGeometry(p.ground, tuple(out))


class NotOrdinal(GeometryError):
    def __init__(self, witness: tuple[int, int], labels: tuple[list[str], list[str]]):
        self.witness = witness
        super().__init__(f"not union-closed: union of {labels[0]} and {labels[1]} missing")


def associated_order(g: ConvexGeometry) -> Poset:
    """The unique poset whose ideals are ``g``: ``x <= y`` iff ``x`` lies in conv({y})."""
    bad = union_closure_violation(g)
    if bad is not None:
        raise NotOrdinal(bad, (g.ground.labels_of(bad[0]), g.ground.labels_of(bad[1])))
    p = Poset(g.ground, tuple(conv(g, 1 << y) for y in range(g.n)))
    if ideals(p).sets != g.sets:
        raise InvariantError("ideals of the associated order differ from the geometry")
    return p


def max_elements(p: Poset, a: int) -> int:
    out = 0
    for i in bits(a):
        above = a & ~(1 << i)
        if not any(p.down[j] >> i & 1 for j in bits(above)):
            out |= 1 << i
    return out


def lex_sum(base: Poset, fibers: Mapping[str, Poset] | Sequence[Poset]) -> Poset:
    """Lexicographic sum: inside a fiber use the fiber order, across fibers the base order."""
    if isinstance(fibers, Mapping):
        missing = [x for x in base.ground.labels if x not in fibers]
        if missing or len(fibers) != base.ground.size:
            raise GeometryError(f"fiber keys must match base labels (missing {missing})")
        fibers = [fibers[x] for x in base.ground.labels]
    fibers = list(fibers)
    if len(fibers) != base.ground.size:
        raise GeometryError("one fiber per base element is required")
    labels = qualified_labels(base.ground.labels, [f.ground.labels for f in fibers])
    offsets, pos = [], 0
    for f in fibers:
        offsets.append(pos)
        pos += f.ground.size
    block = [((1 << f.ground.size) - 1) << off for f, off in zip(fibers, offsets)]
    down = []
    for x, f in enumerate(fibers):
        below_x = 0
        for x2 in bits(base.down[x]):
            if x2 != x:
                below_x |= block[x2]
        for row in f.down:
            down.append((row << offsets[x]) | below_x)
    ground = GroundSet(tuple(lab for labs in labels for lab in labs))
    return Poset(ground, tuple(down))


def is_autonomous(p: Poset, s: int) -> bool:
    n = p.ground.size
    up = [0] * n
    for j in range(n):
        for i in bits(p.down[j]):
            up[i] |= 1 << j
    outside = p.ground.full & ~s
    sig_up = sig_down = None
    for i in bits(s):
        u, d = up[i] & outside, p.down[i] & outside
        if sig_up is None:
            sig_up, sig_down = u, d
        elif (u, d) != (sig_up, sig_down):
            return False
    return True


def autonomous_sets(p: Poset) -> list[int]:
    n = p.ground.size
    out = [s for s in range(1, p.ground.full) if 1 < s.bit_count() < n and is_autonomous(p, s)]
    return sorted(out, key=canonical_key)


def is_primitive_poset(p: Poset, *, cross_check: bool = True) -> bool:
    answer = not autonomous_sets(p)
    if cross_check:
        from .shrink import is_primitive

        if answer != is_primitive(ideals(p)):
            raise InvariantError("poset primitivity disagrees with primitivity of its ideal geometry")
    return answer


def check_non_domination(p: Poset) -> bool:
    """``not (z < z')`` iff ``z`` is extreme in ``{z, z'}`` in the ideal geometry."""
    g = ideals(p)
    n = p.ground.size
    for z in range(n):
        for z2 in range(n):
            if z == z2:
                continue
            strictly_below = p.leq(z, z2)
            if (not strictly_below) != bool(extreme(g, (1 << z) | (1 << z2)) >> z & 1):
                return False
    return True


def poset_canonical_form(p: Poset) -> tuple[int, ...]:
    """Lexicographically least row tuple over all relabelings."""
    n = p.ground.size
    best = None
    for perm in permutations(range(n)):
        rows = [0] * n
        for i in range(n):
            r = 0
            for j in bits(p.down[i]):
                r |= 1 << perm[j]
            rows[perm[i]] = r
        key = tuple(rows)
        if best is None or key < best:
            best = key
    return best  # type: ignore[return-value]


def enumerate_posets(n: int) -> list[Poset]:
    """All posets on ``n`` elements up to isomorphism.

    Every finite poset has a natural labelling (``i < j`` only if ``i`` comes
    before ``j``), so it suffices to scan transitive relations on the pairs
    ``i < j``.
    """
    if not 1 <= n <= 5:
        raise GeometryError("poset enumeration is limited to 1 <= n <= 5")
    labels = tuple(f"e{i}" for i in range(n))
    ground = GroundSet(labels)
    pairs = list(combinations(range(n), 2))
    seen: dict[tuple[int, ...], Poset] = {}
    for code in range(1 << len(pairs)):
        down = [1 << i for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if code >> k & 1:
                down[j] |= 1 << i
        if any(down[j] & ~down[i] for i in range(n) for j in bits(down[i])):
            continue
        p = Poset(ground, tuple(down))
        key = poset_canonical_form(p)
        seen.setdefault(key, p)
    return [seen[k] for k in sorted(seen)]
