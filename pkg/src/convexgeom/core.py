"""Finite convex geometries over bitmask-encoded ground sets.

Every subset of a ground set of size ``n`` is a Python ``int`` whose bit ``i``
stands for the ``i``-th label.  Families are stored twice: as a tuple sorted
ascending (for deterministic iteration) and as a frozenset (for membership).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

MAX_GROUND = 64
MAX_CHOICE_TABLE = 20


class GeometryError(ValueError):
    """Malformed input: bad labels, masks outside the ground set, and so on."""


class InvariantError(AssertionError):
    """A theorem-backed cross-check failed.  Always a bug, never bad input."""


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def canonical_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """(size, lexicographic) ordering key used for witnesses and output."""
    return (mask.bit_count(), tuple(bits(mask)))


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class GroundSet:
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not 1 <= len(labels) <= MAX_GROUND:
            raise GeometryError(f"ground set size must be in 1..{MAX_GROUND}, got {len(labels)}")
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise GeometryError(f"labels must be non-empty strings, got {lab!r}")
        if len(set(labels)) != len(labels):
            raise GeometryError("labels must be pairwise distinct")
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]  # type: ignore[attr-defined]
        except KeyError:
            raise GeometryError(f"unknown label {label!r}") from None

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def element(self, label: str) -> int:
        return 1 << self.index(label)

    def labels_of(self, mask: int) -> list[str]:
        return [self.labels[i] for i in bits(mask)]

    def check_mask(self, mask: int) -> None:
        if not isinstance(mask, int) or mask < 0 or mask > self.full:
            raise GeometryError(f"mask {mask!r} is not a subset of a {self.size}-element ground set")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)


@dataclass(frozen=True)
class SetFamily:
    """A family of subsets of ``ground``; unsorted or duplicated input is normalized."""

    ground: GroundSet
    sets: tuple[int, ...]
    index: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        masks = set()
        for m in self.sets:
            self.ground.check_mask(m)
            masks.add(m)
        object.__setattr__(self, "sets", tuple(sorted(masks)))
        object.__setattr__(self, "index", frozenset(masks))

    @classmethod
    def from_labels(cls, labels: Sequence[str], sets: Iterable[Iterable[str]]) -> SetFamily:
        ground = GroundSet(tuple(labels))
        return cls(ground, tuple(ground.mask(s) for s in sets))

    @property
    def n(self) -> int:
        return self.ground.size

    @property
    def full(self) -> int:
        return self.ground.full

    def __contains__(self, mask: object) -> bool:
        return mask in self.index

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def canonical_order(self) -> list[int]:
        return sorted(self.sets, key=canonical_key)

    def labeled(self) -> list[list[str]]:
        return [self.ground.labels_of(m) for m in self.canonical_order()]


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, ...]
    message: str


class AxiomViolation(GeometryError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(f"{v.axiom}: {v.message}" for v in violations))


def check_axioms(family: SetFamily) -> list[Violation]:
    """Return one violation per failed axiom (G1, G2, G3), empty if none fail.

    Witnesses are the first offenders in (size, lexicographic) order.
    """
    out: list[Violation] = []
    ground = family.ground
    members = family.canonical_order()
    if 0 not in family:
        out.append(Violation("G1", (), "empty set missing"))
    g2 = None
    for i, f in enumerate(members):
        for h in members[i + 1:]:
            if (f & h) not in family:
                g2 = (f, h, f & h)
                break
        if g2:
            break
    if g2:
        f, h, meet = g2
        out.append(Violation(
            "G2", g2,
            f"intersection {ground.labels_of(meet)} of {ground.labels_of(f)} and "
            f"{ground.labels_of(h)} missing",
        ))
    full = family.full
    for f in members:
        if f == full:
            continue
        if not any((f | (1 << i)) in family for i in bits(full & ~f)):
            out.append(Violation("G3", (f,), f"{ground.labels_of(f)} has no one-element extension"))
            break
    return out


class ConvexGeometry(SetFamily):
    """A set family certified to satisfy G1-G3.  Construction raises on failure."""

    def __post_init__(self) -> None:
        super().__post_init__()
        violations = check_axioms(self)
        if violations:
            raise AxiomViolation(violations)
        # Concurrent fills of this memo store identical values, so no lock is needed.
        object.__setattr__(self, "_hull_memo", {})

    @classmethod
    def powerset(cls, ground: GroundSet | Sequence[str]) -> ConvexGeometry:
        if not isinstance(ground, GroundSet):
            ground = GroundSet(tuple(ground))
        return cls(ground, tuple(range(ground.full + 1)))

    def conv(self, a: int) -> int:
        return conv(self, a)

    def extreme(self, a: int) -> int:
        return extreme(self, a)

    def reorder(self, ground: GroundSet) -> ConvexGeometry:
        """The same geometry re-expressed over a permutation of its labels."""
        if sorted(ground.labels) != sorted(self.ground.labels):
            raise GeometryError("reorder needs the same labels")
        perm = [ground.index(lab) for lab in self.ground.labels]
        return ConvexGeometry(ground, tuple(map_mask(m, perm) for m in self.sets))

    def same_as(self, other: ConvexGeometry) -> bool:
        """Equality up to the declared label order (not up to isomorphism)."""
        if sorted(self.ground.labels) != sorted(other.ground.labels):
            return False
        return self.reorder(other.ground).sets == other.sets


def map_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << perm[i]
    return out


def validate_geometry(family: SetFamily) -> ConvexGeometry:
    if isinstance(family, ConvexGeometry):
        return family
    return ConvexGeometry(family.ground, family.sets)


def conv(g: ConvexGeometry, a: int) -> int:
    """Smallest member of ``g`` containing ``a``."""
    memo = g._hull_memo  # type: ignore[attr-defined]
    hit = memo.get(a)
    if hit is not None:
        return hit
    g.ground.check_mask(a)
    out = g.full
    for m in g.sets:
        if m & a == a:
            out &= m
    memo[a] = out
    return out


def extreme(g: ConvexGeometry, a: int) -> int:
    out = 0
    for i in bits(a):
        p = 1 << i
        if not conv(g, a & ~p) & p:
            out |= p
    return out


def is_extreme_in(g: ConvexGeometry, p: int, a: int) -> tuple[bool, int | None]:
    """Decide ``p`` extreme in ``a`` by scanning for a separating member.

    ``p`` is a single-bit mask.  Returns ``(True, G)`` with the first member
    ``G`` (canonical order) containing ``a - p`` but not ``p``, else ``(False, None)``.
    """
    if p.bit_count() != 1 or not p & a:
        raise GeometryError("p must be a single element of a")
    rest = a & ~p
    for m in g.canonical_order():
        if m & rest == rest and not m & p:
            return True, m
    return False, None


def induced_subgeometry(g: ConvexGeometry, s: int) -> ConvexGeometry:
    """Traces of the members of ``g`` on ``s``, re-indexed over the labels of ``s``."""
    if s == 0:
        raise GeometryError("subgeometry needs a nonempty subset")
    g.ground.check_mask(s)
    positions = list(bits(s))
    ground = GroundSet(tuple(g.ground.labels[i] for i in positions))
    remap = {p: j for j, p in enumerate(positions)}
    traces = set()
    for m in g.sets:
        t = 0
        for i in bits(m & s):
            t |= 1 << remap[i]
        traces.add(t)
    return ConvexGeometry(ground, tuple(traces))


def is_union_closed(g: SetFamily) -> bool:
    return union_closure_violation(g) is None


def union_closure_violation(g: SetFamily) -> tuple[int, int] | None:
    members = g.canonical_order()
    for i, f in enumerate(members):
        for h in members[i + 1:]:
            if (f | h) not in g:
                return f, h
    return None


def is_atomistic(g: SetFamily) -> bool:
    return all((1 << i) in g for i in range(g.n))


@dataclass(frozen=True)
class ChoiceFunction:
    """A choice correspondence tabulated on all ``2**n`` subsets (index = mask)."""

    ground: GroundSet
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        n = self.ground.size
        if n > MAX_CHOICE_TABLE:
            raise GeometryError(f"choice tables are limited to {MAX_CHOICE_TABLE} elements")
        if len(table) != 1 << n:
            raise GeometryError(f"choice table needs {1 << n} entries, got {len(table)}")
        for a, c in enumerate(table):
            if c & ~a:
                raise GeometryError(f"c({self.ground.labels_of(a)}) is not a subset of its argument")
            if a and not c:
                raise GeometryError(f"c({self.ground.labels_of(a)}) is empty")

    def __call__(self, a: int) -> int:
        return self.table[a]


def extreme_as_choice(g: ConvexGeometry) -> ChoiceFunction:
    if g.n > MAX_CHOICE_TABLE:
        raise GeometryError(f"choice tables are limited to {MAX_CHOICE_TABLE} elements")
    return ChoiceFunction(g.ground, tuple(extreme(g, a) for a in range(g.full + 1)))


def path_independence_violation(c: ChoiceFunction) -> tuple[int, int] | None:
    """First ordered pair (A, B) with c(A | B) != c(c(A) | c(B)), or None."""
    t = c.table
    size = len(t)
    for a in range(size):
        ca = t[a]
        for b in range(size):
            if t[a | b] != t[ca | t[b]]:
                return a, b
    return None


def is_path_independent(c: ChoiceFunction) -> bool:
    return path_independence_violation(c) is None


class NotPathIndependent(GeometryError):
    def __init__(self, witness: tuple[int, int]):
        self.witness = witness
        super().__init__(f"choice is not path independent at (A, B) = {witness}")


def geometry_from_choice(c: ChoiceFunction) -> ConvexGeometry:
    """Materialize the unique geometry whose extreme operator is ``c``.

    ``G`` is convex iff every ``A`` with ``c(A) == c(G)`` lies inside ``G``,
    i.e. iff ``G`` equals the union of its own choice class.
    """
    bad = path_independence_violation(c)
    if bad is not None:
        raise NotPathIndependent(bad)
    union_by_choice: dict[int, int] = {}
    for a, ca in enumerate(c.table):
        union_by_choice[ca] = union_by_choice.get(ca, 0) | a
    members = tuple(g for g, cg in enumerate(c.table) if union_by_choice[cg] == g)
    geom = ConvexGeometry(c.ground, members)
    if extreme_as_choice(geom).table != c.table:
        raise InvariantError("extreme operator of the recovered geometry differs from the choice")
    return geom
