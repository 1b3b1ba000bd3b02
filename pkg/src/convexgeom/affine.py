"""Affine convex geometries from point configurations with exact rational coordinates.

No floating point is used anywhere: hull membership is decided by solving
barycentric systems over :class:`fractions.Fraction`, and face structure by
exact supporting-hyperplane tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping, Sequence

from .core import (
    ConvexGeometry,
    GeometryError,
    GroundSet,
    InvariantError,
    bits,
    canonical_key,
    conv,
)
from .resolution import ResolutionSpec, resolve

Vector = tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise GeometryError(f"coordinates must be exact (int, Fraction or string), got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise GeometryError(f"not a rational number: {value!r}") from None


@dataclass(frozen=True)
class PointConfig:
    ground: GroundSet
    dim: int
    coords: tuple[Vector, ...]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise GeometryError("dimension must be at least 1")
        coords = tuple(tuple(to_fraction(c) for c in pt) for pt in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.ground.size:
            raise GeometryError("one point per label is required")
        for lab, pt in zip(self.ground.labels, coords):
            if len(pt) != self.dim:
                raise GeometryError(f"point {lab!r} has {len(pt)} coordinates, expected {self.dim}")
        if len(set(coords)) != len(coords):
            raise GeometryError("points must be distinct")

    @classmethod
    def from_mapping(cls, points: Mapping[str, Sequence], dim: int | None = None) -> PointConfig:
        labels = tuple(points)
        coords = tuple(tuple(points[lab]) for lab in labels)
        if dim is None:
            dim = len(coords[0]) if coords else 0
        return cls(GroundSet(labels), dim, coords)

    @property
    def n(self) -> int:
        return self.ground.size


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    if not vectors:
        return 0
    return len(_rref([list(v) for v in vectors])[1])


def affine_rank(points: Sequence[Vector]) -> int:
    """Dimension of the affine span of ``points`` (-1 for no points)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    m, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][f]
        basis.append(v)
    return basis


def barycentric(simplex: Sequence[Vector], p: Vector) -> list[Fraction] | None:
    """Affine coordinates of ``p`` w.r.t. affinely independent ``simplex``, or None.

    None when ``p`` is off the affine span or the points are dependent.
    """
    k = len(simplex)
    d = len(p)
    rows = [[simplex[j][i] for j in range(k)] + [p[i]] for i in range(d)]
    rows.append([Fraction(1)] * k + [Fraction(1)])
    m, pivots = _rref(rows)
    if k in pivots or len(pivots) != k:
        return None
    return [m[i][k] for i in range(k)]


def _caratheodory_table(cfg: PointConfig) -> list[list[int]]:
    """Per point, the masks of affinely independent sets whose hull contains it."""
    n = cfg.n
    span = affine_rank(list(cfg.coords))
    table: list[list[int]] = [[] for _ in range(n)]
    for size in range(2, min(n - 1, span + 1) + 1):
        for combo in combinations(range(n), size):
            simplex = [cfg.coords[i] for i in combo]
            if affine_rank(simplex) != size - 1:
                continue
            mask = sum(1 << i for i in combo)
            for p in range(n):
                if mask >> p & 1:
                    continue
                lam = barycentric(simplex, cfg.coords[p])
                if lam is not None and all(x >= 0 for x in lam):
                    table[p].append(mask)
    return table


def point_in_hull(cfg: PointConfig, p: int | str, a: int) -> bool:
    """Exact test of ``p`` lying in the real convex hull of the points in ``a``."""
    if isinstance(p, str):
        p = cfg.ground.index(p)
    cfg.ground.check_mask(a)
    if a >> p & 1:
        return True
    pts = [cfg.coords[i] for i in bits(a)]
    target = cfg.coords[p]
    for size in range(1, min(len(pts), cfg.dim + 1) + 1):
        for simplex in combinations(pts, size):
            if size > 1 and affine_rank(list(simplex)) != size - 1:
                continue
            lam = barycentric(simplex, target)
            if lam is not None and all(x >= 0 for x in lam):
                return True
    return False


def induced_geometry(cfg: PointConfig) -> ConvexGeometry:
    """Sets ``G`` with ``conv_R(G)`` meeting the configuration exactly in ``G``."""
    table = _caratheodory_table(cfg)
    members = []
    for g in range(cfg.ground.full + 1):
        outside = cfg.ground.full & ~g
        if not any(t & g == t for p in bits(outside) for t in table[p]):
            members.append(g)
    return ConvexGeometry(cfg.ground, tuple(members))


def exchange_violation(g: ConvexGeometry) -> tuple[int, int] | None:
    """First (A, p) breaking the exchange property, or None.

    The property: ``p`` in conv(A) implies conv(A) is covered by the hulls of
    ``A`` with one element swapped for ``p``.
    """
    for a in sorted(range(g.full + 1), key=canonical_key):
        hull = conv(g, a)
        for pi in bits(hull):
            p = 1 << pi
            cover = 0
            for ai in bits(a):
                cover |= conv(g, (a & ~(1 << ai)) | p)
            if hull & ~cover:
                return a, p
    return None


def has_exchange_property(g: ConvexGeometry) -> bool:
    return exchange_violation(g) is None


def _span_coordinates(cfg: PointConfig) -> list[list[Fraction]]:
    """Coordinates of every point in a basis of the affine span (full-dimensional there)."""
    p0 = cfg.coords[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in cfg.coords]
    basis: list[list[Fraction]] = []
    for v in diffs:
        if rank(basis + [v]) > len(basis):
            basis.append(v)
    r = len(basis)
    out = []
    for v in diffs:
        if r == 0:
            out.append([])
            continue
        rows = [[basis[k][i] for k in range(r)] + [v[i]] for i in range(cfg.dim)]
        m, pivots = _rref(rows)
        out.append([m[i][r] for i in range(r)])
    return out


def facet_traces(cfg: PointConfig) -> list[int]:
    pts = _span_coordinates(cfg)
    r = len(pts[0])
    if r == 0:
        return []
    found = set()
    for combo in combinations(range(cfg.n), r):
        q0 = pts[combo[0]]
        rows = [[a - b for a, b in zip(pts[i], q0)] for i in combo[1:]]
        if rows and rank(rows) != r - 1:
            continue
        normal = nullspace(rows, r)
        if len(normal) != 1:
            continue
        w = normal[0]
        values = [sum(a * b for a, b in zip(w, q)) for q in pts]
        c = values[combo[0]]
        if all(v <= c for v in values) or all(v >= c for v in values):
            found.add(sum(1 << i for i, v in enumerate(values) if v == c))
    return sorted(found, key=canonical_key)


def face_traces(cfg: PointConfig) -> list[int]:
    """Traces of the nonempty proper faces: all nonempty intersections of facet traces."""
    facets = facet_traces(cfg)
    faces = set(facets)
    frontier = set(facets)
    while frontier:
        new = set()
        for f in frontier:
            for h in facets:
                m = f & h
                if m and m not in faces:
                    new.add(m)
        faces |= new
        frontier = new
    return sorted(faces, key=canonical_key)


def face_trace_sets(cfg: PointConfig, *, cross_check: bool = False) -> list[int]:
    """Traces of all unions of proper faces of the hull of the configuration.

    With ``cross_check``, inside the window ``1 < |S| < n`` the result is
    compared with the sets satisfying T1 in the induced geometry.
    """
    faces = face_traces(cfg)
    unions = set(faces)
    frontier = set(faces)
    while frontier:
        new = set()
        for u in frontier:
            for f in faces:
                m = u | f
                if m not in unions:
                    new.add(m)
        unions |= new
        frontier = new
    out = sorted(unions, key=canonical_key)
    if cross_check:
        from .shrink import check_T

        g = induced_geometry(cfg)
        window = [s for s in range(g.full + 1) if 1 < s.bit_count() < g.n]
        t1 = {s for s in window if check_T(g, s)[0]}
        if t1 != {s for s in out if 1 < s.bit_count() < g.n}:
            raise InvariantError("face traces disagree with T1 inside the size window")
    return out


@dataclass(frozen=True)
class Finding:
    kind: str
    elements: tuple[str, ...]
    message: str


def affine_obstructions(g: ConvexGeometry) -> list[Finding]:
    """Two betweenness patterns that no affine geometry can show.

    An empty list does not certify affineness.
    """
    labs = g.ground.labels
    n = g.n

    def hull(*idx: int) -> int:
        return conv(g, sum(1 << i for i in idx))

    out = []
    for a in range(n):
        for d in range(n):
            if d == a:
                continue
            h_ad = hull(a, d)
            others = [i for i in range(n) if i not in (a, d)]
            for b, c in combinations(others, 2):
                if h_ad >> b & 1 and h_ad >> c & 1 and not hull(a, c) >> b & 1 and not hull(a, b) >> c & 1:
                    out.append(Finding(
                        "O1", (labs[a], labs[d], labs[b], labs[c]),
                        f"{labs[b]}, {labs[c]} in conv({labs[a]},{labs[d]}) but neither lies between {labs[a]} and the other",
                    ))
    for a in range(n):
        for b in range(n):
            if b == a:
                continue
            others = [i for i in range(n) if i not in (a, b)]
            for c, d in combinations(others, 2):
                if (hull(a, c) >> b & 1 and hull(a, d) >> b & 1
                        and not hull(b, d) >> c & 1 and not hull(b, c) >> d & 1):
                    out.append(Finding(
                        "O2", (labs[a], labs[b], labs[c], labs[d]),
                        f"{labs[b]} in conv({labs[a]},{labs[c]}) and conv({labs[a]},{labs[d]}) "
                        f"but {labs[c]}, {labs[d]} are not ordered beyond {labs[b]}",
                    ))
    return out


def fiber_subspace_check(spec: ResolutionSpec, cfg: PointConfig) -> tuple[bool, tuple | None]:
    """Check that fibers over a minimal base dependence stay in the span of a transversal.

    For base ``p`` in conv of ``p_1..p_k`` and of no proper subset, every fiber
    over ``p_i`` must lie in the affine span of any points ``q_i`` picked from
    those fibers.  Returns ``(True, None)`` or ``(False, witness)`` where the
    witness is ``(p, [p_i], [q_i], offending fiber)`` as labels.
    """
    if sorted(cfg.ground.labels) != sorted(spec.ground.labels):
        raise GeometryError("configuration labels must be the resolved ground set")
    if not induced_geometry(cfg).same_as(resolve(spec)):
        raise GeometryError("configuration does not induce the resolution")
    base = spec.base
    coord = {lab: cfg.coords[cfg.ground.index(lab)] for lab in cfg.ground.labels}
    fiber_pts = [
        [spec.ground.labels[i] for i in bits(spec.fiber_masks[x])] for x in range(base.n)
    ]
    blabs = base.ground.labels
    for p in range(base.n):
        others = base.full & ~(1 << p)
        for size in range(1, base.n):
            for combo in combinations(bits(others), size):
                pm = sum(1 << i for i in combo)
                if not conv(base, pm) >> p & 1:
                    continue
                if any(conv(base, pm & ~(1 << i)) >> p & 1 for i in combo):
                    continue
                for qs in product(*(fiber_pts[i] for i in combo)):
                    qpts = [coord[q] for q in qs]
                    r = affine_rank(qpts)
                    for i in combo:
                        extra = [coord[y] for y in fiber_pts[i]]
                        if affine_rank(qpts + extra) != r:
                            return False, (blabs[p], [blabs[i] for i in combo], list(qs), fiber_pts[i])
    return True, None


def _config(points: Mapping[str, Sequence]) -> PointConfig:
    return PointConfig.from_mapping(points)


def collinear_with_apex() -> PointConfig:
    """Three collinear points b, c, d with c in the middle, and a off their line."""
    return _config({"a": ("-1", "0"), "b": ("1", "1"), "c": ("1", "0"), "d": ("1", "-1")})


def four_point_configs() -> list[PointConfig]:
    """The four planar four-point configurations realizing every affine geometry on 4 points."""
    return [
        _config({"p1": (0, 0), "p2": (1, 0), "p3": (2, 0), "p4": (3, 0)}),
        _config({"p1": (0, 0), "p2": (1, 0), "p3": (2, 0), "p4": (1, "3/2")}),
        _config({"p1": (0, 0), "p2": ("3/2", 0), "p3": (0, "3/2"), "p4": ("3/2", "3/2")}),
        _config({"p1": (0, 0), "p2": ("17/10", 0), "p3": ("4/5", "16/25"), "p4": ("4/5", "3/2")}),
    ]


def small_configs(n: int) -> list[PointConfig]:
    """Reference configurations covering every affine geometry on ``n <= 4`` points."""
    if n == 1:
        return [_config({"p1": (0,)})]
    if n == 2:
        return [_config({"p1": (0,), "p2": (1,)})]
    if n == 3:
        return [
            _config({"p1": (0, 0), "p2": (1, 0), "p3": (2, 0)}),
            _config({"p1": (0, 0), "p2": (1, 0), "p3": (0, 1)}),
        ]
    if n == 4:
        return four_point_configs()
    raise GeometryError("reference configurations exist only for n <= 4")
