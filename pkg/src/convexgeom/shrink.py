"""Shrinkable sets: the subsets that can be collapsed to one base element.

Three independent tests are implemented and cross-checked against each
other: the convex-set conditions (S1, S2), the extreme-operator conditions
(T1, T2, T3), and, for extreme shrinkability, the conditions (V1, V2).
Every quantifier is exhaustive.  Witnesses are the first offenders in
(size, lexicographic) order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    ConvexGeometry,
    GeometryError,
    GroundSet,
    InvariantError,
    canonical_key,
    extreme,
    induced_subgeometry,
    is_atomistic,
)
from .resolution import ResolutionSpec, resolve


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


PASS = Verdict(True)


@dataclass(frozen=True)
class ShrinkReport:
    subject: int
    S1: Verdict
    S2: Verdict
    T1: Verdict
    T2: Verdict
    T3: Verdict
    V1: Verdict
    V2: Verdict
    shrinkable: bool
    extremely_shrinkable: bool


def in_window(g: ConvexGeometry, s: int) -> bool:
    return 1 < s.bit_count() < g.n


def _require_window(g: ConvexGeometry, s: int) -> None:
    g.ground.check_mask(s)
    if not in_window(g, s):
        raise GeometryError(f"need 1 < |S| < {g.n}, got |S| = {s.bit_count()}")


def _all_subsets(g: ConvexGeometry) -> list[int]:
    return sorted(range(g.full + 1), key=canonical_key)


def check_S(g: ConvexGeometry, s: int, *, single_hit: bool = False) -> tuple[Verdict, Verdict]:
    """(S1, S2) for ``s``.

    With ``single_hit`` the antecedent ``G & S != 0`` of S2 is narrowed to
    ``|G & S| == 1``, which is an equivalent condition.
    """
    _require_window(g, s)
    members = g.canonical_order()
    s1 = PASS
    for m in members:
        if m & s != s and (m & ~s) not in g:
            s1 = Verdict(False, (m,))
            break
    s2 = PASS
    traces: list[tuple[int, int]] = []
    seen = set()
    for h in members:
        t = h & s
        if t not in seen:
            seen.add(t)
            traces.append((t, h))
    for m in members:
        hit = m & s
        if not hit or (single_hit and hit.bit_count() != 1):
            continue
        rest = m & ~s
        if rest not in g:
            continue
        for t, h in traces:
            if (rest | t) not in g:
                s2 = Verdict(False, (m, h))
                break
        if not s2:
            break
    return s1, s2


def check_T(g: ConvexGeometry, s: int) -> tuple[Verdict, Verdict, Verdict]:
    _require_window(g, s)
    t1 = t2 = t3 = PASS
    for a in _all_subsets(g):
        ex_a = extreme(g, a)
        if t1 and ex_a & s and extreme(g, a & s) & ~ex_a:
            t1 = Verdict(False, (a,))
        if a & s:
            ex_as = extreme(g, a | s)
            if t2 and (ex_a & ~s) & ~ex_as:
                t2 = Verdict(False, (a,))
            if t3 and ex_as & s and not ex_a & s:
                t3 = Verdict(False, (a,))
        if not (t1 or t2 or t3):
            break
    if t1 and not t3 and is_atomistic(g):
        raise InvariantError("T1 without T3 on an atomistic geometry")
    return t1, t2, t3


def check_V(g: ConvexGeometry, s: int) -> tuple[Verdict, Verdict]:
    _require_window(g, s)
    members = g.canonical_order()
    v1 = PASS
    for m in members:
        if (m & s).bit_count() == 1 and (m | s) not in g:
            v1 = Verdict(False, (m,))
            break
    outside = g.full & ~s
    v2 = PASS
    for h in members:
        if (outside | (h & s)) not in g:
            v2 = Verdict(False, (h,))
            break
    return v1, v2


def shrink_report(g: ConvexGeometry, s: int) -> ShrinkReport:
    s1, s2 = check_S(g, s)
    t1, t2, t3 = check_T(g, s)
    v1, v2 = check_V(g, s)
    shrinkable = bool(s1 and s2)
    if shrinkable != bool(t1 and t2 and t3):
        raise InvariantError(f"S-test and T-test disagree on subset {g.ground.labels_of(s)}")
    extremely = bool(v1 and v2)
    if extremely != (shrinkable and (g.full & ~s) in g):
        raise InvariantError(f"V-test disagrees with extreme shrinkability on {g.ground.labels_of(s)}")
    return ShrinkReport(s, s1, s2, t1, t2, t3, v1, v2, shrinkable, extremely)


def is_shrinkable(g: ConvexGeometry, s: int) -> bool | None:
    """None outside the window ``1 < |S| < |Z|`` where the notion is undefined."""
    g.ground.check_mask(s)
    if not in_window(g, s):
        return None
    s1, s2 = check_S(g, s)
    return bool(s1 and s2)


def shrinkable_sets(g: ConvexGeometry, *, cross_check: bool = True) -> list[int]:
    """Every shrinkable subset, in canonical order.

    With ``cross_check`` each candidate is also decided by the T-conditions
    and a disagreement raises :class:`InvariantError`.
    """
    out = []
    for s in range(1, g.full):
        if not in_window(g, s):
            continue
        s1, s2 = check_S(g, s)
        ok = bool(s1 and s2)
        if cross_check:
            t1, t2, t3 = check_T(g, s)
            if ok != bool(t1 and t2 and t3):
                raise InvariantError(f"S-test and T-test disagree on subset {g.ground.labels_of(s)}")
        if ok:
            out.append(s)
    return sorted(out, key=canonical_key)


def is_primitive(g: ConvexGeometry) -> bool:
    return not shrinkable_sets(g, cross_check=False)


class NotShrinkable(GeometryError):
    def __init__(self, subject: int, prop: str, witness: tuple[int, ...] | None, labels: list[str]):
        self.subject = subject
        self.property = prop
        self.witness = witness
        super().__init__(f"{labels} is not shrinkable: {prop} fails")


def merged_label(g: ConvexGeometry, s: int) -> str:
    return "+".join(sorted(g.ground.labels_of(s)))


def deresolve(g: ConvexGeometry, s: int) -> ResolutionSpec:
    """Write ``g`` as a resolution whose only nontrivial fiber is ``s``.

    The merged base element sits where the first element of ``s`` sits and is
    labelled by the sorted labels of ``s`` joined with ``+``; every other base
    element reuses its own label over a singleton fiber.
    """
    _require_window(g, s)
    s1, s2 = check_S(g, s)
    if not s1 or not s2:
        failed, verdict = ("S1", s1) if not s1 else ("S2", s2)
        raise NotShrinkable(s, failed, verdict.witness, g.ground.labels_of(s))
    star = merged_label(g, s)
    first = (s & -s).bit_length() - 1
    base_labels: list[str] = []
    position: dict[int, int] = {}
    for i, lab in enumerate(g.ground.labels):
        if s >> i & 1:
            if i == first:
                position[i] = len(base_labels)
                base_labels.append(star)
            else:
                position[i] = position[first]
        else:
            position[i] = len(base_labels)
            base_labels.append(lab)
    if len(set(base_labels)) != len(base_labels):
        raise GeometryError(f"merged label {star!r} collides with an existing label")
    base_members = set()
    for m in g.sets:
        b = 0
        for i in range(g.n):
            if m >> i & 1:
                b |= 1 << position[i]
        base_members.add(b)
    base = ConvexGeometry(GroundSet(tuple(base_labels)), tuple(base_members))
    fibers = []
    for lab in base_labels:
        if lab == star:
            fibers.append(induced_subgeometry(g, s))
        else:
            fibers.append(ConvexGeometry.powerset([lab]))
    spec = ResolutionSpec(base, tuple(fibers))
    if not resolve(spec).same_as(g):
        raise InvariantError("resolving the deresolution does not give back the geometry")
    return spec


def is_extremely_shrinkable(g: ConvexGeometry, s: int) -> bool | None:
    """Whether ``s`` is a fiber of some nontrivial extreme resolution giving ``g``.

    None when ``s`` is outside the size window or not shrinkable at all.
    """
    if not is_shrinkable(g, s):
        return None
    answer = (g.full & ~s) in g
    v1, v2 = check_V(g, s)
    if answer != bool(v1 and v2):
        raise InvariantError("complement test and V-test disagree")
    spec = deresolve(g, s)
    star = spec.base.ground.index(merged_label(g, s))
    if answer != bool(extreme(spec.base, spec.base.full) >> star & 1):
        raise InvariantError("complement test and base extremeness of the merged element disagree")
    return answer


def is_extremely_resolvable(g: ConvexGeometry) -> bool:
    return any((g.full & ~s) in g for s in shrinkable_sets(g, cross_check=False))
