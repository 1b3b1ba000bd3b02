import pytest
from hypothesis import given, settings, strategies as st

from convexgeom.census import as_geometry, census, enumerate_geometries, isomorphism
from convexgeom.core import ConvexGeometry, GeometryError, GroundSet, is_union_closed
from convexgeom.ordinal import (
    CycleError,
    NotOrdinal,
    Poset,
    associated_order,
    autonomous_sets,
    check_non_domination,
    enumerate_posets,
    ideals,
    is_autonomous,
    is_primitive_poset,
    lex_sum,
    max_elements,
)
from convexgeom.resolution import ResolutionSpec, resolve
from convexgeom.shrink import shrinkable_sets
from helpers import as_strs, named

POSETS = [p for n in range(1, 5) for p in enumerate_posets(n)]


@st.composite
def posets(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    labels = [f"p{i}" for i in range(n)]
    order = draw(st.permutations(labels))
    return Poset.from_pairs(order, [(labels[i], labels[j]) for i, j in pairs])


def test_chain_ideals():
    g = ideals(Poset.chain(["x", "y", "z"]))
    assert g.sets == named("G1").sets


def test_antichain_ideals_are_power_set():
    assert len(ideals(Poset.antichain(["a", "b", "c"]))) == 8


def test_associated_order_of_g4():
    p = associated_order(named("G4"))
    assert p.pairs() == [("x", "z")]


def test_non_ordinal_rejected_with_witness():
    g = named("G5")
    with pytest.raises(NotOrdinal) as info:
        associated_order(g)
    a, b = info.value.witness
    assert (a | b) not in g


def test_cycle_reported():
    with pytest.raises(CycleError) as info:
        Poset.from_pairs("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    assert set(info.value.cycle) == {"a", "b", "c"}


def test_bad_rows_rejected():
    with pytest.raises(GeometryError):
        Poset(GroundSet(("a", "b")), (1, 1))


def test_covers_and_max_elements():
    p = Poset.from_pairs("abcd", [("a", "b"), ("b", "c"), ("a", "d")])
    assert sorted(p.covers()) == [("a", "b"), ("a", "d"), ("b", "c")]
    assert p.ground.labels_of(max_elements(p, p.ground.full)) == ["c", "d"]


def test_lex_sum_matches_resolution_of_ideals():
    base = Poset.from_pairs("12", [("1", "2")])
    fibers = {"1": Poset.antichain(["a", "b"]), "2": Poset.chain(["c", "d"])}
    p = lex_sum(base, fibers)
    assert sorted(p.covers()) == [("a", "c"), ("b", "c"), ("c", "d")]
    spec = ResolutionSpec.from_mapping(ideals(base), {k: ideals(v) for k, v in fibers.items()})
    assert resolve(spec).sets == ideals(p).sets


def test_lex_sum_qualifies_colliding_labels():
    base = Poset.antichain(["1", "2"])
    p = lex_sum(base, [Poset.chain(["a"]), Poset.chain(["a"])])
    assert p.ground.labels == ("1.a", "2.a")


def test_autonomous_examples():
    p = Poset.chain(["x", "y", "z"])
    assert [p.ground.labels_of(s) for s in autonomous_sets(p)] == [["x", "y"], ["y", "z"]]
    n_poset = Poset.from_pairs("abcd", [("a", "c"), ("b", "c"), ("b", "d")])
    assert not is_autonomous(n_poset, n_poset.ground.mask("ab"))
    assert is_primitive_poset(n_poset)


@pytest.mark.parametrize("p", POSETS, ids=lambda p: str(p.down))
def test_shrinkable_equals_autonomous(p):
    assert shrinkable_sets(ideals(p)) == autonomous_sets(p)
    is_primitive_poset(p)


@pytest.mark.parametrize("p", POSETS, ids=lambda p: str(p.down))
def test_non_domination(p):
    assert check_non_domination(p)


@pytest.mark.parametrize("p", POSETS, ids=lambda p: str(p.down))
def test_ideals_round_trip(p):
    g = ideals(p)
    assert is_union_closed(g)
    assert associated_order(g) == p


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_poset_count_equals_ordinal_census(n):
    ordinal = [c for c in enumerate_geometries(n) if is_union_closed(as_geometry(c, n))]
    assert len(enumerate_posets(n)) == len(ordinal)


def test_poset_counts_stated_for_three_and_four():
    assert len(enumerate_posets(3)) == 5
    assert len(enumerate_posets(4)) == 16


def test_only_primitive_ordinal_on_four_is_the_n_poset():
    n_poset = ideals(Poset.from_pairs("abcd", [("a", "c"), ("b", "c"), ("b", "d")]))
    prim = [e.geometry() for e in census(4) if e.primitive and e.ordinal]
    assert len(prim) == 1 and isomorphism(prim[0], n_poset) is not None


def test_enumerate_posets_range():
    with pytest.raises(GeometryError):
        enumerate_posets(6)


@settings(max_examples=50, deadline=None)
@given(posets())
def test_random_posets(p):
    g = ideals(p)
    assert associated_order(g) == p
    assert check_non_domination(p)
    if p.ground.size <= 5:
        assert shrinkable_sets(g, cross_check=False) == autonomous_sets(p)


@settings(max_examples=30, deadline=None)
@given(posets(max_n=3), st.data())
def test_random_lex_sums_are_resolutions(base, data):
    fibers = [data.draw(posets(max_n=2)) for _ in range(base.ground.size)]
    p = lex_sum(base, fibers)
    spec = ResolutionSpec(ideals(base), tuple(ideals(f) for f in fibers))
    g = resolve(spec)
    assert g.ground == p.ground
    assert associated_order(g) == p


def test_union_closed_convex_geometry_is_ideal_geometry():
    g = ConvexGeometry.powerset(["a", "b"])
    assert as_strs(g, ideals(associated_order(g)).sets) == as_strs(g, g.sets)
