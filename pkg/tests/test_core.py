import pytest
from hypothesis import given, settings

from convexgeom.census import as_geometry, enumerate_geometries
from convexgeom.core import (
    AxiomViolation,
    ChoiceFunction,
    ConvexGeometry,
    GeometryError,
    GroundSet,
    NotPathIndependent,
    check_axioms,
    conv,
    extreme,
    extreme_as_choice,
    geometry_from_choice,
    induced_subgeometry,
    is_atomistic,
    is_extreme_in,
    is_path_independent,
    is_union_closed,
    validate_geometry,
)
from helpers import NAMED_3, XYZ, as_strs, family, geometries, geom, named, oracle_conv, oracle_extreme

CENSUS_4 = [as_geometry(c, n) for n in range(1, 5) for c in enumerate_geometries(n)]


def m(g, s: str) -> int:
    return g.ground.mask(list(s))


@pytest.mark.parametrize("name", sorted(NAMED_3))
def test_named_geometries_are_valid(name):
    assert len(named(name)) == len(NAMED_3[name])


@pytest.mark.parametrize("name, ex_a, ex_b", [
    ("G1", "z", "z"), ("G2", "z", "z"), ("G3", "z", "yz"),
    ("G4", "z", "yz"), ("G5", "xz", "yz"), ("G6", "xz", "yz"),
])
def test_extreme_of_two_sets_in_each_named_geometry(name, ex_a, ex_b):
    g = named(name)
    assert as_strs(g, [extreme(g, m(g, "xz"))]) == [ex_a]
    assert as_strs(g, [extreme(g, m(g, "yz"))]) == [ex_b]


def test_validate_reports_intersection_witness():
    fam = family("abc", ["", "ab", "bc", "abc", "a", "c"])
    with pytest.raises(AxiomViolation) as info:
        validate_geometry(fam)
    (v,) = [v for v in info.value.violations if v.axiom == "G2"]
    assert as_strs(fam, v.witness) == ["ab", "bc", "b"]


@pytest.mark.parametrize("sets, axiom", [
    (["a", "ab"], "G1"),
    (["", "a", "b", "ab", "ac", "bc", "abc"], "G2"),
    (["", "a", "abc"], "G3"),
])
def test_each_axiom_detected(sets, axiom):
    assert axiom in {v.axiom for v in check_axioms(family("abc", sets))}


def test_full_set_is_forced_by_upgradability():
    assert [v.axiom for v in check_axioms(family("ab", ["", "a"]))] == ["G3"]


@pytest.mark.parametrize("labels", [(), ("a", "a"), ("a", ""), tuple(str(i) for i in range(65))])
def test_bad_ground_sets_rejected(labels):
    with pytest.raises(GeometryError):
        GroundSet(labels)


def test_unknown_label_rejected():
    with pytest.raises(GeometryError):
        GroundSet(("a", "b")).mask(["c"])


def test_unsorted_duplicated_input_normalizes():
    g = geom("ab", ["ab", "", "a", "a"])
    assert g.sets == (0, 1, 3)


def test_hull_examples():
    g = named("G1")
    assert conv(g, m(g, "y")) == m(g, "xy")
    assert conv(g, 0) == 0
    assert conv(g, m(g, "z")) == g.full


def test_extreme_in_with_separating_member():
    g = named("G5")
    ok, sep = is_extreme_in(g, m(g, "y"), g.full)
    assert ok and sep == m(g, "xz")
    assert is_extreme_in(g, m(g, "x"), g.full) == (False, None)


def test_induced_subgeometry_of_chain():
    g = named("G1")
    sub = induced_subgeometry(g, m(g, "yz"))
    assert sub.ground.labels == ("y", "z")
    assert as_strs(sub, sub.sets) == ["", "y", "yz"]


def test_union_closure_and_atomism():
    assert is_union_closed(named("G4")) and not is_union_closed(named("G5"))
    assert is_atomistic(named("G5")) and not is_atomistic(named("G4"))


@pytest.mark.parametrize("g", CENSUS_4, ids=lambda g: f"n{g.n}-{len(g)}")
def test_hull_and_extreme_agree_with_definitions(g):
    for a in range(g.full + 1):
        assert conv(g, a) == oracle_conv(g, a)
        assert extreme(g, a) == oracle_extreme(g, a)


@settings(max_examples=60, deadline=None)
@given(geometries(max_n=6))
def test_closure_laws(g):
    for a in range(g.full + 1):
        c = conv(g, a)
        assert c & a == a and conv(g, c) == c
        for b in range(g.full + 1):
            if a & b == a:
                assert conv(g, a) & ~conv(g, b) == 0


@settings(max_examples=60, deadline=None)
@given(geometries(max_n=6))
def test_extreme_commutes_with_hull(g):
    for a in range(g.full + 1):
        assert extreme(g, conv(g, a)) == extreme(g, a)
        assert conv(g, extreme(g, a)) == conv(g, a)


@settings(max_examples=60, deadline=None)
@given(geometries(max_n=6))
def test_convex_sets_are_hulls_of_their_extremes(g):
    for gm in g.sets:
        ex = extreme(g, gm)
        assert ex == sum(1 << i for i in range(g.n) if gm >> i & 1 and (gm & ~(1 << i)) in g)
        assert conv(g, ex) == gm
        e = ex
        while e:
            assert (gm & ~e) in g
            e = (e - 1) & ex


@settings(max_examples=40, deadline=None)
@given(geometries(max_n=5))
def test_heritage_outcast_and_aizerman(g):
    for a in range(g.full + 1):
        ea = extreme(g, a)
        for b in range(g.full + 1):
            eb = extreme(g, b)
            if a & b == a:
                assert a & eb & ~ea == 0
                if eb & a == eb:
                    assert ea & ~eb == 0
            if ea & b:
                assert extreme(g, a | b) & b


def test_outcast_cannot_be_strengthened():
    g = named("G5")
    a, b = m(g, "xz"), g.full
    assert extreme(g, a) & b & ~(extreme(g, a | b) & b)


def test_choice_identity_gives_power_set():
    ground = GroundSet(XYZ)
    c = ChoiceFunction(ground, tuple(range(8)))
    assert geometry_from_choice(c).sets == tuple(range(8))


def test_choice_by_maximization_on_chain():
    ground = GroundSet(XYZ)
    table = [0] + [1 << (a.bit_length() - 1) for a in range(1, 8)]
    g = geometry_from_choice(ChoiceFunction(ground, tuple(table)))
    assert as_strs(g, g.canonical_order()) == ["", "x", "xy", "xyz"]


def test_non_path_independent_choice_rejected():
    ground = GroundSet(XYZ)
    # pick the lowest element, except that {x, y, z} picks z
    table = [0] + [a & -a for a in range(1, 8)]
    table[7] = 4
    c = ChoiceFunction(ground, tuple(table))
    assert not is_path_independent(c)
    with pytest.raises(NotPathIndependent):
        geometry_from_choice(c)


def test_choice_table_validation():
    ground = GroundSet(("a",))
    with pytest.raises(GeometryError):
        ChoiceFunction(ground, (0, 0))
    with pytest.raises(GeometryError):
        ChoiceFunction(ground, (1, 1))


@pytest.mark.parametrize("g", CENSUS_4, ids=lambda g: f"n{g.n}-{len(g)}")
def test_choice_round_trip(g):
    c = extreme_as_choice(g)
    assert is_path_independent(c)
    assert geometry_from_choice(c).sets == g.sets


def test_reorder_and_same_as():
    g = named("G3")
    h = g.reorder(GroundSet(("z", "y", "x")))
    assert h.same_as(g) and h.sets != g.sets
    assert not named("G2").same_as(g)


def test_powerset_constructor():
    assert len(ConvexGeometry.powerset(["a", "b", "c"])) == 8
