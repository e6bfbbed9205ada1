from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from pircodes import design, fixtures
from pircodes import packing as pk
from pircodes.errors import (
    NotAConfiguration,
    NotHomogeneous,
    ParameterError,
    RepeatedDifference,
    SearchTimeout,
    Unsat,
)

FANO = design.IncidenceStructure(7, ((0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (0, 4, 5), (1, 5, 6), (0, 2, 6)))


def profile(inc):
    p = design.classify(inc).profile
    return (p.v, p.t, p.b, p.z)


def brute_is_configuration(inc):
    """Direct axiom check on the incidence matrix."""
    reps = {sum(x in B for B in inc.blocks) for x in range(inc.v)}
    sizes = {len(B) for B in inc.blocks}
    if len(reps) != 1 or len(sizes) != 1 or len(set(inc.blocks)) != inc.b:
        return False
    return all(len(set(A) & set(B)) <= 1 for A, B in combinations(inc.blocks, 2))


def assert_resolution(inc, res):
    used = sorted(j for cls in res.classes for j in cls)
    assert used == list(range(inc.b))
    for cls in res.classes:
        assert sorted(x for j in cls for x in inc.blocks[j]) == list(range(inc.v))


def test_classify_examples():
    c = design.classify(FANO)
    assert c.ok and profile(FANO) == (7, 3, 7, 3)
    assert c.profile.symmetric and c.profile.bibd and str(c.profile) == "7_3"
    k6 = fixtures.k6_matching_configuration()
    p = design.classify(k6).profile
    assert (p.v, p.t, p.b, p.z, p.bibd) == (12, 2, 6, 4, False)
    assert str(p) == "(12_2, 6_4)"
    twin = design.IncidenceStructure(3, ((0, 1, 2), (0, 1, 2)))
    bad = design.classify(twin)
    assert not bad and bad.violations[0][0] == "repeated-block"
    assert design.classify(design.IncidenceStructure(4, ((0, 1, 2), (1, 2, 3)))).violations
    assert design.classify(design.IncidenceStructure(3, ())).violations == [("empty",)]


def test_incidence_guards():
    with pytest.raises(ParameterError):
        design.IncidenceStructure(3, ((0, 0, 1),))
    with pytest.raises(ParameterError):
        design.IncidenceStructure(3, ((0, 3),))


def test_dual_examples():
    k6 = fixtures.k6_matching_configuration()
    d = design.dual(k6)
    assert profile(d) == (6, 4, 12, 2)
    assert design.dual(d).sorted() == k6.sorted()
    assert profile(design.dual(FANO)) == (7, 3, 7, 3)
    with pytest.raises(NotAConfiguration):
        design.dual(design.IncidenceStructure(4, ((0, 1, 2), (1, 2, 3))))


@pytest.mark.parametrize("name", fixtures.FIXTURES)
def test_fixture_is_configuration_and_dual_swaps(name):
    inc, res = fixtures.load(name)
    assert brute_is_configuration(inc)
    v, t, b, z = profile(inc)
    assert profile(design.dual(inc)) == (b, z, v, t)
    assert design.dual(design.dual(inc)).sorted() == inc.sorted()
    if res is not None:
        assert_resolution(inc, res)


def _brute_census(v, bases):
    seen = {}
    for B in bases:
        for a, b in combinations(B, 2):
            for d in ((a - b) % v, (b - a) % v):
                seen[d] = seen.get(d, 0) + 1
    return seen


def test_cyclic_examples():
    c15 = design.cyclic_configuration(15, [(0, 1, 3, 7)])
    assert profile(c15) == (15, 4, 15, 4)
    census = _brute_census(15, [(0, 1, 3, 7)])
    assert sorted(census) == [1, 2, 3, 4, 6, 7, 8, 9, 11, 12, 13, 14]
    assert set(census.values()) == {1}
    sts = design.cyclic_configuration(13, [(0, 1, 4), (0, 2, 8)])
    assert profile(sts) == (13, 6, 26, 3) and design.classify(sts).profile.bibd
    assert _brute_census(13, [(0, 1, 4), (0, 2, 8)]) == {d: 1 for d in range(1, 13)}
    fano = design.cyclic_configuration(7, [(0, 1, 3)])
    assert fano.sorted() == FANO.sorted()
    with pytest.raises(RepeatedDifference) as exc:
        design.cyclic_configuration(9, [(0, 1, 2)])
    assert exc.value.args


@settings(max_examples=150)
@given(st.integers(7, 40), st.lists(st.sets(st.integers(0, 39), min_size=2, max_size=5), min_size=1, max_size=3))
def test_difference_gate_matches_brute_census(v, raw):
    bases = [sorted({x % v for x in B}) for B in raw]
    if any(len(B) < 2 for B in bases):
        return
    clean = all(n == 1 for n in _brute_census(v, bases).values())
    # a base block invariant under a shift gives a repeated difference too
    try:
        inc = design.cyclic_configuration(v, bases)
    except RepeatedDifference:
        assert not clean
        return
    assert clean
    assert len(set(inc.blocks)) == inc.b
    assert all(len(set(A) & set(B)) <= 1 for A, B in combinations(inc.blocks, 2))
    if len({len(B) for B in bases}) == 1:
        assert brute_is_configuration(inc)


def test_search_examples():
    c = design.search_configuration(20, 4, 16, 5)
    assert profile(c) == (20, 4, 16, 5) and brute_is_configuration(c)
    c = design.search_configuration(12, 2, 6, 4)
    assert profile(c) == (12, 2, 6, 4) and brute_is_configuration(c)
    with pytest.raises(Unsat):
        design.search_configuration(7, 4, 7, 4)
    with pytest.raises(ParameterError):
        design.search_configuration(10, 3, 7, 4)


def test_search_exhausts_small_space():
    # 8_3 exists (Moebius-Kantor), 7_3 is the Fano plane; 6 points cannot carry 6_3
    assert profile(design.search_configuration(8, 3, 8, 3)) == (8, 3, 8, 3)
    assert profile(design.search_configuration(7, 3, 7, 3)) == (7, 3, 7, 3)
    with pytest.raises(Unsat):
        design.search_configuration(6, 3, 6, 3)


def test_search_budget():
    with pytest.raises(SearchTimeout) as exc:
        design.search_configuration(40, 6, 48, 5, max_nodes=50)
    assert exc.value.nodes >= 50


def test_orbit_search():
    c = design.search_configuration(20, 6, 30, 4, group_order=5)
    assert profile(c) == (20, 6, 30, 4) and brute_is_configuration(c)


def test_resolve_examples():
    inc, _ = fixtures.load("ag24_resolution")
    res = design.resolve(inc)
    assert len(res) == 5 and all(len(c) == 4 for c in res.classes)
    assert_resolution(inc, res)
    pg, _ = fixtures.load("pg32_packing")
    res = design.resolve(pg)
    assert len(res) == 7 and all(len(c) == 5 for c in res.classes)
    assert_resolution(pg, res)
    with pytest.raises(Unsat):
        design.resolve(FANO)
    ag5, res5 = fixtures.load("ag25_resolution")
    assert len(res5) == 6 == (25 - 1) // (5 - 1)


def test_resolve_class_count_is_bibd_formula():
    for name in ("pg32_packing", "ag24_resolution", "ag25_resolution"):
        inc, res = fixtures.load(name)
        p = design.classify(inc).profile
        assert p.bibd and len(res) == (p.v - 1) // (p.z - 1)


def test_resolve_rejects_non_resolvable_configuration():
    # 8_3 has no parallel class since 3 does not divide 8
    with pytest.raises(Unsat):
        design.resolve(design.search_configuration(8, 3, 8, 3))
    # two vertex stars of K6 minus a matching are disjoint only for matched
    # vertices, so three pairwise disjoint stars do not exist
    with pytest.raises(Unsat):
        design.resolve(fixtures.k6_matching_configuration())


def test_rbibd_catalog_examples():
    assert design.rbibd_catalog(15, 3).exists
    v = design.rbibd_catalog(45, 5)
    assert not v.exists and v.status == "excluded"
    assert design.rbibd_catalog(16, 4).exists
    assert design.rbibd_catalog(25, 5).exists
    assert design.rbibd_catalog(9, 3).exists
    assert design.rbibd_catalog(49, 7).exists
    assert not design.rbibd_catalog(49 + 42, 7).exists
    assert design.rbibd_catalog(21, 3).exists
    assert design.rbibd_catalog(12, 3).status == "unknown"


def test_symmetric_catalog_examples():
    assert "v>=13, z=4" in design.symmetric_catalog(13, 4)
    rows = design.symmetric_catalog(15, 4)
    assert "v=q^2-1, z=q" in rows and "v>=13, z=4" in rows
    assert "sporadic z=5" in design.symmetric_catalog(21, 5)
    assert design.symmetric_catalog(12, 4) == []


def test_asymmetric_gates_examples():
    assert "z=5: v=4t+4, v=0 (mod 20)" in design.asymmetric_gates(20, 4, 16, 5)
    assert any(g.startswith("z=4: v=0 (mod 12)") for g in design.asymmetric_gates(12, 2, 6, 4))
    assert any(g.startswith("z=3") for g in design.asymmetric_gates(13, 6, 26, 3))
    # v=84 is an excluded value of the z=4, v=0 (mod 12) row
    assert "z=4: v=0 (mod 12), v>=3t+1" not in design.asymmetric_gates(84, 3, 63, 4)
    assert "z=4: v=0 (mod 12), v>=3t+1" in design.asymmetric_gates(96, 3, 72, 4)
    assert design.asymmetric_gates(20, 4, 17, 5) == []


def test_packing_to_configuration_examples():
    grid = pk.validate_packing(4, [[(0, 1), (2, 3)], [(0, 2), (1, 3)]])
    inc, res = design.packing_to_configuration(grid)
    assert profile(inc) == (4, 2, 4, 2) and len(res) == 2
    inc, res = design.packing_to_configuration(pk.affine_packing(2, 3, 5))
    p = design.classify(inc).profile
    assert (p.v, p.t, p.b, p.z, p.bibd) == (9, 4, 12, 3, True)
    assert_resolution(inc, res)
    inc, res = design.packing_to_configuration(pk.direct_product_packing((3, 3, 3)))
    assert profile(inc) == (27, 3, 27, 3) and len(res) == 3
    with pytest.raises(NotHomogeneous):
        design.packing_to_configuration(pk.conic_pencil_packing(5, 3))


def test_incidence_round_trip():
    inc, res = fixtures.load("pg32_packing")
    text = design.export_incidence(inc, res)
    assert text.splitlines()[0] == "15 35"
    again, res2 = design.import_incidence(text)
    assert again == inc and res2 == res


@pytest.mark.parametrize("name", fixtures.FIXTURES)
def test_fixtures_regenerate_byte_identical(name):
    shipped = fixtures.resources.files("pircodes").joinpath("data").joinpath(f"{name}.txt").read_text()
    assert fixtures.render(name) == shipped
