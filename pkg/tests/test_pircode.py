from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from pircodes import design, fixtures
from pircodes import packing as pk
from pircodes import pircode as pc
from pircodes.errors import (
    DimensionMismatch,
    EmptySubset,
    HOutOfRange,
    IntersectionViolation,
    NotAConfiguration,
    Overlap,
    ParseError,
    ResourceGuard,
    VerificationFailed,
)

GRID = [(0, 1), (2, 3), (0, 2), (1, 3)]


def brute_max_disjoint(code, i):
    """Enumerate all 2^m column subsets; exact maximum disjoint packing."""
    cols = code.columns()
    m = code.m
    sums = [0] * (1 << m)
    hits = []
    for mask in range(1, 1 << m):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] ^ cols[low.bit_length() - 1]
        if sums[mask] == 1 << i:
            hits.append(mask)
    hit_set = set(hits)
    minimal = [S for S in hits if not any((T & S) == T and T != S for T in hit_set if T.bit_count() < S.bit_count())]

    @lru_cache(maxsize=None)
    def best(avail, start):
        out = 0
        for j in range(start, len(minimal)):
            S = minimal[j]
            if S & avail == S:
                out = max(out, 1 + best(avail & ~S, j + 1))
        return out

    return best((1 << m) - 1, 0)


def test_code_from_subsets_examples():
    c = pc.code_from_subsets(4, GRID)
    assert (c.m, c.s, c.k) == (8, 4, 3) and pc.verify_recovery_plan(c)
    assert c.plan[0] == ((0,), (1, 4), (2, 6))
    k6 = fixtures.k6_matching_configuration()
    c = pc.code_from_subsets(12, k6.blocks)
    assert (c.m, c.k) == (18, 3) and pc.verify_recovery_plan(c)
    c = pc.code_from_subsets(3, [(0, 1, 2)])
    assert (c.m, c.k) == (4, 2) and c.rows() == ["1001", "0101", "0011"]
    fam = pk.CoverFamily(4, tuple(GRID))
    assert pc.code_from_subsets(4, fam) == pc.code_from_subsets(4, GRID)


def test_code_from_subsets_errors():
    with pytest.raises(IntersectionViolation):
        pc.code_from_subsets(4, [(0, 1, 2), (0, 1, 3)])
    with pytest.raises(IntersectionViolation):
        pc.code_from_subsets(4, [(0, 1), (0, 1)])
    with pytest.raises(EmptySubset):
        pc.code_from_subsets(4, [(0, 1), ()])


def test_code_from_packing_examples():
    c = pc.code_from_packing(pk.direct_product_packing((3, 6)))
    assert (c.m, c.s, c.k) == (27, 18, 3)
    c = pc.code_from_packing(pk.affine_packing(2, 3, 5))
    assert (c.m, c.s, c.k) == (21, 9, 5)
    assert all(pc.max_disjoint_recovery(c, i) == 5 for i in range(9))
    c = pc.code_from_packing(pk.conic_pencil_packing(5, 3))
    assert (c.m, c.s, c.k) == (18, 10, 3) and pc.verify_recovery_plan(c)


def test_code_from_configuration_examples():
    inc, _ = fixtures.load("sym_15_4")
    c = pc.code_from_configuration(inc)
    assert (c.m, c.s, c.k, c.overhead) == (30, 15, 5, Fraction(2))
    inc, _ = fixtures.load("sts_13")
    c = pc.code_from_configuration(inc)
    assert (c.m, c.s, c.k) == (39, 13, 7)
    inc, _ = fixtures.load("conf_20_4_16_5")
    c = pc.code_from_configuration(inc)
    assert (c.m, c.s, c.k) == (36, 20, 5)
    d = pc.code_from_configuration(inc, "dual")
    assert (d.m, d.s, d.k) == (36, 16, 6)
    with pytest.raises(NotAConfiguration):
        pc.code_from_configuration(design.IncidenceStructure(4, ((0, 1, 2), (1, 2, 3))))


@pytest.mark.parametrize("name", fixtures.FIXTURES)
def test_dual_symmetry(name):
    inc, _ = fixtures.load(name)
    a = pc.code_from_configuration(inc, "dual")
    b = pc.code_from_configuration(design.dual(inc), "primal")
    assert (a.s, a.m, a.k) == (b.s, b.m, b.k)
    assert sorted(a.parity) == sorted(b.parity)


def _flip_parity_bit(code, col, row):
    parity = list(code.parity)
    P = set(parity[col])
    P ^= {row}
    parity[col] = tuple(sorted(P))
    return pc.PirCode(code.s, tuple(parity), code.k, code.plan)


def test_verify_mutations():
    c = pc.code_from_subsets(4, GRID)
    assert str(pc.verify_recovery_plan(c)) == "OK"
    bad = _flip_parity_bit(c, 0, 2)
    v = pc.verify_recovery_plan(bad)
    assert not v and v.kind == "SumMismatch" and v.bit == 0 and v.detail == ((1, 4),)
    plan = list(c.plan)
    plan[1] = plan[1] + ((1,),)
    v = pc.verify_recovery_plan(pc.PirCode(4, c.parity, 3, tuple(plan)))
    assert not v and v.kind == "DisjointnessViolation" and v.bit == 1
    v = pc.verify_recovery_plan(pc.PirCode(4, c.parity, 4, c.plan))
    assert v.kind == "TooFewSets"
    v = pc.verify_recovery_plan(pc.PirCode(4, c.parity, 3, c.plan[:3]))
    assert v.kind == "PlanShape"
    plan = list(c.plan)
    plan[0] = ((9,),) + plan[0][1:]
    assert pc.verify_recovery_plan(pc.PirCode(4, c.parity, 3, tuple(plan))).kind == "BadColumn"


def test_oracle_examples():
    grid = pc.code_from_subsets(4, GRID)
    assert [pc.max_disjoint_recovery(grid, i) for i in range(4)] == [3] * 4
    single = pc.code_from_subsets(3, [(0, 1, 2)])
    assert [pc.max_disjoint_recovery(single, i) for i in range(3)] == [2] * 3
    k6 = pc.code_from_configuration(fixtures.k6_matching_configuration())
    assert all(pc.max_disjoint_recovery(k6, i) >= 3 for i in range(12))
    assert pc.max_disjoint_recovery(grid, 0, limit=2) == 2


def test_oracle_resource_guard():
    big = pc.code_from_packing(pk.projective_packing(3, 2, 8))
    assert big.m > pc.ORACLE_MAX_COLUMNS
    with pytest.raises(ResourceGuard):
        pc.max_disjoint_recovery(big, 0)


@pytest.mark.parametrize("build", [
    lambda: pc.code_from_subsets(4, GRID),
    lambda: pc.code_from_subsets(3, [(0, 1, 2)]),
    lambda: pc.code_from_packing(pk.direct_product_packing((2, 3))),
    lambda: pc.code_from_packing(pk.affine_packing(2, 2, 3)),
    lambda: pc.combine_codes(pc.code_from_subsets(3, [(0, 1, 2)]), pc.code_from_subsets(3, [(0, 1, 2)])),
    lambda: pc.code_from_packing(pk.arc_pencil_packing(2, 1, 3)),
])
def test_oracle_matches_exhaustive_enumeration(build):
    code = build()
    assert code.m <= 16
    for i in range(code.s):
        assert pc.max_disjoint_recovery(code, i) == brute_max_disjoint(code, i)


@st.composite
def small_codes(draw):
    s = draw(st.integers(1, 4))
    r = draw(st.integers(0, 12 - s))
    parity = tuple(
        tuple(sorted(draw(st.sets(st.integers(0, s - 1), min_size=1, max_size=s)))) for _ in range(r)
    )
    plan = tuple(((i,),) for i in range(s))
    return pc.PirCode(s, parity, 1, plan)


@settings(max_examples=150)
@given(small_codes(), st.data())
def test_oracle_matches_exhaustive_on_random_codes(code, data):
    i = data.draw(st.integers(0, code.s - 1))
    assert pc.max_disjoint_recovery(code, i) == brute_max_disjoint(code, i)


def test_combine_codes_examples():
    single = pc.code_from_subsets(3, [(0, 1, 2)])
    c = pc.combine_codes(single, single)
    assert (c.m, c.s, c.k) == (8, 3, 4) and pc.verify_recovery_plan(c)
    assert all(pc.max_disjoint_recovery(c, i) == 4 for i in range(3))
    grid = pc.code_from_subsets(4, GRID)
    trivial = pc.PirCode(4, (), 1, tuple(((i,),) for i in range(4)))
    c = pc.combine_codes(grid, trivial)
    assert (c.m, c.k) == (12, 4) and pc.verify_recovery_plan(c)
    c = pc.combine_codes(grid, grid)
    assert (c.m, c.k) == (16, 6) and pc.verify_recovery_plan(c)
    assert all(pc.max_disjoint_recovery(c, i) >= 6 for i in range(4))
    with pytest.raises(DimensionMismatch):
        pc.combine_codes(grid, single)


def test_combine_subpackings_examples():
    grid = pk.validate_packing(4, [[(0, 1), (2, 3)], [(0, 2), (1, 3)]])
    c = pc.combine_subpackings(grid, 2, 2)
    m1 = pc.code_from_packing(pk.subpacking(grid, 2)).m
    assert (c.m, c.k) == (8, 3) and c.m == m1 + m1 - 4
    ag = pk.affine_packing(2, 3, 5)
    c = pc.combine_subpackings(ag, 3, 3)
    full = pc.code_from_packing(ag)
    assert (c.m, c.k) == (21, 5) and c.parity == full.parity
    with pytest.raises(HOutOfRange):
        pc.combine_subpackings(grid, 2, 3)
    with pytest.raises(Overlap):
        pc.combine_subpackings(ag, 3, 2, start2=1)


def test_combine_subpackings_length_identity():
    for p in (pk.affine_packing(2, 4, 6), pk.projective_packing(3, 2, 8), pk.conic_pencil_packing(7, 5)):
        for h1 in range(2, p.k):
            for h2 in range(2, p.k + 2 - h1):
                m1 = pc.code_from_packing(pk.subpacking(p, h1)).m
                sub2 = pk.PartialPacking(p.s, p.partitions[h1 - 1 : h1 + h2 - 2])
                m2 = pc.code_from_packing(sub2).m
                c = pc.combine_subpackings(p, h1, h2)
                assert c.m == m1 + m2 - p.s and c.k == h1 + h2 - 1


def test_lrc_examples():
    assert pc.lrc_params(pc.code_from_subsets(4, GRID)) == pc.LrcParams(2, 2)
    inc, _ = fixtures.load("sym_15_4")
    assert pc.lrc_params(pc.code_from_configuration(inc)) == pc.LrcParams(4, 4)
    assert pc.lrc_params(pc.code_from_subsets(3, [(0, 1, 2)])) == pc.LrcParams(3, 1)


def test_propagation_operations():
    k6 = pc.code_from_configuration(fixtures.k6_matching_configuration())
    up = pc.extend_odd(k6)
    assert (up.m, up.s, up.k) == (19, 12, 4) and pc.verify_recovery_plan(up)
    assert all(pc.max_disjoint_recovery(up, i) >= 4 for i in range(12))
    down = pc.puncture(up)
    assert (down.m, down.k) == (18, 3) and pc.verify_recovery_plan(down)
    short = pc.shorten(k6)
    assert (short.m, short.s, short.k) == (17, 11, 3) and pc.verify_recovery_plan(short)
    with pytest.raises(Exception):
        pc.extend_odd(up)


@settings(max_examples=100)
@given(st.sampled_from(["grid", "ag3", "conic5", "k6", "sym15"]), st.data())
def test_propagation_preserves_validity(name, data):
    code = {
        "grid": lambda: pc.code_from_subsets(4, GRID),
        "ag3": lambda: pc.code_from_packing(pk.affine_packing(2, 3, 5)),
        "conic5": lambda: pc.code_from_packing(pk.conic_pencil_packing(5, 3)),
        "k6": lambda: pc.code_from_configuration(fixtures.k6_matching_configuration()),
        "sym15": lambda: pc.code_from_configuration(fixtures.load("sym_15_4")[0]),
    }[name]()
    if code.parity and data.draw(st.booleans()):
        c = data.draw(st.integers(code.s, code.m - 1))
        out = pc.puncture(code, c)
        assert out.m == code.m - 1 and out.k == code.k - 1
    else:
        j = data.draw(st.integers(0, code.s - 1))
        out = pc.shorten(code, j)
        assert out.s == code.s - 1 and out.k == code.k
    assert pc.verify_recovery_plan(out)
    if code.k % 2:
        up = pc.extend_odd(code)
        assert up.k == code.k + 1 and pc.verify_recovery_plan(up)


@pytest.mark.parametrize("name", fixtures.FIXTURES)
def test_matrix_round_trip(name):
    inc, _ = fixtures.load(name)
    code = pc.code_from_configuration(inc)
    text = pc.export_matrix(code)
    again = pc.import_matrix(text)
    assert (again.s, again.parity, again.k, again.plan) == (code.s, code.parity, code.k, code.plan)
    bare = "\n".join(text.splitlines()[: 1 + code.s]) + "\n"
    rebuilt = pc.import_matrix(bare)
    assert rebuilt.parity == code.parity and rebuilt.k == code.k
    assert pc.export_matrix(again) == text


def test_matrix_import_errors():
    code = pc.code_from_subsets(4, GRID)
    lines = pc.export_matrix(code).splitlines()
    short = list(lines)
    short[2] = short[2][:-1]
    with pytest.raises(ParseError):
        pc.import_matrix("\n".join(short))
    # flip a parity bit: the shipped plan no longer sums correctly
    flipped = list(lines)
    row = flipped[1]
    flipped[1] = row[:4] + ("0" if row[4] == "1" else "1") + row[5:]
    with pytest.raises(VerificationFailed):
        pc.import_matrix("\n".join(flipped))
    with pytest.raises(ParseError):
        pc.import_matrix("")
    with pytest.raises(ParseError):
        pc.import_matrix("2 3\n101\n111\n")
