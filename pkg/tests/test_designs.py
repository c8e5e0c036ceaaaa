from collections import Counter
from itertools import combinations, product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from designbounds.designs import (
    BibdParams,
    BinaryCode,
    IncidenceStructure,
    OrthogonalArray,
    RLambdaParams,
    constant_weight_stats,
    delete_block,
    intersection_profile,
    validate_bibd,
    validate_oa,
    validate_pbd,
    validate_r_lambda,
)
from designbounds.moments import summarize
from designbounds.oracle import (
    enumerate_bibds,
    fano_plane,
    near_pencil,
    oa_linear,
    pg2,
    projective_plane,
)

FANO = BibdParams(7, 7, 3, 3, 1)


def naive_oa_ok(oa):
    for c1 in range(oa.k):
        for c2 in range(oa.k):
            if c1 == c2:
                continue
            for x in range(oa.n):
                for y in range(oa.n):
                    hits = 0
                    for row in oa.rows:
                        if row[c1] == x and row[c2] == y:
                            hits += 1
                    if hits != oa.lam:
                        return False
    return True


# --- IncidenceStructure -------------------------------------------------------


def test_structure_canonicalises_and_masks():
    inc = IncidenceStructure(4, [(2, 0), [3, 1, 0]])
    assert inc.blocks == ((0, 2), (0, 1, 3))
    assert inc.masks == (0b0101, 0b1011)
    assert inc.intersection_size(0, 1) == 1
    assert inc.pair_count(0, 2) == 1 and inc.pair_count(1, 2) == 0


def test_structure_accepts_generators():
    inc = IncidenceStructure(3, (iter(b) for b in [(0, 1), (1, 2)]))
    assert inc.blocks == ((0, 1), (1, 2))


@pytest.mark.parametrize(
    "v, blocks", [(3, [(0, 0)]), (3, [()]), (3, [(0, 3)]), (3, [(-1, 0)])]
)
def test_structure_rejects_bad_blocks(v, blocks):
    with pytest.raises(ValueError):
        IncidenceStructure(v, blocks)


def test_structure_counts():
    inc = fano_plane()
    assert inc.replication() == [3] * 7
    assert set(inc.pair_counts().values()) == {1}
    assert len(inc.pair_counts()) == 21
    assert inc.block_multiplicity() == 1
    rows = inc.incidence_rows()
    assert all(sum(r) == 3 for r in rows)
    doubled = IncidenceStructure(7, list(inc.blocks) * 2)
    assert doubled.block_multiplicity() == 2


# --- validate_bibd --------------------------------------------------------------


def test_bibd_fano_valid():
    assert validate_bibd(fano_plane(), FANO).valid


def test_bibd_single_block():
    assert validate_bibd(IncidenceStructure(2, [(0, 1)]), BibdParams(2, 1, 1, 2, 1)).valid


def test_bibd_fano_damaged():
    blocks = [list(b) for b in fano_plane().blocks]
    blocks[0].pop()
    rep = validate_bibd(IncidenceStructure(7, blocks), FANO)
    assert not rep.valid
    assert {"replication", "pair-count", "block-size"} <= rep.codes()


def test_bibd_identity_failure_reported():
    rep = validate_bibd(fano_plane(), BibdParams(8, 10, 5, 4, 2))
    assert "identity" in rep.codes() and "num-points" in rep.codes()
    with pytest.raises(ValueError):
        BibdParams(8, 10, 5, 4, 2).check()


# --- validate_oa ----------------------------------------------------------------


def test_oa_complete_pairs():
    oa = OrthogonalArray(2, 2, 1, list(product(range(2), repeat=2)))
    assert validate_oa(oa).valid


def test_oa_linear_5_3():
    oa = OrthogonalArray(3, 5, 1, [[(a * j + b) % 5 for j in range(3)] for a in range(5) for b in range(5)])
    assert len(oa.rows) == 25
    assert validate_oa(oa).valid


def test_oa_duplicate_row_invalid():
    rows = list(product(range(2), repeat=2))
    rows[3] = rows[0]
    rep = validate_oa(OrthogonalArray(2, 2, 1, rows))
    assert not rep.valid and rep.codes() == {"pair-count"}


def test_oa_shape_errors():
    with pytest.raises(ValueError):
        validate_oa(OrthogonalArray(2, 2, 1, [(0, 0)]))
    with pytest.raises(ValueError):
        validate_oa(OrthogonalArray(2, 2, 1, [(0, 0), (0, 1), (1, 0), (1, 2)]))
    with pytest.raises(ValueError):
        OrthogonalArray(1, 2, 1, [])
    with pytest.raises(ValueError):
        OrthogonalArray(2, 2, 1, [(0, 1, 1)])


def test_oa_symbols_balanced_per_column():
    oa = oa_linear(5, 4)
    for j in range(4):
        assert Counter(row[j] for row in oa.rows) == {s: 5 for s in range(5)}


@settings(max_examples=150, deadline=None)
@given(
    st.integers(2, 3).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.integers(2, 3),
            st.integers(1, 2),
        )
    ).flatmap(
        lambda t: st.tuples(
            st.just(t),
            st.lists(
                st.lists(st.integers(0, t[0] - 1), min_size=t[1], max_size=t[1]),
                min_size=t[2] * t[0] ** 2,
                max_size=t[2] * t[0] ** 2,
            ),
        )
    )
)
def test_oa_validator_matches_naive_counter(data):
    (n, k, lam), rows = data
    oa = OrthogonalArray(k, n, lam, rows)
    assert validate_oa(oa).valid == naive_oa_ok(oa)


@pytest.mark.parametrize("p, k", [(2, 2), (3, 3), (5, 4), (7, 3)])
def test_oa_linear_matches_naive(p, k):
    assert naive_oa_ok(oa_linear(p, k))


# --- validate_pbd ----------------------------------------------------------------


def test_pbd_examples():
    assert validate_pbd(fano_plane()).valid
    np5 = IncidenceStructure(5, [(0, 1, 2, 3), (0, 4), (1, 4), (2, 4), (3, 4)])
    assert validate_pbd(np5).valid
    assert np5 == near_pencil(5)
    rep = validate_pbd(IncidenceStructure(4, [(0, 1, 2), (0, 1, 3)]))
    assert not rep.valid
    assert any("(0, 1) lies in 2" in v.message for v in rep.violations)


def test_pbd_rejects_singleton_blocks():
    rep = validate_pbd(IncidenceStructure(2, [(0,), (0, 1)]))
    assert rep.codes() == {"block-size"}


def test_pbd_full_block_accepted():
    assert validate_pbd(IncidenceStructure(4, [(0, 1, 2, 3)])).valid


# --- validate_r_lambda -----------------------------------------------------------


def test_r_lambda_fano():
    assert validate_r_lambda(fano_plane(), RLambdaParams(7, 7, 3, 1)).valid


@pytest.mark.parametrize("ys", list(combinations(range(7), 3)))
def test_r_lambda_truncated_pg22(ys):
    plane = projective_plane(2)
    relabel = {y: i for i, y in enumerate(ys)}
    blocks = [[relabel[p] for p in blk if p in relabel] for blk in plane.blocks]
    blocks = [b for b in blocks if b]
    inc = IncidenceStructure(3, blocks)
    assert validate_r_lambda(inc, RLambdaParams(3, len(blocks), 3, 1)).valid


def test_r_lambda_singletons_invalid():
    rep = validate_r_lambda(IncidenceStructure(2, [(0,), (1,)]), RLambdaParams(2, 2, 1, 1))
    assert rep.codes() == {"pair-count"}


# --- constant_weight_stats ---------------------------------------------------------


def test_cw_stats_fano_rows():
    stats = constant_weight_stats(BinaryCode(7, fano_plane().incidence_rows()))
    assert (stats.r, stats.min_distance, stats.max_inner_product) == (3, 4, 1)


def test_cw_stats_degenerate():
    one = constant_weight_stats(BinaryCode(3, [(1, 1, 0)]))
    assert (one.r, one.min_distance, one.max_inner_product) == (2, None, None)
    twin = constant_weight_stats(BinaryCode(3, [(1, 1, 0), (1, 1, 0)]))
    assert (twin.min_distance, twin.max_inner_product) == (0, 2)


def test_cw_stats_errors():
    with pytest.raises(ValueError):
        constant_weight_stats(BinaryCode(3, [(1, 0, 0), (1, 1, 0)]))
    with pytest.raises(ValueError):
        constant_weight_stats(BinaryCode(3, []))
    with pytest.raises(ValueError):
        BinaryCode(3, [(1, 2, 0)])
    with pytest.raises(ValueError):
        BinaryCode(3, [(1, 0)])


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 8).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))).flatmap(
    lambda nr: st.tuples(st.just(nr), st.lists(st.sets(st.integers(0, nr[0] - 1), min_size=nr[1], max_size=nr[1]), min_size=2, max_size=8))
))
def test_cw_stats_distance_identity(data):
    (n, r), sets = data
    words = [[1 if i in s else 0 for i in range(n)] for s in sets]
    stats = constant_weight_stats(BinaryCode(n, words))
    dists = [sum(a != b for a, b in zip(u, w)) for u, w in combinations(words, 2)]
    assert stats.min_distance == min(dists)
    assert stats.min_distance == 2 * (stats.r - stats.max_inner_product)


# --- delete_block ------------------------------------------------------------------


@pytest.mark.parametrize("idx", range(7))
def test_delete_block_fano(idx):
    res = delete_block(fano_plane(), idx)
    assert res.structure.num_points == 4
    assert res.structure.block_sizes() == [2] * 6
    assert res.dropped_empty == 0
    assert set(res.structure.pair_counts().values()) == {1}


def test_delete_block_near_pencil_long_block():
    res = delete_block(near_pencil(5), 0)
    assert res.structure.num_points == 1
    assert res.structure.blocks == ((0,),) * 4
    assert res.point_map == (4,)


def test_delete_block_single_block():
    res = delete_block(IncidenceStructure(2, [(0, 1)]), 0)
    assert (res.structure.num_points, res.structure.num_blocks) == (0, 0)


def test_delete_block_full_block_and_duplicates():
    inc = IncidenceStructure(4, [(0, 1, 2, 3)])
    assert validate_pbd(inc).valid
    res = delete_block(inc, 0)
    assert res.dropped_empty == 0 and res.structure.num_points == 0
    dup = IncidenceStructure(3, [(0, 1, 2), (0, 1, 2)])
    with pytest.raises(ValueError):
        delete_block(dup, 0)


def test_delete_block_errors():
    with pytest.raises(IndexError):
        delete_block(fano_plane(), 7)
    with pytest.raises(ValueError):
        delete_block(IncidenceStructure(4, [(0, 1, 2), (0, 1, 3)]), 0)


def _check_deletion(inc):
    for idx in range(inc.num_blocks):
        res = delete_block(inc, idx)
        y = res.structure
        assert y.num_points == inc.num_points - len(inc.blocks[idx])
        assert y.num_blocks + res.dropped_empty == inc.num_blocks - 1
        assert all(c == 1 for c in y.pair_counts().values())
        assert len(y.pair_counts()) == comb(y.num_points, 2)
        # sum of block sizes equals sum of replication numbers
        assert sum(y.block_sizes()) == sum(y.replication())
        for new, old in enumerate(res.point_map):
            assert old not in inc.blocks[idx]


@pytest.mark.parametrize("q", [2, 3, 4])
def test_delete_block_planes(q):
    _check_deletion(projective_plane(q))


@pytest.mark.parametrize("v", [3, 4, 6, 8])
def test_delete_block_near_pencils(v):
    _check_deletion(near_pencil(v))


# --- intersection_profile ------------------------------------------------------------


def test_profile_examples():
    assert intersection_profile(fano_plane(), 6) == [1] * 6
    assert intersection_profile(IncidenceStructure(4, [(0, 1), (2, 3)]), 0) == [0]
    assert intersection_profile(IncidenceStructure(4, [(0, 1), (2, 3)]), 1) == [0]
    assert 3 in intersection_profile(IncidenceStructure(4, [(0, 1, 2), (0, 1, 2), (1, 3)]), 0)
    with pytest.raises(IndexError):
        intersection_profile(fano_plane(), -1)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_symmetric_profile_all_lambda(q):
    inc = projective_plane(q)
    for i in range(inc.num_blocks):
        assert set(intersection_profile(inc, i)) == {1}


@pytest.mark.parametrize("v, k, lam", [(7, 3, 1), (4, 3, 2), (6, 3, 2)])
def test_fisher_derivation_sums(v, k, lam):
    designs = enumerate_bibds(v, k, lam)
    assert designs
    for inc in designs:
        b = inc.num_blocks
        r = inc.replication()[0]
        assert v * r == b * k and lam * (v - 1) == r * (k - 1)
        ms = summarize(intersection_profile(inc, b - 1))
        assert ms.s0 == b - 1
        assert ms.s1 == k * (r - 1)
        assert ms.sstar == comb(k, 2) * (lam - 1)


def test_pg2_lines_are_coordinates():
    plane = pg2(3)
    assert len(plane.points) == 13
    assert plane.structure == projective_plane(3)
