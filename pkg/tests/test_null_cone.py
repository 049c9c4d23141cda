import itertools

import numpy as np
import pytest

from orbitmle.exact import bareiss_rank
from orbitmle.null_cone import (
    CpRankQuery,
    alpha_bound,
    cp_rank,
    format_table,
    lower_bound,
    mlt_bounds,
    mlt_table,
    null_cone_fills,
    simple_upper_bound,
)
from oracles import THRESHOLD_TABLE


@pytest.mark.parametrize("a,b,c,d", list(itertools.product(range(1, 4), repeat=4)))
def test_single_sample_rank_is_product(a, b, c, d):
    assert cp_rank(CpRankQuery(a, b, c, d, 1)) == min(a, c) * min(b, d)


@pytest.mark.parametrize("c,d,n", [(1, 1, 1), (3, 2, 2), (4, 5, 3), (2, 7, 6)])
def test_single_column_rank_one(c, d, n):
    assert cp_rank(CpRankQuery(1, 1, c, d, n)) == 1


def test_degenerate_dims_give_zero():
    assert cp_rank(CpRankQuery(0, 3, 2, 2, 4)) == 0
    assert cp_rank(CpRankQuery(2, 2, 3, 0, 4)) == 0
    assert cp_rank(CpRankQuery(2, 2, 3, 3, 0)) == 0


def test_cp_rank_matches_direct_construction():
    q = CpRankQuery(2, 2, 3, 2, 2, trials=1, entry_bound=50, seed=11)
    rng = np.random.default_rng(11)
    X = rng.integers(-50, 51, size=(2, 3, 2), dtype=np.int64)
    Y = rng.integers(-50, 51, size=(2, 2, 2), dtype=np.int64)
    M = sum(np.kron(x, y) for x, y in zip(X, Y))
    assert cp_rank(q) == bareiss_rank(M.tolist()) == np.linalg.matrix_rank(M)


def test_query_validation():
    with pytest.raises(ValueError):
        CpRankQuery(1, 1, 1, 1, 1, trials=0)
    with pytest.raises(ValueError):
        CpRankQuery(1, 1, 1, 1, 1, entry_bound=1)
    with pytest.raises(ValueError):
        CpRankQuery(-1, 1, 1, 1, 1)


def test_fills_examples():
    assert null_cone_fills(3, 2, 1)
    assert not null_cone_fills(3, 2, 2)
    for m in range(1, 8):
        assert not null_cone_fills(m, m, 1)


def test_fills_transposes():
    for m1, m2, n in [(2, 3, 1), (2, 3, 2), (3, 5, 2), (4, 7, 2)]:
        assert null_cone_fills(m1, m2, n) == null_cone_fills(m2, m1, n)


@pytest.mark.parametrize("m1, m2", [(3, 2), (7, 5), (9, 7), (8, 3)])
def test_bounds_examples(m1, m2):
    row = next(r for r in THRESHOLD_TABLE if r[:2] == (m1, m2))
    b = mlt_bounds(m1, m2)
    assert (b.lower_L, b.exact_mltb, b.alpha_upper, b.simple_upper_U) == row[2:]


def test_alpha_square_two():
    # max over k of l/k + (m2-k)/(m1-l) is 1/2 here
    assert alpha_bound(2, 2) == 1


def test_divisible_pairs():
    for m2 in range(1, 6):
        for q in range(1, 5):
            assert mlt_bounds(q * m2, m2).exact_mltb == q


def test_table_reproduced():
    rows = mlt_table(10)
    got = [(r.m1, r.m2, r.lower_L, r.exact_mltb, r.alpha_upper, r.simple_upper_U) for r in rows]
    assert got == THRESHOLD_TABLE


@pytest.mark.parametrize("seed", [1, 7, 12345])
def test_table_seed_independent(seed):
    rows = mlt_table(10, seed=seed)
    assert [r.exact_mltb for r in rows] == [t[3] for t in THRESHOLD_TABLE]


def test_format_table_aligned():
    text = format_table(mlt_table(10))
    lines = text.splitlines()
    assert len(lines) == 46
    assert len({len(l) for l in lines}) == 1
    assert lines[1].split() == ["2", "2", "1", "1", "1", "2"]
    assert lines[-1].split() == ["10", "10", "1", "1", "2", "2"]


def test_bound_sandwich():
    for m1 in range(1, 13):
        for m2 in range(1, m1 + 1):
            b = mlt_bounds(m1, m2)
            assert b.lower_L <= b.exact_mltb <= b.alpha_upper <= b.simple_upper_U


def _fills_queries(m1, m2, n):
    """The rank queries the fill test can issue, mirroring its loop."""
    out = []
    for k in range(1, m2 + 1):
        l = -(-m1 * k // m2) - 1
        a, b, c, d = m2 - k, k, m1 - l, n * k - l
        if c <= n * a and a * b >= c * d:
            out.append((a, b, c, d))
    return out


def test_rank_stable_across_seeds():
    queries = set()
    for m1 in range(2, 11):
        for m2 in range(2, m1 + 1):
            for n in range(lower_bound(m1, m2), simple_upper_bound(m1, m2) + 1):
                queries.update((q, n) for q in _fills_queries(m1, m2, n))
    assert queries
    for (a, b, c, d), n in sorted(queries):
        ranks = {cp_rank(CpRankQuery(a, b, c, d, n, seed=s)) for s in (0, 1, 2)}
        assert len(ranks) == 1, (a, b, c, d, n, ranks)


def test_fills_monotone_in_n():
    for m1 in range(1, 11):
        for m2 in range(1, 11):
            top = simple_upper_bound(max(m1, m2), min(m1, m2)) + 2
            seq = [null_cone_fills(m1, m2, n) for n in range(0, top + 1)]
            # True ... True False ... False
            assert seq == sorted(seq, reverse=True), (m1, m2, seq)
            assert not seq[-1]
