import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp
import scipy.sparse.csgraph as cg

from conftest import random_profile
from housemaj.core import AssignmentIndexer, Profile, canonical_form
from housemaj.covering import VARIANTS, uncovered_two_step
from housemaj.experiments import (
    Census,
    canonical_count,
    census_canonical,
    census_canonical_range,
    census_impartial_large,
    enumerate_canonical,
    fmt7,
    profile_stats,
    profile_stats_large,
    run_census,
    sample_canonical,
    sample_impartial,
    tc_size_census,
    uncovered_sets_large,
    unrank_canonical,
    verify_fact_n5,
)
from housemaj.majority import MajorityMatrix
from housemaj.pareto import pareto_optimal_set, pareto_pessimal_set
from housemaj.topcycle import bc_brute, tc_brute


@pytest.mark.parametrize(
    "n,count", [(1, 1), (2, 2), (3, 21), (4, 2600), (5, 9078630)]
)
def test_canonical_count(n, count):
    assert canonical_count(n) == count
    assert count == math.comb(math.factorial(n) + n - 2, n - 1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_enumeration_is_exhaustive_and_canonical(n):
    seen = set()
    for p in enumerate_canonical(n):
        assert tuple(p.orders[0]) == tuple(range(n))
        assert canonical_form(p) == p
        seen.add(p)
    assert len(seen) == canonical_count(n)


@pytest.mark.parametrize("n", [3, 4])
def test_unrank_matches_enumeration(n):
    listed = list(enumerate_canonical(n))
    for idx in (0, 1, 7, canonical_count(n) - 1):
        assert unrank_canonical(n, idx) == listed[idx]
    with pytest.raises(ValueError):
        unrank_canonical(n, canonical_count(n))


def test_enumeration_range_partition():
    full = list(enumerate_canonical(4))
    k = 997
    split = list(enumerate_canonical(4, 0, k)) + list(enumerate_canonical(4, k))
    assert split == full


def test_sample_canonical_determinism():
    a = sample_canonical(4, 9, 50)
    b = sample_canonical(4, 9, 50)
    assert a == b
    for p in a:
        assert canonical_form(p) == p
    assert sample_canonical(4, 10, 50) != a


def test_sample_impartial_determinism_and_empty():
    a = sample_impartial(4, 3, 20)
    assert a == sample_impartial(4, 3, 20)
    assert sample_impartial(4, 3, 0) == []


def test_sample_impartial_first_choice_uniform():
    # chi-squared uniformity of agent 1's top choice at alpha = 0.001
    from scipy.stats import chisquare

    profs = sample_impartial(4, 0, 20000)
    tops = Counter(int(p.orders[0, 0]) for p in profs)
    stat, pval = chisquare([tops[h] for h in range(4)])
    assert pval > 0.001


def test_fmt7():
    assert fmt7(1, 1) == "100.0000000"
    assert fmt7(0, 7) == "0.0000000"
    assert fmt7(1, 9078630) == "0.0000110"
    assert fmt7(1, 3) == "33.3333333"
    # exact rational rounding, no float artifacts
    assert fmt7(2, 3) == "66.6666667"


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_profile_stats_matches_slow_paths(n, rng):
    for _ in range(4):
        p = random_profile(rng, n)
        st = profile_stats(p, want_fact=(n == 5))
        mat = MajorityMatrix(p)
        assert st.po == len(pareto_optimal_set(p))
        assert st.pp == len(pareto_pessimal_set(p))
        assert st.tc == len(tc_brute(mat))
        assert st.bc == len(bc_brute(mat))
        for v in VARIANTS:
            assert st.uc[v] == len(uncovered_two_step(mat, v))


def fact_check_slow(p):
    """Independent check of the four n=5 structural equivalences using scipy."""
    mat = MajorityMatrix(p)
    weak = np.asarray(mat.weak)
    strict = np.asarray(mat.strict)
    m = weak.shape[0]
    ncomp, labels = cg.connected_components(
        sp.csr_matrix(weak), directed=True, connection="strong"
    )
    wins = strict.sum(axis=1)
    comp_wins = [wins[labels == c].max() for c in range(ncomp)]
    order = np.argsort(comp_wins)[::-1]
    pos = np.empty(ncomp, dtype=int)
    pos[order] = np.arange(ncomp)
    layer = pos[labels]
    tc = layer == 0
    bc = layer == ncomp - 1
    perms = AssignmentIndexer(p.n).all_assignments()
    po = np.zeros(m, dtype=bool)
    pp = np.zeros(m, dtype=bool)
    po_set = pareto_optimal_set(p)
    pp_set = pareto_pessimal_set(p)
    for i, mu in enumerate(map(tuple, perms)):
        po[i] = mu in po_set
        pp[i] = mu in pp_set
    ok = (tc.sum() > 2) == bool((pp | tc).all())
    ok &= (bc.sum() > 2) == bool((po | bc).all())
    ok &= ((tc.sum() > 2) and (bc.sum() > 2)) == (tc.sum() == m)
    if tc.sum() <= 2 and bc.sum() <= 2:
        mid = ~tc & ~bc
        if mid.any():
            nc, _ = cg.connected_components(
                sp.csr_matrix(weak[np.ix_(mid, mid)]),
                directed=True,
                connection="strong",
            )
            ok &= nc == 1
    return bool(ok)


def test_fact_flag_matches_independent_check(rng):
    for _ in range(40):
        p = random_profile(rng, 5)
        assert profile_stats(p, want_fact=True).fact_ok == fact_check_slow(p)


def test_verify_fact_n5_sample():
    profs = sample_canonical(5, 123, 400)
    assert verify_fact_n5(profs) == 0


def test_census_resumable_split():
    total = canonical_count(4)
    k = 1201
    a = census_canonical_range(4, 0, k)
    b = census_canonical_range(4, k, total)
    a.merge(b)
    full = census_canonical(4)
    assert a.profiles == full.profiles == total
    assert a.sizes == full.sizes
    assert a.ratio_buckets == full.ratio_buckets
    assert a.tc_sizes == full.tc_sizes


def test_census_worker_count_invariance():
    profs = sample_canonical(4, 5, 300)
    c1 = run_census(profs, jobs=1)
    c2 = run_census(profs, jobs=2)
    assert c1.sizes == c2.sizes and c1.ratio_buckets == c2.ratio_buckets


def test_histogram_and_cdf_consistency():
    census = census_canonical(3)
    for curve in ("mckelvey", "bordes", "gillies", "po"):
        rows = census.histogram_rows(curve)
        assert sum(r[1] for r in rows) == census.profiles
        total_pct = sum(Fraction(r[2]) for r in rows)
        assert abs(total_pct - 100) < Fraction(1, 10**4)
    for v in VARIANTS:
        rows = census.cdf_rows(v)
        assert rows[0][0] == 0 and rows[-1][0] == 100
        assert rows[-1][1] == "100.0000000"
        vals = [Fraction(r[1]) for r in rows]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_tc_size_census_n3():
    sizes = tc_size_census(list(enumerate_canonical(3)))
    assert set(sizes) == {1, 2, 4, 6}
    assert sum(sizes.values()) == 21


def test_large_profile_stats_agrees_with_batched(rng):
    for n in (4, 5):
        p = random_profile(rng, n)
        small = profile_stats(p)
        large = profile_stats_large(p)
        assert large.uc == small.uc
        assert large.po == small.po and large.pp == small.pp


def test_uncovered_sets_large_agrees(rng):
    for n in (4, 5, 6):
        p = random_profile(rng, n)
        mat = MajorityMatrix(p)
        got = uncovered_sets_large(p)
        for v in VARIANTS:
            assert got[v] == uncovered_two_step(mat, v)


def test_census_impartial_large_smoke():
    census = census_impartial_large(5, 77, 30)
    direct = run_census(sample_impartial(5, 77, 30))
    assert census.profiles == 30
    for v in VARIANTS:
        assert census.sizes[v] == direct.sizes[v]
    assert census.sizes["po"] == direct.sizes["po"]
