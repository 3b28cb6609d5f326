import itertools

import numpy as np
import pytest

from conftest import UNANIMOUS_3, profile_from_rows, random_profile
from housemaj.core import AssignmentIndexer, UniverseTooLargeError, parse_assignment
from housemaj.majority import (
    MajorityMatrix,
    Verdict,
    build_matrix,
    compare,
    is_popular,
    is_semi_popular,
    is_strongly_popular,
    margins_vs_all,
)


def brute_margin(profile, mu, lam):
    up = sum(
        1
        for x in range(profile.n)
        if profile.ranks[x, mu[x]] < profile.ranks[x, lam[x]]
    )
    down = sum(
        1
        for x in range(profile.n)
        if profile.ranks[x, mu[x]] > profile.ranks[x, lam[x]]
    )
    return up - down


def test_compare_unanimous():
    p = profile_from_rows(UNANIMOUS_3)
    mu = parse_assignment("a,b,c", p.labels)
    lam = parse_assignment("b,c,a", p.labels)
    out = compare(p, mu, lam)
    assert out.margin == 1
    assert out.verdict is Verdict.FIRST_WINS
    assert compare(p, lam, mu).verdict is Verdict.SECOND_WINS
    assert compare(p, mu, mu).margin == 0
    assert compare(p, mu, mu).verdict is Verdict.TIE


def test_compare_antisymmetric(rng):
    p = random_profile(rng, 5)
    perms = AssignmentIndexer(5).all_assignments()
    idx = rng.integers(0, len(perms), size=40)
    for i, j in idx.reshape(20, 2):
        mu, lam = tuple(perms[i]), tuple(perms[j])
        assert compare(p, mu, lam).margin == -compare(p, lam, mu).margin
        assert compare(p, mu, lam).margin == brute_margin(p, mu, lam)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_matrix_matches_pairwise(n, rng):
    p = random_profile(rng, n)
    mat = MajorityMatrix(p)
    perms = AssignmentIndexer(n).all_assignments()
    for i, j in itertools.product(range(len(perms)), repeat=2):
        assert mat.margin[i, j] == brute_margin(p, tuple(perms[i]), tuple(perms[j]))


def test_matrix_views(rng):
    p = random_profile(rng, 4)
    mat = build_matrix(p)
    m = np.asarray(mat.margin)
    assert np.array_equal(np.asarray(mat.strict), m > 0)
    assert np.array_equal(np.asarray(mat.weak), m >= 0)
    assert np.array_equal(np.asarray(mat.tie), m == 0)
    assert np.array_equal(m, -m.T)
    # weak relation is complete
    assert (np.asarray(mat.weak) | np.asarray(mat.weak).T).all()


def test_matrix_index_assignment_roundtrip(rng):
    p = random_profile(rng, 4)
    mat = MajorityMatrix(p)
    for idx in (0, 5, 17, 23):
        assert mat.index(mat.assignment(idx)) == idx


def test_margins_vs_all(rng):
    p = random_profile(rng, 4)
    mu = tuple(rng.permutation(4))
    row = margins_vs_all(p, mu)
    perms = AssignmentIndexer(4).all_assignments()
    for j, lam in enumerate(perms):
        assert row[j] == brute_margin(p, mu, tuple(lam))


def test_popularity_predicates():
    # distinct tops: agent x top-ranks house x, so the identity assignment
    # strictly beats everything else
    p = profile_from_rows("a b c\nb a c\nc a b")
    top = parse_assignment("a,b,c", p.labels)
    bottom = parse_assignment("b,c,a", p.labels)
    assert is_popular(p, top)
    assert is_strongly_popular(p, top)
    assert is_semi_popular(p, top)
    assert not is_popular(p, bottom)
    assert not is_strongly_popular(p, bottom)


def test_unanimous_profile_has_no_popular_assignment():
    # the unanimity winner (a,b,c) loses 1:2 against its rotation (c,a,b),
    # so not even it is popular; it still weakly dominates itself and four
    # others, hence is semi-popular
    p = profile_from_rows(UNANIMOUS_3)
    top = parse_assignment("a,b,c", p.labels)
    assert not is_popular(p, top)
    assert is_semi_popular(p, top)
    mat = MajorityMatrix(p)
    weak = np.asarray(mat.weak)
    assert not weak.all(axis=1).any()
    assert weak[0].sum() == 5  # includes the self tie


def test_popular_implies_semi_popular(rng):
    for _ in range(20):
        p = random_profile(rng, 4)
        mat = MajorityMatrix(p)
        weak = np.asarray(mat.weak)
        for i in np.flatnonzero(weak.all(axis=1)):
            assert is_semi_popular(p, mat.assignment(i))


def test_matrix_respects_brute_limit(rng):
    p = random_profile(rng, 6)
    with pytest.raises(UniverseTooLargeError):
        MajorityMatrix(p, brute_limit=5)
