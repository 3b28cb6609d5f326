import numpy as np
import pytest

from conftest import (
    GENEROUS_7,
    RM_P,
    RM_P2,
    UNANIMOUS_3,
    profile_from_rows,
    random_profile,
)
from housemaj.core import AssignmentIndexer, parse_assignment
from housemaj.majority import MajorityMatrix, margins_vs_all
from housemaj.rules import (
    generous_set,
    least_unpopular_set,
    popular_set,
    rank_counts,
    rank_maximal_set,
)


def sorted_rank_vector(profile, mu):
    return tuple(sorted(profile.ranks[x, mu[x]] for x in range(profile.n)))


def rank_maximal_slow(profile):
    # lexicographically smallest sorted rank vector
    perms = AssignmentIndexer(profile.n).all_assignments()
    best = min(sorted_rank_vector(profile, tuple(mu)) for mu in perms)
    return {
        tuple(mu)
        for mu in map(tuple, perms)
        if sorted_rank_vector(profile, mu) == best
    }


def generous_slow(profile):
    # lexicographically smallest reversed sorted rank vector (worst rank first)
    perms = AssignmentIndexer(profile.n).all_assignments()

    def key(mu):
        return tuple(sorted((profile.ranks[x, mu[x]] for x in range(profile.n)),
                            reverse=True))

    best = min(key(tuple(mu)) for mu in perms)
    return {tuple(mu) for mu in map(tuple, perms) if key(mu) == best}


def test_rank_counts(rng):
    p = random_profile(rng, 4)
    perms = AssignmentIndexer(4).all_assignments()
    counts = rank_counts(p, perms)
    assert counts.sum(axis=1).tolist() == [4] * 24
    for i in (0, 7, 23):
        mu = tuple(perms[i])
        for r in range(4):
            expect = sum(1 for x in range(4) if p.ranks[x, mu[x]] == r + 1)
            assert counts[i, r] == expect


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_rank_maximal_matches_slow(n, rng):
    p = random_profile(rng, n)
    assert rank_maximal_set(p) == rank_maximal_slow(p)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_generous_matches_slow(n, rng):
    p = random_profile(rng, n)
    assert generous_set(p) == generous_slow(p)


def test_least_unpopular_matches_slow(rng):
    for n in (2, 3, 4):
        p = random_profile(rng, n)
        mat = MajorityMatrix(p)
        margin = np.asarray(mat.margin)
        m = margin.shape[0]
        slow_u = []
        for j in range(m):
            slow_u.append(max(margin[i, j] for i in range(m) if i != j) if m > 1 else 0)
        best, members = least_unpopular_set(p)
        assert best == min(slow_u)
        assert members == {mat.assignment(j) for j in range(m) if slow_u[j] == best}


def test_popular_set_unanimous():
    p = profile_from_rows(UNANIMOUS_3)
    assert popular_set(p) == set()
    best, members = least_unpopular_set(p)
    assert best == 1  # every assignment loses to some swap by one vote
    assert members  # but the least unpopular set is never empty


def test_popular_set_matches_margins(rng):
    for _ in range(10):
        p = random_profile(rng, 4)
        pop = popular_set(p)
        for mu in pop:
            assert (margins_vs_all(p, mu) >= 0).all()
        if pop:
            best, members = least_unpopular_set(p)
            assert best <= 0
            assert pop <= members or best < 0


def test_least_unpopular_zero_iff_popular(rng):
    for _ in range(10):
        p = random_profile(rng, 4)
        best, members = least_unpopular_set(p)
        pop = popular_set(p)
        if pop:
            assert best <= 0
            assert members == pop
        else:
            assert best > 0


def test_rank_maximal_example_pair():
    p = profile_from_rows(RM_P)
    p2 = profile_from_rows(RM_P2)
    mu = parse_assignment("a,c,b,d,e,f", p.labels)
    assert mu in rank_maximal_set(p)
    assert mu not in rank_maximal_set(p2)
    lam = parse_assignment("d,f,e,a,b,c", p2.labels)
    assert lam in rank_maximal_set(p2)


def test_generous_example_profile():
    p = profile_from_rows(GENEROUS_7)
    gen = generous_set(p)
    # the modified assignment keeps every agent within her top three
    mu_mod = parse_assignment("c,b,a,g,e,d,f", p.labels)
    worst = max(p.ranks[x, mu_mod[x]] for x in range(7))
    assert worst <= 3
    for g in gen:
        assert max(p.ranks[x, g[x]] for x in range(7)) <= worst
