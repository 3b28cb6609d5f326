"""Assignment rules over the brute-force universe: rank-maximal, generous,
least-unpopular, and popular sets."""

from __future__ import annotations

import numpy as np

from .core import BRUTE_LIMIT_DEFAULT, AssignmentIndexer, Profile, check_brute_limit
from .majority import MajorityMatrix, universe_ranks

__all__ = [
    "rank_counts",
    "rank_maximal_set",
    "generous_set",
    "least_unpopular_set",
    "popular_set",
]


def rank_counts(profile: Profile, perms: np.ndarray) -> np.ndarray:
    """(m, n) table: entry [i, r] counts agents with rank r+1 in assignment i."""
    ranks_of = universe_ranks(profile, perms)
    n = profile.n
    counts = np.empty((perms.shape[0], n), dtype=np.int16)
    for r in range(n):
        counts[:, r] = (ranks_of == r + 1).sum(axis=1)
    return counts


def _lex_filter(counts: np.ndarray, columns, maximize: bool) -> np.ndarray:
    keep = np.ones(counts.shape[0], dtype=bool)
    for c in columns:
        col = counts[:, c]
        best = col[keep].max() if maximize else col[keep].min()
        keep &= col == best
    return keep


def rank_maximal_set(profile: Profile, brute_limit=BRUTE_LIMIT_DEFAULT) -> set:
    """Maximize the number of rank-1 agents, then rank-2, and so on."""
    check_brute_limit(profile.n, brute_limit)
    perms = AssignmentIndexer(profile.n).all_assignments(brute_limit)
    counts = rank_counts(profile, perms)
    keep = _lex_filter(counts, range(profile.n), maximize=True)
    return {tuple(int(h) for h in perms[i]) for i in np.flatnonzero(keep)}


def generous_set(profile: Profile, brute_limit=BRUTE_LIMIT_DEFAULT) -> set:
    """Minimize the number of rank-n agents, then rank-(n-1), and so on."""
    check_brute_limit(profile.n, brute_limit)
    perms = AssignmentIndexer(profile.n).all_assignments(brute_limit)
    counts = rank_counts(profile, perms)
    keep = _lex_filter(counts, range(profile.n - 1, -1, -1), maximize=False)
    return {tuple(int(h) for h in perms[i]) for i in np.flatnonzero(keep)}


def least_unpopular_set(profile: Profile, brute_limit=BRUTE_LIMIT_DEFAULT):
    """Minimizers of the worst-defeat margin; returns (margin, set).

    The unpopularity of an assignment is the largest margin by which any
    other assignment beats it; popular assignments have unpopularity <= 0,
    a strongly popular one < 0.
    """
    mat = MajorityMatrix(profile, brute_limit)
    m = mat.margin.shape[0]
    if m == 1:
        return 0, {mat.assignment(0)}
    worst = np.asarray(mat.margin, dtype=np.int16).copy()
    np.fill_diagonal(worst, np.iinfo(np.int16).min)
    u = worst.max(axis=0)  # u[j] = worst defeat of assignment j
    best = int(u.min())
    return best, {mat.assignment(i) for i in np.flatnonzero(u == best)}


def popular_set(profile: Profile, brute_limit=BRUTE_LIMIT_DEFAULT) -> set:
    """Assignments weakly majority dominating every assignment; may be empty."""
    mat = MajorityMatrix(profile, brute_limit)
    good = (np.asarray(mat.margin) >= 0).all(axis=1)
    return {mat.assignment(i) for i in np.flatnonzero(good)}
