"""Pairwise majority comparison and dense majority matrices over all n! assignments."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import (
    BRUTE_LIMIT_DEFAULT,
    AssignmentIndexer,
    Profile,
    check_brute_limit,
)

__all__ = [
    "Verdict",
    "MajorityOutcome",
    "compare",
    "universe_ranks",
    "margin_matrix",
    "MajorityMatrix",
    "margins_vs_all",
    "is_popular",
    "is_strongly_popular",
    "is_semi_popular",
]


class Verdict(enum.Enum):
    FIRST_WINS = "first"
    SECOND_WINS = "second"
    TIE = "tie"


@dataclass(frozen=True)
class MajorityOutcome:
    """Signed margin of a majority comparison; positive means the first wins."""

    margin: int

    @property
    def verdict(self) -> Verdict:
        if self.margin > 0:
            return Verdict.FIRST_WINS
        if self.margin < 0:
            return Verdict.SECOND_WINS
        return Verdict.TIE


def compare(profile: Profile, mu, lam) -> MajorityOutcome:
    """Majority comparison of two assignments.

    The margin is the number of agents strictly preferring ``mu`` minus the
    number strictly preferring ``lam``; agents with the same house in both
    contribute nothing.
    """
    n = profile.n
    if len(mu) != n or len(lam) != n:
        raise ValueError("assignment length does not match the profile")
    margin = 0
    ranks = profile.ranks
    for x in range(n):
        rm = ranks[x, mu[x]]
        rl = ranks[x, lam[x]]
        if rm < rl:
            margin += 1
        elif rm > rl:
            margin -= 1
    return MajorityOutcome(int(margin))


def universe_ranks(profile: Profile, perms: np.ndarray) -> np.ndarray:
    """(m, n) array: entry [i, x] is agent x's rank of her house in assignment i."""
    m, n = perms.shape
    out = np.empty((m, n), dtype=np.int8)
    for x in range(n):
        out[:, x] = profile.ranks[x][perms[:, x]]
    return out


def margin_matrix(ranks_of: np.ndarray, chunk: int = 1024) -> np.ndarray:
    """Pairwise margin matrix from a universe rank table.

    Entry [i, j] is the margin of assignment i against assignment j.  Computed
    in row chunks to bound memory for n=7 (5040 x 5040 x 7 intermediates).
    """
    m = ranks_of.shape[0]
    out = np.empty((m, m), dtype=np.int8)
    for lo in range(0, m, chunk):
        hi = min(lo + chunk, m)
        diff = ranks_of[None, lo:hi, :].astype(np.int8) - ranks_of[:, None, :].astype(np.int8)
        # diff[j, i, x] = rank_i - rank_j for agent x; agent x prefers i when diff < 0
        out[lo:hi] = -np.sign(diff).sum(axis=2, dtype=np.int8).T
    return out


class MajorityMatrix:
    """Margins over the full assignment universe plus derived relations.

    ``strict`` (row strictly majority dominates column), ``tie`` and ``weak``
    are boolean views derived from the stored margin matrix; the diagonal is a
    tie.  Immutable after construction.
    """

    __slots__ = ("n", "profile", "indexer", "perms", "margin", "_strict", "_weak")

    def __init__(self, profile: Profile, brute_limit=BRUTE_LIMIT_DEFAULT):
        check_brute_limit(profile.n, brute_limit)
        self.n = profile.n
        self.profile = profile
        self.indexer = AssignmentIndexer(profile.n)
        self.perms = self.indexer.all_assignments(brute_limit)
        ranks_of = universe_ranks(profile, self.perms)
        self.margin = margin_matrix(ranks_of)
        self.margin.setflags(write=False)
        self._strict = None
        self._weak = None

    @property
    def size(self):
        return self.indexer.size

    @property
    def strict(self) -> np.ndarray:
        if self._strict is None:
            s = self.margin > 0
            s.setflags(write=False)
            self._strict = s
        return self._strict

    @property
    def tie(self) -> np.ndarray:
        return self.margin == 0

    @property
    def weak(self) -> np.ndarray:
        if self._weak is None:
            w = self.margin >= 0
            w.setflags(write=False)
            self._weak = w
        return self._weak

    def index(self, assignment) -> int:
        return self.indexer.index(assignment)

    def assignment(self, idx) -> tuple:
        return tuple(int(h) for h in self.perms[idx])


def build_matrix(profile: Profile, brute_limit=BRUTE_LIMIT_DEFAULT) -> MajorityMatrix:
    return MajorityMatrix(profile, brute_limit)


def margins_vs_all(profile: Profile, mu, perms=None, brute_limit=BRUTE_LIMIT_DEFAULT):
    """Vector of margins of ``mu`` against every assignment in the universe."""
    check_brute_limit(profile.n, brute_limit)
    if perms is None:
        perms = AssignmentIndexer(profile.n).all_assignments(brute_limit)
    ranks_of = universe_ranks(profile, perms)
    own = np.array([profile.ranks[x, mu[x]] for x in range(profile.n)], dtype=np.int8)
    return np.sign(ranks_of - own[None, :]).sum(axis=1, dtype=np.int16)


def is_popular(profile: Profile, mu, brute_limit=BRUTE_LIMIT_DEFAULT) -> bool:
    """True iff ``mu`` weakly majority dominates every assignment (brute force)."""
    return bool((margins_vs_all(profile, mu, brute_limit=brute_limit) >= 0).all())


def is_strongly_popular(profile: Profile, mu, brute_limit=BRUTE_LIMIT_DEFAULT) -> bool:
    """True iff ``mu`` strictly majority dominates every other assignment."""
    margins = margins_vs_all(profile, mu, brute_limit=brute_limit)
    return bool((margins > 0).sum() == margins.shape[0] - 1) and bool((margins >= 0).all())


def is_semi_popular(profile: Profile, mu, brute_limit=BRUTE_LIMIT_DEFAULT) -> bool:
    """True iff ``mu`` weakly dominates at least half of all assignments.

    The count includes ``mu`` itself (it ties with itself), and the comparison
    uses exact integers: 2 * wins >= n!.
    """
    margins = margins_vs_all(profile, mu, brute_limit=brute_limit)
    return 2 * int((margins >= 0).sum()) >= margins.shape[0]
