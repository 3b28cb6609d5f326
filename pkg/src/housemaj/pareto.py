"""Serial dictatorships, Pareto dominance, and Pareto-optimal/pessimal sets."""

from __future__ import annotations

import numpy as np

from .core import (
    BRUTE_LIMIT_DEFAULT,
    AssignmentIndexer,
    Profile,
    check_brute_limit,
    invert_profile,
)

__all__ = [
    "serial_dictatorship",
    "serial_antidictatorship",
    "pareto_dominates",
    "is_pareto_optimal",
    "is_pareto_pessimal",
    "pareto_optimal_set",
    "pareto_pessimal_set",
    "pareto_masks",
    "pareto_masks_from_ranks",
]


def serial_dictatorship(profile: Profile, priority) -> tuple:
    """Agents pick their favorite remaining house in ``priority`` order."""
    n = profile.n
    if sorted(priority) != list(range(n)):
        raise ValueError("priority order must be a permutation of the agents")
    taken = [False] * n
    out = [None] * n
    for x in priority:
        for h in profile.orders[x]:
            if not taken[h]:
                taken[h] = True
                out[x] = int(h)
                break
    return tuple(out)


def serial_antidictatorship(profile: Profile, priority) -> tuple:
    """Agents pick their least preferred remaining house in ``priority`` order."""
    return serial_dictatorship(invert_profile(profile), priority)


def pareto_dominates(profile: Profile, mu, lam) -> bool:
    """True iff every agent weakly prefers ``mu`` and at least one strictly."""
    strict = False
    for x in range(profile.n):
        rm = profile.ranks[x, mu[x]]
        rl = profile.ranks[x, lam[x]]
        if rm > rl:
            return False
        if rm < rl:
            strict = True
    return strict


def _envy_acyclic(profile: Profile, mu, improving: bool) -> bool:
    """Cycle test on the trading graph of ``mu``.

    With ``improving`` True the edge x -> y exists iff agent x strictly prefers
    y's house to her own (so a cycle is an improving trade and ``mu`` is not
    Pareto-optimal); with False the edge means x prefers her own house to y's
    (a cycle is a worsening trade, ruling out Pareto-pessimality).
    """
    n = profile.n
    ranks = profile.ranks
    own = np.array([ranks[x, mu[x]] for x in range(n)])
    house_rank = np.array([[ranks[x, mu[y]] for y in range(n)] for x in range(n)])
    if improving:
        adj = house_rank < own[:, None]
    else:
        adj = house_rank > own[:, None]
    # Kahn-style elimination: the graph is acyclic iff it empties out.
    alive = np.ones(n, dtype=bool)
    for _ in range(n):
        outdeg = (adj & alive[None, :]).sum(axis=1)
        removable = alive & (outdeg == 0)
        if not removable.any():
            break
        alive &= ~removable
    return not alive.any()


def is_pareto_optimal(profile: Profile, mu) -> bool:
    """True iff no improving trading cycle exists (no assignment dominates mu)."""
    return _envy_acyclic(profile, mu, improving=True)


def is_pareto_pessimal(profile: Profile, mu) -> bool:
    """True iff ``mu`` Pareto-dominates no assignment."""
    return _envy_acyclic(profile, mu, improving=False)


def pareto_masks(profile: Profile, perms: np.ndarray):
    """Boolean masks (po, pp) over a universe array via pairwise rank dominance."""
    from .majority import universe_ranks

    return pareto_masks_from_ranks(universe_ranks(profile, perms))


def pareto_masks_from_ranks(ranks_of: np.ndarray):
    """Same as pareto_masks, from a precomputed universe rank table."""
    ranks_of = ranks_of.astype(np.int16)
    m = ranks_of.shape[0]
    po = np.ones(m, dtype=bool)
    pp = np.empty(m, dtype=bool)
    chunk = 512
    for lo in range(0, m, chunk):
        hi = min(lo + chunk, m)
        # diff[i, j, x] = rank of j's house minus rank of chunk-row i's house for
        # agent x; chunk assignment i dominates j when all >= 0 and some > 0.
        diff = ranks_of[None, :, :] - ranks_of[lo:hi, None, :]
        dom = (diff >= 0).all(axis=2) & (diff > 0).any(axis=2)
        pp[lo:hi] = ~dom.any(axis=1)
        po &= ~dom.any(axis=0)
    return po, pp


def pareto_optimal_set(profile: Profile, brute_limit=BRUTE_LIMIT_DEFAULT) -> set:
    """All Pareto-optimal assignments, as a set of tuples."""
    check_brute_limit(profile.n, brute_limit)
    perms = AssignmentIndexer(profile.n).all_assignments(brute_limit)
    return {
        tuple(int(h) for h in row)
        for row in perms
        if is_pareto_optimal(profile, row)
    }


def pareto_pessimal_set(profile: Profile, brute_limit=BRUTE_LIMIT_DEFAULT) -> set:
    """All Pareto-pessimal assignments, as a set of tuples."""
    check_brute_limit(profile.n, brute_limit)
    perms = AssignmentIndexer(profile.n).all_assignments(brute_limit)
    return {
        tuple(int(h) for h in row)
        for row in perms
        if is_pareto_pessimal(profile, row)
    }
