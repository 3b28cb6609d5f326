"""Top and bottom cycle: brute-force reachability and the five-case closed form.

For n >= 5 the top cycle has one of five shapes with sizes in
{1, 2, n!-2, n!-1, n!}; each shape is detectable in O(n^2) from the profile
alone, with explicit witness assignments.  For n <= 4 the closed form fails
(there are n=3 and n=4 profiles with extra sizes), so characterization falls
back to an explicit brute-force set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .core import BRUTE_LIMIT_DEFAULT, Profile, invert_profile
from .majority import MajorityMatrix

__all__ = [
    "TcDescription",
    "tc_brute",
    "bc_brute",
    "tc_characterize",
    "bc_characterize",
    "tc_contains",
]

CASE_I = "I"
CASE_II = "II"
CASE_III = "III"
CASE_IV = "IV"
CASE_V = "V"
CASE_EXPLICIT = "explicit"


@dataclass(frozen=True)
class TcDescription:
    """Concise description of a top (or bottom) cycle.

    ``members`` is set for the small cases (I, II, explicit); ``excluded``
    for the co-small cases (III: two excluded, IV: one excluded); case V has
    neither (every assignment belongs).  ``size`` is always exact.
    """

    case: str
    n: int
    size: int
    members: frozenset | None = None
    excluded: frozenset | None = None

    def contains(self, mu) -> bool:
        mu = tuple(int(h) for h in mu)
        if self.members is not None:
            return mu in self.members
        if self.excluded is not None:
            return mu not in self.excluded
        return True


def _component_sets(weak: np.ndarray):
    """Strongly connected components of a complete weak-dominance relation.

    Because the relation is complete, the condensation is a total order, so
    the top cycle is the unique source component and the bottom cycle the
    unique sink component.
    """
    m = weak.shape[0]
    _, labels = connected_components(csr_matrix(weak), directed=True, connection="strong")
    k = labels.max() + 1
    if k == 1:
        return labels, 0, 0
    reps = np.zeros(k, dtype=np.int64)
    for v in range(m):
        reps[labels[v]] = v
    # rank components by wins of their representative against other reps;
    # the condensation being a chain makes this count injective
    wins = np.array([[weak[reps[a], reps[b]] for b in range(k)] for a in range(k)])
    order = wins.sum(axis=1)
    top = int(np.argmax(order))
    bottom = int(np.argmin(order))
    return labels, top, bottom


def tc_brute(mat: MajorityMatrix) -> set:
    """Assignments reaching every assignment via weak-dominance paths."""
    labels, top, _ = _component_sets(np.asarray(mat.weak))
    idx = np.flatnonzero(labels == top)
    return {mat.assignment(i) for i in idx}


def bc_brute(mat: MajorityMatrix) -> set:
    """Assignments reachable from every assignment via weak-dominance paths."""
    labels, _, bottom = _component_sets(np.asarray(mat.weak))
    idx = np.flatnonzero(labels == bottom)
    return {mat.assignment(i) for i in idx}


def _shared_pair_tops(profile: Profile):
    """Detect the two-agent shared-top pattern of the size-2 case.

    Returns (x, y, p, q) when exactly two agents share a top house p, every
    other agent has a distinct own top, both x and y rank the same house q
    second, and no agent tops q.  Returns None otherwise.
    """
    n = profile.n
    tops = profile.orders[:, 0]
    counts = np.bincount(tops, minlength=n)
    if (counts == 2).sum() != 1 or counts.max() != 2:
        return None
    p = int(np.flatnonzero(counts == 2)[0])
    x, y = (int(a) for a in np.flatnonzero(tops == p))
    q = int(profile.orders[x, 1])
    if int(profile.orders[y, 1]) != q or counts[q] != 0:
        return None
    return x, y, p, q


def _case_ii_pair(profile: Profile, x, y, p, q):
    """The two top-cycle members: everyone takes their top except that one of
    the sharing agents is diverted to the leftover house q."""
    base = [int(t) for t in profile.orders[:, 0]]
    mu_x = list(base)
    mu_x[x] = q
    mu_y = list(base)
    mu_y[y] = q
    return frozenset({tuple(mu_x), tuple(mu_y)})


def tc_characterize(profile: Profile, brute_limit=BRUTE_LIMIT_DEFAULT) -> TcDescription:
    """Closed-form top cycle for n >= 5; explicit brute set for n <= 4."""
    n = profile.n
    if n <= 4:
        members = frozenset(tc_brute(MajorityMatrix(profile, brute_limit)))
        return TcDescription(CASE_EXPLICIT, n, len(members), members=members)

    tops = profile.orders[:, 0]
    if len(set(int(t) for t in tops)) == n:
        winner = tuple(int(t) for t in tops)
        return TcDescription(CASE_I, n, 1, members=frozenset({winner}))

    shared = _shared_pair_tops(profile)
    if shared is not None:
        pair = _case_ii_pair(profile, *shared)
        return TcDescription(CASE_II, n, 2, members=pair)

    total = math.factorial(n)
    inv = invert_profile(profile)
    shared_bottom = _shared_pair_tops(inv)
    if shared_bottom is not None:
        x, y, p, q = shared_bottom
        # the two Pareto-pessimal assignments: everyone takes their bottom
        # except that one of the bottom-sharing agents takes the leftover
        excluded = _case_ii_pair(inv, x, y, p, q)
        return TcDescription(CASE_III, n, total - 2, excluded=excluded)

    bottoms = profile.orders[:, -1]
    if len(set(int(b) for b in bottoms)) == n:
        worst = tuple(int(b) for b in bottoms)
        return TcDescription(CASE_IV, n, total - 1, excluded=frozenset({worst}))

    return TcDescription(CASE_V, n, total)


def bc_characterize(profile: Profile, brute_limit=BRUTE_LIMIT_DEFAULT) -> TcDescription:
    """Bottom cycle via duality: BC of a profile is the TC of its inversion."""
    n = profile.n
    if n <= 4:
        members = frozenset(bc_brute(MajorityMatrix(profile, brute_limit)))
        return TcDescription(CASE_EXPLICIT, n, len(members), members=members)
    return tc_characterize(invert_profile(profile), brute_limit)


def tc_contains(desc: TcDescription, profile: Profile, mu) -> bool:
    """O(n) membership test against a characterization of this profile."""
    if len(mu) != profile.n or desc.n != profile.n:
        raise ValueError("assignment/profile/description dimension mismatch")
    return desc.contains(mu)
