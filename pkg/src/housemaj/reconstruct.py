"""Reconstruction of preference profiles from a majority-comparison oracle.

Given only a black-box verdict oracle over assignment pairs, recover the full
set of profiles inducing the same majority graph.  That set is a rotation
class: houses split into blocks (on whose internal order some pair of agents
disagrees, pinning the block absolutely) that all agents rank contiguously
and in a common order; profiles in the class differ exactly by a cyclic shift
of the block order.  Everything is recovered with O(n^3) two-agent and
three-agent swap queries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import Profile
from .majority import Verdict, compare

__all__ = [
    "UnresolvableError",
    "MajorityOracle",
    "RotationClass",
    "pair_query",
    "infer_pair_column",
    "resolve_within_component",
    "component_decomposition",
    "cycle_type",
    "reconstruct",
    "rotation_equivalent",
    "infer_margins",
    "QUERY_BOUND_C",
]

# reconstruction never issues more than QUERY_BOUND_C * n**4 oracle queries
QUERY_BOUND_C = 2


class UnresolvableError(RuntimeError):
    """The oracle's answers are inconsistent with every preference profile."""


class MajorityOracle:
    """Verdict-only majority oracle with a query counter and replay log."""

    def __init__(self, fn, n):
        self.fn = fn
        self.n = n
        self.queries = 0
        self.log = []

    @classmethod
    def from_profile(cls, profile: Profile) -> "MajorityOracle":
        return cls(lambda mu, lam: compare(profile, mu, lam).verdict, profile.n)

    def query(self, mu, lam) -> Verdict:
        self.queries += 1
        v = self.fn(mu, lam)
        self.log.append((tuple(mu), tuple(lam), v))
        return v


def _filler_assignment(n, fixed):
    """Assignment with the given agent->house entries; remaining agents get the
    remaining houses in index order (the verdict is filler-independent)."""
    out = [None] * n
    used = set(fixed.values())
    for x, h in fixed.items():
        out[x] = h
    free = iter(h for h in range(n) if h not in used)
    for x in range(n):
        if out[x] is None:
            out[x] = next(free)
    return tuple(out)


def pair_query(oracle: MajorityOracle, x, y, p, q) -> Verdict:
    """Swap query on two agents: FIRST_WINS means p >_x q and q >_y p,
    SECOND_WINS the reverse, TIE that x and y agree on {p, q}."""
    if x == y or p == q:
        raise ValueError("pair query needs distinct agents and houses")
    mu = _filler_assignment(oracle.n, {x: p, y: q})
    lam = tuple(q if h == p else p if h == q else h for h in mu)
    return oracle.query(mu, lam)


def infer_pair_column(oracle: MajorityOracle, p, q):
    """Determine every agent's preference between p and q, or detect agreement.

    Scans adjacent agent pairs until one disagrees (anchoring a direction),
    then resolves every other agent against the anchor.  Returns a boolean
    array (True = agent prefers p) or None when all agents agree with unknown
    direction.
    """
    n = oracle.n
    anchor = None
    for x in range(n - 1):
        v = pair_query(oracle, x, x + 1, p, q)
        if v is Verdict.FIRST_WINS:
            anchor = (x, True)
            break
        if v is Verdict.SECOND_WINS:
            anchor = (x, False)
            break
    if anchor is None:
        return None
    x0, x0_prefers_p = anchor
    col = np.zeros(n, dtype=bool)
    col[x0] = x0_prefers_p
    col[x0 + 1] = not x0_prefers_p
    for z in range(n):
        if z in (x0, x0 + 1):
            continue
        v = pair_query(oracle, x0, z, p, q)
        if v is Verdict.TIE:
            col[z] = x0_prefers_p
        elif v is Verdict.FIRST_WINS:
            if not x0_prefers_p:
                raise UnresolvableError(f"contradictory answers for houses {p},{q}")
            col[z] = False
        else:
            if x0_prefers_p:
                raise UnresolvableError(f"contradictory answers for houses {p},{q}")
            col[z] = True
    return col


def resolve_within_component(oracle: MajorityOracle, prefers, p, q, r):
    """Directions on (p, r) from known columns (p, q) and (q, r), when all
    agents agree on (p, r).  Transitivity settles it when any agent has q in
    the middle; otherwise a three-agent cyclic swap query decides."""
    col_pq = _column(prefers, p, q)
    col_qr = _column(prefers, q, r)
    n = oracle.n
    trans_p = col_pq & col_qr  # p > q > r
    trans_r = ~col_pq & ~col_qr  # r > q > p
    if trans_p.any() and trans_r.any():
        raise UnresolvableError("transitivity contradicts unanimity")
    if trans_p.any():
        return np.ones(n, dtype=bool)
    if trans_r.any():
        return np.zeros(n, dtype=bool)
    # every agent ranks q first or last among {p,q,r}; two agents share a type
    return _cycle_resolve(oracle, p, q, r, col_pq, col_qr)


def _cycle_resolve(oracle: MajorityOracle, p, q, r, col_pq, col_qr):
    """Three-agent query of the extremal-q case.  Picks two agents x0, y0 of
    the same extremal type (their votes cancel) and a third agent z whose vote
    decides the unanimous direction on (p, r)."""
    n = oracle.n
    q_first = ~col_pq & col_qr
    q_last = col_pq & ~col_qr
    if q_first.sum() >= 2:
        x0, y0 = (int(a) for a in np.flatnonzero(q_first)[:2])
    elif q_last.sum() >= 2:
        x0, y0 = (int(a) for a in np.flatnonzero(q_last)[:2])
    else:
        raise UnresolvableError("no two agents share an extremal type")
    z = next(a for a in range(n) if a not in (x0, y0))
    mu = _filler_assignment(n, {x0: q, y0: p, z: r})
    lam = tuple({q: r, p: q, r: p}.get(h, h) for h in mu)
    v = oracle.query(mu, lam)
    if v is Verdict.TIE:
        raise UnresolvableError("three-agent query tied")
    # FIRST_WINS: z prefers r to p, hence (all agree) r > p everywhere
    prefers_p = v is Verdict.SECOND_WINS
    return np.full(n, prefers_p, dtype=bool)


def cycle_type(oracle: MajorityOracle, p, q, r, agents=(0, 1, 2)) -> int:
    """Cyclic orientation of three houses on which the named agents share the
    same restricted order: +1 for the p->q->r cycle, -1 for p->r->q."""
    x, y, z = agents
    mu = _filler_assignment(oracle.n, {x: p, y: q, z: r})
    lam = tuple({p: q, q: r, r: p}.get(h, h) for h in mu)
    v = oracle.query(mu, lam)
    if v is Verdict.FIRST_WINS:
        return 1
    if v is Verdict.SECOND_WINS:
        return -1
    raise UnresolvableError("cycle-type query tied")


@dataclass(frozen=True)
class RotationClass:
    """All profiles inducing one majority graph.

    ``base`` is one member; ``blocks`` its ordered house decomposition;
    ``shifts`` the admissible cyclic shifts (always the full set {0..k-1}).
    """

    base: Profile
    blocks: tuple
    shifts: tuple

    def profile(self, shift: int) -> Profile:
        k = len(self.blocks)
        order = [self.blocks[(i + shift) % k] for i in range(k)]
        n = self.base.n
        rows = np.empty((n, n), dtype=np.int64)
        for x in range(n):
            pos = {h: j for j, h in enumerate(self.base.orders[x])}
            row = []
            for block in order:
                row.extend(sorted(block, key=pos.get))
            rows[x] = row
        return Profile(rows, self.base.labels)

    def profiles(self):
        return [self.profile(s) for s in self.shifts]

    def __len__(self):
        return len(self.shifts)

    def __contains__(self, profile):
        return any(profile == member for member in self.profiles())


def _union_find_components(n, edges):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for p, q in edges:
        parent[find(p)] = find(q)
    comps = {}
    for h in range(n):
        comps.setdefault(find(h), []).append(h)
    return [tuple(sorted(c)) for c in comps.values()]


def _order_from_columns(n_houses, houses, prefers, agent):
    """One agent's linear order over ``houses`` from pairwise directions."""
    wins = {h: 0 for h in houses}
    for p, q in itertools.combinations(houses, 2):
        if prefers[(p, q)][agent]:
            wins[p] += 1
        else:
            wins[q] += 1
    ordered = sorted(houses, key=lambda h: -wins[h])
    if sorted(wins.values()) != list(range(len(houses))):
        raise UnresolvableError("pairwise directions are not a linear order")
    return ordered


def _reconstruct_small(oracle: MajorityOracle, n) -> RotationClass:
    """n <= 2: search all profiles directly against the oracle's verdicts."""
    if n == 1:
        base = Profile(np.array([[0]]))
        return RotationClass(base, ((0,),), (0,))
    v = oracle.query((0, 1), (1, 0))
    if v is Verdict.TIE:
        base = Profile(np.array([[0, 1], [0, 1]]))
        return RotationClass(base, ((0,), (1,)), (0, 1))
    if v is Verdict.FIRST_WINS:
        base = Profile(np.array([[0, 1], [1, 0]]))
    else:
        base = Profile(np.array([[1, 0], [0, 1]]))
    return RotationClass(base, ((0, 1),), (0,))


def component_decomposition(oracle: MajorityOracle, n):
    """Blocks of houses on which some agents disagree, with all in-block
    pairwise directions fully resolved.

    Returns (blocks, prefers) where ``prefers[(p, q)]`` for p < q is the
    per-agent direction column, or None when the pair is unanimous (possible
    only across blocks after closure).
    """
    # 1. pairwise columns for every house pair; None = unanimous, unknown way
    prefers = {}
    for p, q in itertools.combinations(range(n), 2):
        prefers[(p, q)] = infer_pair_column(oracle, p, q)

    # 2. blocks = connected components of the disagreement graph
    edges = [e for e, col in prefers.items() if col is not None]
    blocks = _union_find_components(n, edges)

    # 3. close the in-block knowledge: unresolved in-block pairs follow from
    # two known pairs by transitivity or one three-agent query
    changed = True
    while changed:
        changed = False
        for block in blocks:
            if len(block) < 3:
                continue
            for p, r in itertools.combinations(block, 2):
                if prefers[(p, r)] is not None:
                    continue
                for q in block:
                    if q in (p, r):
                        continue
                    if _column(prefers, p, q) is None or _column(prefers, q, r) is None:
                        continue
                    prefers[(p, r)] = resolve_within_component(oracle, prefers, p, q, r)
                    changed = True
                    break
    for block in blocks:
        for p, r in itertools.combinations(block, 2):
            if prefers[(p, r)] is None:
                raise UnresolvableError("disagreement block could not be ordered")
    return blocks, prefers


def reconstruct(oracle: MajorityOracle, n) -> RotationClass:
    """Recover the rotation class behind a majority oracle.

    Raises UnresolvableError when the oracle is not induced by any profile
    (detected by contradiction during inference or by the final replay of all
    logged queries against the reconstructed base profile).
    """
    if n <= 2:
        return _reconstruct_small(oracle, n)

    blocks, prefers = component_decomposition(oracle, n)

    # cyclic order of the blocks via three-house orientation queries
    blocks = _cyclic_block_order(oracle, blocks)

    # 5. assemble the base profile: every agent ranks the blocks in the same
    # (arbitrary rotation of the) cyclic order, each block internally ordered
    # by the recovered pairwise directions
    rows = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        row = []
        for block in blocks:
            row.extend(_order_from_columns(n, block, _pair_table(prefers, block), x))
        rows[x] = row
    try:
        base = Profile(rows)
    except ValueError as exc:
        raise UnresolvableError(str(exc)) from None

    # 6. replay every logged query against the base profile
    for mu, lam, v in oracle.log:
        if compare(base, mu, lam).verdict is not v:
            raise UnresolvableError("base profile contradicts a logged verdict")

    return RotationClass(base, tuple(blocks), tuple(range(len(blocks))))


def _column(prefers, p, q):
    """Direction column for ordered pair (p, q): True = prefers p."""
    if p < q:
        return prefers[(p, q)]
    col = prefers[(q, p)]
    return None if col is None else ~col


def _pair_table(prefers, block):
    return {
        (p, q): _column(prefers, p, q) for p, q in itertools.combinations(block, 2)
    }


def _cyclic_block_order(oracle, blocks):
    """Order blocks into the cyclic sequence all agents share, by inserting
    one block at a time at the unique orientation-consistent position."""
    if len(blocks) <= 2:
        return list(blocks)
    reps = [b[0] for b in blocks]
    order = [0, 1]
    for c in range(2, len(blocks)):
        placed = False
        for pos in range(len(order)):
            a = order[pos]
            b = order[(pos + 1) % len(order)]
            if cycle_type(oracle, reps[a], reps[c], reps[b]) == 1:
                order.insert(pos + 1, c)
                placed = True
                break
        if not placed:
            raise UnresolvableError("block orientations admit no cyclic order")
    return [blocks[i] for i in order]


def _disagreement_blocks(profile: Profile):
    n = profile.n
    edges = []
    for p, q in itertools.combinations(range(n), 2):
        col = profile.ranks[:, p] < profile.ranks[:, q]
        if col.any() and not col.all():
            edges.append((p, q))
    return _union_find_components(n, edges)


def rotation_equivalent(p1: Profile, p2: Profile) -> bool:
    """Structural test: same disagreement blocks, identical in-block orders,
    and block sequences differing by a cyclic shift."""
    if p1.n != p2.n:
        return False
    n = p1.n
    blocks = _disagreement_blocks(p1)
    if _disagreement_blocks(p2) != blocks:
        return False
    block_of = {}
    for i, b in enumerate(blocks):
        for h in b:
            block_of[h] = i
    for x in range(n):
        r1 = [h for h in p1.orders[x]]
        r2 = [h for h in p2.orders[x]]
        for b in blocks:
            if [h for h in r1 if h in b] != [h for h in r2 if h in b]:
                return False
    seq1 = _block_sequence(p1, block_of, len(blocks))
    seq2 = _block_sequence(p2, block_of, len(blocks))
    if seq1 is None or seq2 is None:
        return False
    k = len(blocks)
    return any(all(seq1[(i + r) % k] == seq2[i] for i in range(k)) for r in range(k))


def _block_sequence(profile: Profile, block_of, k):
    """Block order as seen by agent 1; None when blocks are not contiguous
    (then the partition is no valid decomposition of this profile)."""
    seq = []
    for h in profile.orders[0]:
        b = block_of[h]
        if not seq or seq[-1] != b:
            if b in seq:
                return None
            seq.append(b)
    return seq if len(seq) == k else None


def infer_margins(rc: RotationClass):
    """Margin function of the class; identical for every member by the
    rotation invariance of the majority graph (asserted on all shifts)."""
    members = rc.profiles()

    def margin(mu, lam) -> int:
        vals = {compare(member, mu, lam).margin for member in members}
        if len(vals) != 1:
            raise AssertionError("margins differ across rotation class members")
        return vals.pop()

    return margin
