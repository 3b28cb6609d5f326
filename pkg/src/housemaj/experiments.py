"""Exhaustive canonical enumeration, random sampling, and census pipelines.

The canonical scheme fixes agent 1 to the identity order and lists the
remaining agents' orders as a nondecreasing multiset of universe indices, so
each equivalence class under house relabeling plus permutation of agents
2..n appears exactly once.  Every census works from exact integer counts and
renders percentages with seven decimals only at the output boundary.
"""

from __future__ import annotations

import math
import multiprocessing
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import AssignmentIndexer, Profile
from .covering import BORDES, GILLIES, MCKELVEY, VARIANTS

__all__ = [
    "canonical_count",
    "unrank_canonical",
    "enumerate_canonical",
    "sample_canonical",
    "sample_impartial",
    "fmt7",
    "ProfileStats",
    "profile_stats",
    "profile_stats_large",
    "uncovered_sets_large",
    "census_impartial_large",
    "Census",
    "run_census",
    "census_canonical",
    "census_canonical_range",
    "verify_fact_n5",
    "tc_size_census",
]

CURVES = VARIANTS + ("po",)


def canonical_count(n: int) -> int:
    """Number of canonical profiles: multisets of n-1 orders out of n!."""
    return math.comb(math.factorial(n) + n - 2, n - 1)


def _unrank_multiset(options: int, k: int, idx: int):
    """idx-th nondecreasing k-tuple over 0..options-1 in lexicographic order,
    via the combinatorial number system on the strictly-increasing image."""
    m = options + k - 1
    out = []
    c = 0
    for i in range(k):
        while True:
            block = math.comb(m - c - 1, k - i - 1)
            if idx < block:
                break
            idx -= block
            c += 1
        out.append(c - i)
        c += 1
    return out


def unrank_canonical(n: int, idx: int) -> Profile:
    """The idx-th canonical profile in enumeration order."""
    total = canonical_count(n)
    if not 0 <= idx < total:
        raise ValueError(f"canonical index {idx} out of range [0, {total})")
    if n == 1:
        return Profile(np.array([[0]]))
    indexer = AssignmentIndexer(n)
    codes = _unrank_multiset(math.factorial(n), n - 1, idx)
    rows = np.empty((n, n), dtype=np.int64)
    rows[0] = np.arange(n)
    for j, code in enumerate(codes):
        rows[j + 1] = indexer.unindex(code)
    return Profile(rows)


def enumerate_canonical(n: int, start: int = 0, stop: int | None = None):
    """Stream canonical profiles for index range [start, stop)."""
    total = canonical_count(n)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    if n == 1:
        yield Profile(np.array([[0]]))
        return
    indexer = AssignmentIndexer(n)
    nfact = math.factorial(n)
    codes = _unrank_multiset(nfact, n - 1, start)
    identity = np.arange(n)
    cache = {}

    def order_of(code):
        if code not in cache:
            cache[code] = np.array(indexer.unindex(code), dtype=np.int64)
        return cache[code]

    for _ in range(start, stop):
        rows = np.empty((n, n), dtype=np.int64)
        rows[0] = identity
        for j, code in enumerate(codes):
            rows[j + 1] = order_of(code)
        yield Profile(rows)
        # lexicographic successor of the nondecreasing tuple
        j = n - 2
        while j >= 0 and codes[j] == nfact - 1:
            j -= 1
        if j < 0:
            break
        codes[j] += 1
        for i in range(j + 1, n - 1):
            codes[i] = codes[j]


def sample_canonical(n: int, seed, count: int):
    """Uniform sample (with replacement) from the canonical universe."""
    rng = np.random.default_rng(seed)
    total = canonical_count(n)
    return [unrank_canonical(n, int(i)) for i in rng.integers(0, total, size=count)]


def sample_impartial(n: int, seed, count: int):
    """Impartial culture: each agent's order uniform and independent."""
    rng = np.random.default_rng(seed)
    return [
        Profile(np.array([rng.permutation(n) for _ in range(n)]).reshape(n, n))
        for _ in range(count)
    ]


def fmt7(count: int, total: int) -> str:
    """Percentage 100*count/total rendered with exactly 7 decimals, computed
    in exact rational arithmetic."""
    scaled = Fraction(100 * count, total) * 10**7
    whole, frac = divmod(round(scaled), 10**7)
    return f"{whole}.{frac:07d}"


@dataclass(frozen=True)
class ProfileStats:
    """Per-profile census record (set sizes and structural facts)."""

    n: int
    uc: dict
    po: int
    pp: int
    tc: int
    bc: int
    fact_ok: bool


def _batch_ranks(orders_batch: np.ndarray, perms: np.ndarray) -> np.ndarray:
    """(B, m, n) rank tensor for a batch of profiles given as order arrays."""
    bsz, n, _ = orders_batch.shape
    ranks = np.empty((bsz, n, n), dtype=np.int8)
    ar = np.arange(n)
    for b in range(bsz):
        for x in range(n):
            ranks[b, x, orders_batch[b, x]] = ar + 1
    m = perms.shape[0]
    out = np.empty((bsz, m, n), dtype=np.int8)
    for x in range(n):
        out[:, :, x] = ranks[:, x, :][:, perms[:, x]]
    return out


_HAM_CACHE = {}
_SIGN_CACHE = {}


def _sign_tables(n: int):
    """Per-agent margin contribution tables, n <= 5 only.

    tables[x, o][i, j] is the sign contribution of agent x holding the o-th
    preference order to the margin of assignment i versus assignment j.  The
    full margin matrix of any profile is then the sum of n table slices,
    which makes exhaustive enumeration cheap.
    """
    if n not in _SIGN_CACHE:
        indexer = AssignmentIndexer(n)
        perms = indexer.all_assignments()
        m = perms.shape[0]
        fact = math.factorial(n)
        tables = np.empty((n, fact, m, m), dtype=np.int8)
        for o in range(fact):
            order = indexer.unindex(o)
            rank_of = np.empty(n, dtype=np.int8)
            for pos, h in enumerate(order):
                rank_of[h] = pos + 1
            for x in range(n):
                r = rank_of[perms[:, x]]
                tables[x, o] = np.sign(
                    r[None, :].astype(np.int8) - r[:, None].astype(np.int8)
                )
        _SIGN_CACHE[n] = tables
    return _SIGN_CACHE[n]


def _hamming_table(perms: np.ndarray) -> np.ndarray:
    """(m, m) count of agents whose houses differ between two assignments."""
    key = perms.shape
    if key not in _HAM_CACHE:
        ham = np.zeros((perms.shape[0], perms.shape[0]), dtype=np.int8)
        for x in range(perms.shape[1]):
            ham += perms[:, None, x] != perms[None, :, x]
        _HAM_CACHE[key] = ham
    return _HAM_CACHE[key]


def _layer_cuts(strict: np.ndarray):
    """Batched top/bottom strongly connected component sizes and the valid
    cut positions of the layer structure.

    The weak relation is complete, so its condensation is a chain of layers
    and strict-win counts strictly separate the layers.  After sorting each
    profile's vertices by wins, a cut position k is a layer boundary iff the
    top k all strictly beat the bottom m-k, i.e. iff the cut rectangle holds
    exactly k*(m-k) strict edges (checked via 2-d prefix sums).  The top
    component ends at the first boundary and the bottom one starts at the
    last, so one pass yields both.  Returns (tc_size, bc_size, valid, rank)
    where valid[b, k-1] marks boundary cuts after position k and rank[b, v]
    is the sorted position of vertex v.
    """
    bsz, m, _ = strict.shape
    score = strict.sum(axis=2, dtype=np.int16)
    order = np.argsort(-score, axis=1, kind="stable")
    rows = np.take_along_axis(strict, order[:, :, None], axis=1)
    sorted_s = np.take_along_axis(rows, order[:, None, :], axis=2)
    cs = sorted_s.astype(np.int32).cumsum(axis=1).cumsum(axis=2)
    ks = np.arange(1, m)
    in_rect = cs[:, ks - 1, m - 1] - cs[:, ks - 1, ks - 1]
    valid = in_rect == (ks * (m - ks))[None, :]
    any_cut = valid.any(axis=1)
    first = np.argmax(valid, axis=1)
    last = m - 2 - np.argmax(valid[:, ::-1], axis=1)
    tc_size = np.where(any_cut, first + 1, m)
    bc_size = np.where(any_cut, m - (last + 1), m)
    rank = np.argsort(order, axis=1)
    return tc_size, bc_size, valid, rank


def _batch_stats(orders_batch: np.ndarray, perms: np.ndarray, want_fact: bool):
    """Vectorized census quantities for a batch of profiles.

    Returns dict of arrays: uncovered-set sizes per variant, |PO|, |PP|,
    |TC|, |BC|, and the structural-fact verdict per profile.
    """
    bsz, n, _ = orders_batch.shape
    m = perms.shape[0]
    if m == 1:
        one = np.ones(bsz, dtype=np.int64)
        return {
            "uc": {v: one for v in VARIANTS},
            "po": one, "pp": one, "tc": one, "bc": one,
            "fact_ok": np.ones(bsz, dtype=bool),
        }
    if n <= 5:
        indexer = AssignmentIndexer(n)
        codes = np.array(
            [[indexer.index(orders_batch[b, x]) for x in range(n)] for b in range(bsz)]
        )
        margin = _margin_from_codes(n, codes)
    else:
        R = _batch_ranks(orders_batch, perms)
        diff = R[:, None, :, :].astype(np.int8) - R[:, :, None, :].astype(np.int8)
        margin = np.sign(diff).sum(axis=3, dtype=np.int8)
        del diff
    return _stats_from_margin(margin, perms, want_fact)


def _margin_from_codes(n: int, codes: np.ndarray) -> np.ndarray:
    """Batched (B, m, m) margin matrices from per-agent order codes, n <= 5."""
    tables = _sign_tables(n)
    margin = tables[0][codes[:, 0]].copy()
    for x in range(1, n):
        margin += tables[x][codes[:, x]]
    return margin


def _stats_from_margin(margin: np.ndarray, perms: np.ndarray, want_fact: bool):
    bsz, m, _ = margin.shape
    strict = margin > 0
    weak = margin >= 0
    # i Pareto-dominates j iff every differing agent prefers i's house, i.e.
    # the majority margin equals the (profile-independent) count of agents
    # whose houses differ between the two assignments
    ham = _hamming_table(perms)
    dom = (margin == ham) & (ham > 0)
    po_mask = ~dom.any(axis=1)
    pp_mask = ~dom.any(axis=2)

    wf = weak.astype(np.float32)
    sf = strict.astype(np.float32)
    sw = (sf @ wf) > 0.5
    ws = (wf @ sf) > 0.5
    uc = {
        BORDES: (weak | sw).all(axis=2).sum(axis=1),
        GILLIES: (weak | ws).all(axis=2).sum(axis=1),
        MCKELVEY: (weak | sw | ws).all(axis=2).sum(axis=1),
    }

    tc_size, bc_size, valid, rank = _layer_cuts(strict)
    fact_ok = np.ones(bsz, dtype=bool)
    if want_fact:
        tc_mask = rank < tc_size[:, None]
        bc_mask = rank >= (m - bc_size)[:, None]
        fact_ok &= (tc_size > 2) == (pp_mask | tc_mask).all(axis=1)
        fact_ok &= (bc_size > 2) == (po_mask | bc_mask).all(axis=1)
        fact_ok &= ((tc_size > 2) & (bc_size > 2)) == (tc_size == m)
        small = (tc_size <= 2) & (bc_size <= 2)
        if small.any():
            # middle is one layer iff no boundary cut strictly inside it
            ks = np.arange(1, m)[None, :]
            inner = valid & (ks > tc_size[:, None]) & (ks < (m - bc_size)[:, None])
            fact_ok &= ~small | ~inner.any(axis=1)
    return {
        "uc": uc,
        "po": po_mask.sum(axis=1),
        "pp": pp_mask.sum(axis=1),
        "tc": tc_size,
        "bc": bc_size,
        "fact_ok": fact_ok,
    }


def profile_stats(profile: Profile, perms=None, want_fact=False) -> ProfileStats:
    n = profile.n
    if perms is None:
        perms = AssignmentIndexer(n).all_assignments()
    batch = _batch_stats(profile.orders[None, :, :], perms, want_fact)
    return ProfileStats(
        n=n,
        uc={v: int(batch["uc"][v][0]) for v in VARIANTS},
        po=int(batch["po"][0]),
        pp=int(batch["pp"][0]),
        tc=int(batch["tc"][0]),
        bc=int(batch["bc"][0]),
        fact_ok=bool(batch["fact_ok"][0]),
    )


def _large_margin(profile: Profile, perms: np.ndarray) -> np.ndarray:
    """Full margin matrix built agent by agent; fast for single big profiles."""
    from .majority import universe_ranks

    ranks_of = universe_ranks(profile, perms)
    m = perms.shape[0]
    margin = np.zeros((m, m), dtype=np.int8)
    for x in range(profile.n):
        r = ranks_of[:, x].astype(np.int8)
        margin += np.sign(r[None, :] - r[:, None])
    return margin


def _large_uc_masks(margin: np.ndarray, ham: np.ndarray):
    """(po, pp, cand, masks): Pareto masks and per-variant uncovered masks
    over the Pareto-optimal candidate rows (the uncovered sets are subsets of
    the Pareto set, so this restriction is lossless)."""
    dom = (margin == ham) & (ham > 0)
    po = ~dom.any(axis=0)
    pp = ~dom.any(axis=1)
    strict = margin > 0
    weak = margin >= 0
    cand = np.flatnonzero(po)
    wf = weak.astype(np.float32)
    sf = strict.astype(np.float32)
    sw = (sf[cand] @ wf) > 0.5
    ws = (wf[cand] @ sf) > 0.5
    wc = weak[cand]
    masks = {
        BORDES: (wc | sw).all(axis=1),
        GILLIES: (wc | ws).all(axis=1),
        MCKELVEY: (wc | sw | ws).all(axis=1),
    }
    return po, pp, cand, masks


def profile_stats_large(profile: Profile, perms=None) -> ProfileStats:
    """Census record for a single profile too big for the batched path
    (n = 6 or 7); top/bottom cycle sizes are skipped (reported as 0)."""
    n = profile.n
    if perms is None:
        perms = AssignmentIndexer(n).all_assignments(n)
    margin = _large_margin(profile, perms)
    po, pp, _, masks = _large_uc_masks(margin, _hamming_table(perms))
    return ProfileStats(
        n=n,
        uc={v: int(masks[v].sum()) for v in VARIANTS},
        po=int(po.sum()),
        pp=int(pp.sum()),
        tc=0,
        bc=0,
        fact_ok=True,
    )


def uncovered_sets_large(profile: Profile, perms=None):
    """Exact uncovered sets per variant for a single big profile, as sets of
    assignment tuples."""
    n = profile.n
    if perms is None:
        perms = AssignmentIndexer(n).all_assignments(n)
    margin = _large_margin(profile, perms)
    _, _, cand, masks = _large_uc_masks(margin, _hamming_table(perms))
    return {
        v: {
            tuple(int(h) for h in perms[i])
            for i in cand[np.flatnonzero(masks[v])]
        }
        for v in VARIANTS
    }


def census_impartial_large(n: int, seed, count: int) -> "Census":
    """Uncovered/Pareto size census over impartial-culture samples for big n
    (one profile at a time; no cycle sizes)."""
    perms = AssignmentIndexer(n).all_assignments(n)
    census = Census(n)
    for profile in sample_impartial(n, seed, count):
        census.add(profile_stats_large(profile, perms))
    return census


@dataclass
class Census:
    """Accumulated tallies: set-size histograms per curve and the cumulative
    distribution material for the uncovered-to-Pareto ratio."""

    n: int
    profiles: int = 0
    sizes: dict = field(default_factory=lambda: {c: Counter() for c in CURVES})
    ratio_buckets: dict = field(default_factory=lambda: {v: Counter() for v in VARIANTS})
    tc_sizes: Counter = field(default_factory=Counter)
    fact_violations: int = 0

    def add(self, stats: ProfileStats):
        self.profiles += 1
        self.sizes["po"][stats.po] += 1
        for v in VARIANTS:
            self.sizes[v][stats.uc[v]] += 1
            # ratio |UC|/|PO| as an integer-percent ceiling bucket
            bucket = -((-100 * stats.uc[v]) // stats.po)
            self.ratio_buckets[v][bucket] += 1
        if stats.tc:
            self.tc_sizes[stats.tc] += 1
        if not stats.fact_ok:
            self.fact_violations += 1

    def add_batch(self, batch: dict):
        po = batch["po"]
        self.profiles += po.shape[0]
        self.sizes["po"].update(po.tolist())
        for v in VARIANTS:
            uc = batch["uc"][v]
            self.sizes[v].update(uc.tolist())
            buckets = -((-100 * uc.astype(np.int64)) // po)
            self.ratio_buckets[v].update(buckets.tolist())
        self.tc_sizes.update(batch["tc"].tolist())
        self.fact_violations += int((~batch["fact_ok"]).sum())

    def merge(self, other: "Census"):
        self.profiles += other.profiles
        for c in CURVES:
            self.sizes[c].update(other.sizes[c])
        for v in VARIANTS:
            self.ratio_buckets[v].update(other.ratio_buckets[v])
        self.tc_sizes.update(other.tc_sizes)
        self.fact_violations += other.fact_violations

    def histogram_rows(self, curve: str):
        """(cardinality, count, percentage) rows in ascending cardinality."""
        counter = self.sizes[curve]
        return [
            (size, counter[size], fmt7(counter[size], self.profiles))
            for size in sorted(counter)
        ]

    def percentage(self, curve: str, size: int) -> float:
        return float(fmt7(self.sizes[curve][size], self.profiles))

    def cdf_rows(self, variant: str):
        """(ratio_percent, cumulative_percentage) for percent 0..100."""
        counter = self.ratio_buckets[variant]
        rows = []
        acc = 0
        for pct in range(0, 101):
            acc += counter[pct]
            rows.append((pct, fmt7(acc, self.profiles)))
        return rows

    def cdf_percentage(self, variant: str, pct: int) -> float:
        acc = sum(c for b, c in self.ratio_buckets[variant].items() if b <= pct)
        return float(fmt7(acc, self.profiles))


BATCH = 256


def _census_worker(args):
    orders_list, n, want_fact = args
    perms = AssignmentIndexer(n).all_assignments()
    census = Census(n)
    stacked = np.asarray(orders_list)
    for lo in range(0, stacked.shape[0], BATCH):
        batch = _batch_stats(stacked[lo : lo + BATCH], perms, want_fact)
        census.add_batch(batch)
    return census


def run_census(profiles, jobs: int = 1, want_fact: bool = False) -> Census:
    """Census over an iterable of profiles, optionally multiprocessing.

    Work is split deterministically, so the result is independent of the
    worker count.
    """
    profiles = list(profiles)
    if not profiles:
        raise ValueError("census needs at least one profile")
    n = profiles[0].n
    orders = [p.orders for p in profiles]
    if jobs <= 1 or len(profiles) < 64:
        return _census_worker((orders, n, want_fact))
    chunk = max(1, (len(orders) + jobs * 8 - 1) // (jobs * 8))
    batches = [
        (orders[i : i + chunk], n, want_fact) for i in range(0, len(orders), chunk)
    ]
    census = Census(n)
    with multiprocessing.Pool(jobs) as pool:
        for part in pool.imap_unordered(_census_worker, batches):
            census.merge(part)
    return census


def _range_worker(args):
    n, start, stop, want_fact = args
    return census_canonical_range(n, start, stop, want_fact=want_fact)


def census_canonical_range(
    n: int, start: int = 0, stop: int | None = None, want_fact: bool = False
) -> Census:
    """Census over canonical profiles with indices [start, stop).

    For n <= 5 this streams per-agent order codes straight into the
    precomputed margin tables, skipping profile construction; larger n fall
    back to the generic batch path.
    """
    total = canonical_count(n)
    stop = total if stop is None else min(stop, total)
    census = Census(n)
    if start >= stop:
        return census
    if n > 5:
        return run_census(
            enumerate_canonical(n, start, stop), want_fact=want_fact
        )
    perms = AssignmentIndexer(n).all_assignments()
    nfact = math.factorial(n)
    codes = _unrank_multiset(nfact, n - 1, start)
    buf = np.zeros((BATCH, n), dtype=np.int64)
    remaining = stop - start
    while remaining > 0:
        b = min(BATCH, remaining)
        for i in range(b):
            buf[i, 1:] = codes
            j = n - 2
            while j >= 0 and codes[j] == nfact - 1:
                j -= 1
            if j >= 0:
                codes[j] += 1
                for t in range(j + 1, n - 1):
                    codes[t] = codes[j]
        margin = _margin_from_codes(n, buf[:b])
        census.add_batch(_stats_from_margin(margin, perms, want_fact))
        remaining -= b
    return census


def census_canonical(n: int, jobs: int = 1, want_fact: bool = False) -> Census:
    """Census over the entire canonical universe for n agents."""
    total = canonical_count(n)
    if jobs <= 1 or total < 4 * BATCH:
        return census_canonical_range(n, 0, total, want_fact=want_fact)
    step = (total + jobs * 4 - 1) // (jobs * 4)
    tasks = [(n, lo, min(lo + step, total), want_fact) for lo in range(0, total, step)]
    census = Census(n)
    with multiprocessing.Pool(jobs) as pool:
        for part in pool.imap_unordered(_range_worker, tasks):
            census.merge(part)
    return census


def verify_fact_n5(profiles, jobs: int = 1) -> int:
    """Number of profiles violating any of the four structural equivalences
    relating top/bottom cycle with Pareto-optimal/pessimal sets (n = 5)."""
    census = run_census(profiles, jobs=jobs, want_fact=True)
    return census.fact_violations


def tc_size_census(profiles, jobs: int = 1):
    """Observed top-cycle sizes with counts."""
    census = run_census(profiles, jobs=jobs)
    return dict(census.tc_sizes)
