"""Domain model for house allocation under strict preferences.

Agents and houses are dense integer indices 0..n-1.  Houses additionally
carry short lowercase string labels (defaulting to 'a', 'b', 'c', ...);
agents are displayed 1-based.  An assignment is a bijection from agents to
houses, represented as a tuple ``to_house`` where ``to_house[x]`` is the
house of agent ``x``.  The universe of all n! assignments is indexed by
Lehmer codes so that index 0 is the lexicographically smallest permutation.
"""

from __future__ import annotations

import itertools
import math
import string
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ProfileFormatError",
    "UniverseTooLargeError",
    "PreferenceOrder",
    "Profile",
    "AssignmentIndexer",
    "default_labels",
    "parse_profile",
    "parse_assignment",
    "format_assignment",
    "invert_profile",
    "restrict_profile",
    "canonical_form",
    "rank",
]

BRUTE_LIMIT_DEFAULT = 7
BRUTE_LIMIT_HARD_CAP = 8


class ProfileFormatError(ValueError):
    """Raised when a profile file or assignment literal is malformed."""


class UniverseTooLargeError(ValueError):
    """Raised when an operation would materialize more than brute_limit! assignments."""


def default_labels(n):
    """Labels 'a', 'b', ..., then 'h1', 'h2', ... past 26 houses."""
    if n <= 26:
        return tuple(string.ascii_lowercase[:n])
    return tuple(string.ascii_lowercase) + tuple(f"h{i}" for i in range(1, n - 25))


@dataclass(frozen=True)
class PreferenceOrder:
    """A strict linear order over houses; ``ranking`` is most-preferred first."""

    ranking: tuple
    rank_of: tuple  # rank_of[h] in 1..n

    @classmethod
    def from_ranking(cls, ranking):
        ranking = tuple(int(h) for h in ranking)
        n = len(ranking)
        if sorted(ranking) != list(range(n)):
            raise ProfileFormatError(f"ranking {ranking} is not a permutation of 0..{n - 1}")
        rank_of = [0] * n
        for pos, h in enumerate(ranking):
            rank_of[h] = pos + 1
        return cls(ranking, tuple(rank_of))

    @property
    def n(self):
        return len(self.ranking)


def rank(order: PreferenceOrder, house: int) -> int:
    """1-based rank of ``house`` in ``order`` (1 = top choice)."""
    return order.rank_of[house]


class Profile:
    """A preference profile: one strict order per agent over a common house set.

    Internally stores two (n, n) integer arrays:
      * ``orders[x, j]``  = house ranked (j+1)-th by agent x
      * ``ranks[x, h]``   = 1-based rank of house h for agent x
    Both arrays are read-only; profiles are immutable and safe to share
    across parallel workers.
    """

    __slots__ = ("n", "orders", "ranks", "labels")

    def __init__(self, orders, labels=None):
        orders = np.asarray(orders, dtype=np.int64)
        if orders.ndim != 2 or orders.shape[0] != orders.shape[1]:
            raise ProfileFormatError(
                f"need as many agents as houses, got shape {orders.shape}"
            )
        n = orders.shape[0]
        if n < 1:
            raise ProfileFormatError("a profile needs at least one agent")
        target = np.arange(n)
        ranks = np.empty((n, n), dtype=np.int64)
        for x in range(n):
            row = orders[x]
            if not np.array_equal(np.sort(row), target):
                raise ProfileFormatError(
                    f"agent {x + 1} ranking is not a permutation of the house set"
                )
            ranks[x, row] = target + 1
        orders.setflags(write=False)
        ranks.setflags(write=False)
        self.n = n
        self.orders = orders
        self.ranks = ranks
        self.labels = tuple(labels) if labels is not None else default_labels(n)
        if len(self.labels) != n:
            raise ProfileFormatError("label table size does not match n")

    def preference(self, agent: int) -> PreferenceOrder:
        return PreferenceOrder.from_ranking(self.orders[agent])

    def __eq__(self, other):
        return (
            isinstance(other, Profile)
            and self.n == other.n
            and np.array_equal(self.orders, other.orders)
        )

    def __hash__(self):
        return hash((self.n, self.orders.tobytes()))

    def __repr__(self):
        rows = "; ".join(
            f"{x + 1}: " + ",".join(self.labels[h] for h in self.orders[x])
            for x in range(self.n)
        )
        return f"Profile({rows})"

    def to_text(self):
        lines = [str(self.n)]
        for x in range(self.n):
            lines.append(" ".join(self.labels[h] for h in self.orders[x]))
        return "\n".join(lines) + "\n"


def parse_profile(text: str) -> Profile:
    """Parse the profile file format.

    Line 1 is the integer n; each of the next n lines lists n space-separated
    house labels, most-preferred first.  Lines starting with '#' are ignored.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ProfileFormatError("empty profile file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ProfileFormatError(f"first line must be the agent count, got {lines[0]!r}")
    if n < 1:
        raise ProfileFormatError(f"n must be >= 1, got {n}")
    if len(lines) != n + 1:
        raise ProfileFormatError(f"expected {n} preference lines, found {len(lines) - 1}")
    rows = [ln.split() for ln in lines[1:]]
    label_set = set(rows[0])
    if len(rows[0]) != n or len(label_set) != n:
        raise ProfileFormatError(f"agent 1 must rank {n} distinct houses")
    labels = tuple(sorted(label_set))
    index_of = {lab: i for i, lab in enumerate(labels)}
    orders = np.empty((n, n), dtype=np.int64)
    for x, row in enumerate(rows):
        if len(row) != n:
            raise ProfileFormatError(f"agent {x + 1} ranks {len(row)} houses, expected {n}")
        if len(set(row)) != n:
            raise ProfileFormatError(f"agent {x + 1} lists a duplicate house")
        try:
            orders[x] = [index_of[lab] for lab in row]
        except KeyError as exc:
            raise ProfileFormatError(
                f"agent {x + 1} ranks unknown house {exc.args[0]!r}"
            ) from None
    return Profile(orders, labels)


def parse_assignment(literal: str, labels) -> tuple:
    """Parse the "c,a,b" assignment literal (agent order)."""
    index_of = {lab: i for i, lab in enumerate(labels)}
    parts = [p.strip() for p in literal.split(",")]
    if len(parts) != len(labels):
        raise ProfileFormatError(
            f"assignment lists {len(parts)} houses, expected {len(labels)}"
        )
    try:
        to_house = tuple(index_of[p] for p in parts)
    except KeyError as exc:
        raise ProfileFormatError(f"unknown house label {exc.args[0]!r}") from None
    if len(set(to_house)) != len(labels):
        raise ProfileFormatError("assignment repeats a house")
    return to_house


def format_assignment(assignment, labels) -> str:
    return "(" + ",".join(labels[h] for h in assignment) + ")"


class AssignmentIndexer:
    """Bijection between assignments and integers 0..n!-1 via Lehmer codes.

    The index is strictly monotone in the lexicographic order of ``to_house``,
    so index 0 is the identity assignment.  ``all_assignments`` materializes
    the universe as an (n!, n) array and is only permitted for small n.
    """

    def __init__(self, n):
        self.n = n
        self.size = math.factorial(n)
        self._fact = [math.factorial(i) for i in range(n)]

    def index(self, assignment) -> int:
        n = self.n
        if len(assignment) != n:
            raise ValueError(f"assignment length {len(assignment)} != n={n}")
        code = 0
        seen = 0
        for i, h in enumerate(assignment):
            smaller = h - bin(seen & ((1 << h) - 1)).count("1")
            code += smaller * self._fact[n - 1 - i]
            seen |= 1 << h
        return code

    def unindex(self, code: int) -> tuple:
        if not 0 <= code < self.size:
            raise ValueError(f"index {code} out of range for n={self.n}")
        avail = list(range(self.n))
        out = []
        for i in range(self.n):
            f = self._fact[self.n - 1 - i]
            j, code = divmod(code, f)
            out.append(avail.pop(j))
        return tuple(out)

    def all_assignments(self, brute_limit=BRUTE_LIMIT_DEFAULT) -> np.ndarray:
        check_brute_limit(self.n, brute_limit)
        perms = np.array(list(itertools.permutations(range(self.n))), dtype=np.int64)
        perms.setflags(write=False)
        return perms


def check_brute_limit(n, brute_limit=BRUTE_LIMIT_DEFAULT):
    limit = min(int(brute_limit), BRUTE_LIMIT_HARD_CAP)
    if n > limit:
        raise UniverseTooLargeError(
            f"n={n} exceeds brute-force limit {limit} ({math.factorial(n)} assignments)"
        )


def invert_profile(profile: Profile) -> Profile:
    """Reverse every agent's ranking.  Involution."""
    return Profile(profile.orders[:, ::-1], profile.labels)


def restrict_profile(profile: Profile, agents, houses) -> Profile:
    """Restrict to the given agents and houses, preserving relative orders.

    Indices are re-densified; kept agents appear in ascending original index
    and kept houses keep their original labels.
    """
    agents = sorted(set(int(a) for a in agents))
    houses = sorted(set(int(h) for h in houses))
    if len(agents) != len(houses):
        raise ValueError(f"|agents|={len(agents)} != |houses|={len(houses)}")
    if not agents:
        raise ValueError("restriction must keep at least one agent")
    if agents[0] < 0 or agents[-1] >= profile.n:
        raise ValueError("unknown agent in restriction")
    if houses[0] < 0 or houses[-1] >= profile.n:
        raise ValueError("unknown house in restriction")
    keep = np.zeros(profile.n, dtype=bool)
    keep[houses] = True
    new_house = {h: i for i, h in enumerate(houses)}
    orders = np.empty((len(agents), len(agents)), dtype=np.int64)
    for i, x in enumerate(agents):
        row = profile.orders[x]
        orders[i] = [new_house[h] for h in row if keep[h]]
    labels = tuple(profile.labels[h] for h in houses)
    return Profile(orders, labels)


def canonical_form(profile: Profile) -> Profile:
    """Canonical representative under the fixed symmetry scheme.

    Houses are relabeled so agent 1's ranking becomes 0,1,...,n-1 and agents
    2..n are sorted lexicographically by their relabeled rankings.  Idempotent;
    invariant under house relabelings and permutations of agents 2..n.  The
    output carries default labels.
    """
    n = profile.n
    relabel = np.empty(n, dtype=np.int64)
    relabel[profile.orders[0]] = np.arange(n)
    mapped = relabel[profile.orders]
    rest = sorted(map(tuple, mapped[1:]))
    orders = np.vstack([np.arange(n)[None, :], np.array(rest, dtype=np.int64).reshape(n - 1, n)]) if n > 1 else np.arange(1)[None, :]
    return Profile(orders, default_labels(n))
