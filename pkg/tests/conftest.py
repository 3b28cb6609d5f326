import os

import numpy as np
import pytest

from housemaj.core import Profile, parse_profile

LONG_MODE = os.environ.get("HOUSEMAJ_LONG", "") == "1"


def random_profile(rng, n):
    return Profile(np.array([rng.permutation(n) for _ in range(n)]).reshape(n, n))


def profile_from_rows(text):
    """Profile from a plain block of ranking rows (labels inferred)."""
    rows = [ln for ln in text.strip().splitlines()]
    return parse_profile(f"{len(rows)}\n" + "\n".join(rows) + "\n")


# the three-agent profile where (c,a,b) covers the Pareto-optimal (a,b,c)
COVER_3 = """
a c b
a b c
b a c
"""

# unanimous three-agent profile (everyone ranks a > b > c)
UNANIMOUS_3 = """
a b c
a b c
a b c
"""

# three-agent profile whose top cycle misses exactly (b,c,a) and (c,b,a)
# although all bottom choices are distinct
TC4_3 = """
a b c
a c b
c b a
"""

# the two four-agent profiles with top cycle of size 21 = 4! - 3
TC21_A = """
a b c d
a b d c
c d a b
c d b a
"""

TC21_B = """
a b c d
a b d c
d c a b
d c b a
"""

# six-agent pair: rotation equivalent by blocks {a,b,c}, {d,e,f};
# (a,c,b,d,e,f) is rank-maximal in the first but not the second
RM_P = """
a b c d e f
a c b d f e
b a c e d f
a b c d e f
a b c d e f
a b c d e f
"""

RM_P2 = """
d e f a b c
d f e a c b
e d f b a c
d e f a b c
d e f a b c
d e f a b c
"""

# seven-agent profile whose only uncovered assignments are
# (c,b,d,g,e,a,f) and (c,b,g,d,e,a,f), neither of which is generous
GENEROUS_7 = """
c f a e b g d
b c g e a d f
g f a d e c b
g b e c a f d
e d a b c f g
a b d g f e c
f b d e c a g
"""

# seven-agent profile with a full top cycle containing the poor assignment
# (g,c,f,e,d,b,a), which reaches a serial dictatorship in four steps
POOR_TC_7 = """
f b d e c a g
d f g a b e c
d a c g e b f
a d b f g e c
c g e b f d a
f a e d g c b
c d e b g f a
"""


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    rows = {}
    for outcome in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if outcome == "passed" and rep.when != "call":
                continue
            rows.setdefault(name, outcome.upper().replace("ERROR", "FAIL"))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name in sorted(rows):
            terminalreporter.write_line(f"{rows[name]:8s} {name}")
