"""Command-line interface.

Subcommands: eval, tc, compare, reconstruct, equiv, enumerate, sample.
Every flag has an environment-variable mirror with the HOUSEMAJ_ prefix
(e.g. HOUSEMAJ_SEED); explicit flags win over the environment.  Exit codes:
0 success, 2 malformed input, 3 brute-force limit exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import experiments, report
from .core import (
    BRUTE_LIMIT_DEFAULT,
    Profile,
    ProfileFormatError,
    UniverseTooLargeError,
    format_assignment,
    parse_assignment,
    parse_profile,
)
from .covering import MCKELVEY, VARIANTS
from .majority import MajorityMatrix, Verdict, build_matrix, compare
from .pareto import pareto_optimal_set, pareto_pessimal_set
from .reconstruct import QUERY_BOUND_C, MajorityOracle, reconstruct, rotation_equivalent
from .rules import generous_set, least_unpopular_set, popular_set, rank_maximal_set
from .topcycle import tc_brute, tc_characterize

ENV_PREFIX = "HOUSEMAJ_"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_LIMIT = 3

RULE_NAMES = (
    "popular",
    "rank-maximal",
    "generous",
    "least-unpopular",
    "po",
    "pp",
    "uc",
    "uc-mckelvey",
    "uc-bordes",
    "uc-gillies",
    "tc",
    "bc",
)

VERDICT_NAMES = {
    Verdict.FIRST_WINS: "FirstWins",
    Verdict.SECOND_WINS: "SecondWins",
    Verdict.TIE: "Tie",
}


def _env(name, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _env_int(name, default):
    raw = _env(name)
    return default if raw is None else int(raw)


def _env_flag(name):
    raw = _env(name)
    return raw is not None and raw not in ("", "0", "false", "no")


def _load_profile(path) -> Profile:
    with open(path) as f:
        return parse_profile(f.read())


def _print_set(name, assignments, labels, elapsed):
    shown = sorted(assignments)
    print(f"{name}: size {len(shown)} ({elapsed:.3f}s)")
    if not shown:
        print("  EMPTY")
    for mu in shown:
        print(f"  {format_assignment(mu, labels)}")


def cmd_eval(args) -> int:
    profile = _load_profile(args.profile)
    labels = profile.labels
    rules = [r.strip() for r in args.rules.split(",") if r.strip()]
    for rule in rules:
        if rule not in RULE_NAMES:
            raise ProfileFormatError(
                f"unknown rule {rule!r}; choose from {', '.join(RULE_NAMES)}"
            )
    mat = None
    for rule in rules:
        t0 = time.time()
        if rule == "popular":
            _print_set("popular", popular_set(profile, args.brute_limit), labels,
                       time.time() - t0)
        elif rule == "rank-maximal":
            _print_set("rank-maximal", rank_maximal_set(profile, args.brute_limit),
                       labels, time.time() - t0)
        elif rule == "generous":
            _print_set("generous", generous_set(profile, args.brute_limit), labels,
                       time.time() - t0)
        elif rule == "least-unpopular":
            margin, best = least_unpopular_set(profile, args.brute_limit)
            print(f"least-unpopular: unpopularity margin {margin}")
            _print_set("least-unpopular", best, labels, time.time() - t0)
        elif rule == "po":
            _print_set("pareto-optimal", pareto_optimal_set(profile, args.brute_limit),
                       labels, time.time() - t0)
        elif rule == "pp":
            _print_set("pareto-pessimal", pareto_pessimal_set(profile, args.brute_limit),
                       labels, time.time() - t0)
        elif rule.startswith("uc"):
            from .covering import uncovered_two_step

            variant = rule[3:] if "-" in rule else args.variant
            if mat is None:
                mat = build_matrix(profile, args.brute_limit)
            _print_set(f"uc-{variant}", uncovered_two_step(mat, variant), labels,
                       time.time() - t0)
        elif rule == "tc":
            desc = tc_characterize(profile, args.brute_limit)
            print(f"tc: case {desc.case}, size {desc.size} ({time.time() - t0:.3f}s)")
            _describe_tc(desc, labels)
        elif rule == "bc":
            from .topcycle import bc_characterize

            desc = bc_characterize(profile, args.brute_limit)
            print(f"bc: case {desc.case}, size {desc.size} ({time.time() - t0:.3f}s)")
            _describe_tc(desc, labels)
    return EXIT_OK


def _describe_tc(desc, labels):
    if desc.members is not None:
        for mu in sorted(desc.members):
            print(f"  {format_assignment(mu, labels)}")
    elif desc.excluded is not None:
        print("  all assignments except:")
        for mu in sorted(desc.excluded):
            print(f"  {format_assignment(mu, labels)}")
    else:
        print("  all assignments")


def cmd_tc(args) -> int:
    profile = _load_profile(args.profile)
    desc = tc_characterize(profile, args.brute_limit)
    print(f"case {desc.case}, size {desc.size}")
    _describe_tc(desc, profile.labels)
    return EXIT_OK


def cmd_compare(args) -> int:
    profile = _load_profile(args.profile)
    mu = parse_assignment(args.first.strip("()"), profile.labels)
    lam = parse_assignment(args.second.strip("()"), profile.labels)
    outcome = compare(profile, mu, lam)
    sign = f"{outcome.margin:+d}" if outcome.margin else "0"
    print(f"{sign} {VERDICT_NAMES[outcome.verdict]}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    profile = _load_profile(args.profile)
    oracle = MajorityOracle.from_profile(profile)
    rc = reconstruct(oracle, profile.n)
    labels = profile.labels
    blocks = " ".join(
        "{" + ",".join(labels[h] for h in block) + "}" for block in rc.blocks
    )
    print(f"blocks: {blocks}")
    print(f"members: {len(rc)} (cyclic shifts {list(rc.shifts)})")
    print("base profile:")
    for x in range(rc.base.n):
        row = ",".join(labels[h] for h in rc.base.orders[x])
        print(f"  {x + 1}: {row}")
    bound = QUERY_BOUND_C * profile.n**4
    print(f"oracle queries: {oracle.queries} (bound {bound})")
    return EXIT_OK


def cmd_equiv(args) -> int:
    p1 = _load_profile(args.profile_a)
    p2 = _load_profile(args.profile_b)
    equiv = rotation_equivalent(p1, p2)
    print(f"rotation-equivalent: {'yes' if equiv else 'no'}")
    if p1.n == p2.n and p1.n <= 5:
        m1 = MajorityMatrix(p1)
        m2 = MajorityMatrix(p2)
        same = bool(np.array_equal(np.asarray(m1.margin) != 0, np.asarray(m2.margin) != 0)
                    and np.array_equal(np.sign(m1.margin), np.sign(m2.margin)))
        print(f"majority-graphs-equal: {'yes' if same else 'no'}")
    return EXIT_OK


def _report_census(census, args, stem):
    if args.out:
        paths = report.write_report(census, args.out, stem=stem)
        for p in paths:
            print(f"wrote {p}")
    else:
        for curve in experiments.CURVES:
            rows = census.histogram_rows(curve)
            head = ", ".join(f"{size}:{pct}" for size, _, pct in rows[:6])
            print(f"{curve}: {head}{' ...' if len(rows) > 6 else ''}")
    if census.fact_violations:
        print(f"structural-fact violations: {census.fact_violations}")


def cmd_enumerate(args) -> int:
    n = args.n
    if n > 5 or (n == 5 and not args.long):
        raise UniverseTooLargeError(
            f"full enumeration for n={n} needs --long (n=5) and n <= 5"
        )
    if args.stats == "tc-sizes":
        census = experiments.census_canonical(n, jobs=args.jobs)
        sizes = sorted(census.tc_sizes)
        print(f"profiles: {census.profiles}")
        print("tc-sizes: {" + ",".join(str(s) for s in sizes) + "}")
        for s in sizes:
            print(f"  {s}: {census.tc_sizes[s]}")
        return EXIT_OK
    census = experiments.census_canonical(n, jobs=args.jobs, want_fact=(n == 5))
    print(f"profiles: {census.profiles}")
    _report_census(census, args, f"enumerate_n{n}")
    return EXIT_OK


def cmd_sample(args) -> int:
    n = args.n
    if args.impartial:
        profiles = experiments.sample_impartial(n, args.seed, args.count)
    else:
        profiles = experiments.sample_canonical(n, args.seed, args.count)
    census = experiments.run_census(profiles, jobs=args.jobs, want_fact=(n == 5))
    print(f"profiles: {census.profiles} (seed {args.seed})")
    _report_census(census, args, f"sample_n{n}_seed{args.seed}")
    return EXIT_OK


def _add_common(sub):
    sub.add_argument("--brute-limit", type=int,
                     default=_env_int("brute_limit", BRUTE_LIMIT_DEFAULT),
                     help="largest n for which the full universe may be built")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="housemaj",
        description="Majority-based analysis of house allocation profiles.",
    )
    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("eval", help="evaluate assignment rules on a profile file")
    p.add_argument("profile")
    p.add_argument("--rules", default=_env(
        "rules", "popular,rank-maximal,generous,least-unpopular,uc-mckelvey"))
    p.add_argument("--variant", default=_env("variant", MCKELVEY), choices=VARIANTS)
    _add_common(p)
    p.set_defaults(fn=cmd_eval)

    p = sp.add_parser("tc", help="top-cycle case and representation")
    p.add_argument("profile")
    _add_common(p)
    p.set_defaults(fn=cmd_tc)

    p = sp.add_parser("compare", help="majority margin between two assignments")
    p.add_argument("profile")
    p.add_argument("first", help='assignment literal like "(a,b,c)"')
    p.add_argument("second")
    p.set_defaults(fn=cmd_compare)

    p = sp.add_parser("reconstruct",
                      help="recover the rotation class from a profile-backed oracle")
    p.add_argument("profile")
    p.set_defaults(fn=cmd_reconstruct)

    p = sp.add_parser("equiv", help="rotation equivalence of two profiles")
    p.add_argument("profile_a")
    p.add_argument("profile_b")
    p.set_defaults(fn=cmd_equiv)

    p = sp.add_parser("enumerate", help="census over all canonical profiles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stats", choices=("census", "tc-sizes"),
                   default=_env("stats", "census"))
    p.add_argument("--jobs", type=int, default=_env_int("jobs", os.cpu_count() or 1))
    p.add_argument("--out", default=_env("out"))
    p.add_argument("--long", action="store_true", default=_env_flag("long"))
    p.set_defaults(fn=cmd_enumerate)

    p = sp.add_parser("sample", help="census over sampled profiles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=_env_int("seed", 0))
    p.add_argument("--count", type=int, default=_env_int("count", 10000))
    p.add_argument("--impartial", action="store_true",
                   default=_env_flag("impartial"))
    p.add_argument("--jobs", type=int, default=_env_int("jobs", os.cpu_count() or 1))
    p.add_argument("--out", default=_env("out"))
    p.set_defaults(fn=cmd_sample)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UniverseTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ProfileFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
