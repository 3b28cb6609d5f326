"""Majority-based analysis of house allocation: margins over the assignment
universe, top/bottom cycles, covering and uncovered sets, Pareto structure,
classic assignment rules, profile reconstruction from a majority oracle, and
census pipelines over canonical or sampled profiles."""

from .core import (
    AssignmentIndexer,
    PreferenceOrder,
    Profile,
    ProfileFormatError,
    UniverseTooLargeError,
    canonical_form,
    format_assignment,
    invert_profile,
    parse_assignment,
    parse_profile,
)
from .covering import BORDES, GILLIES, MCKELVEY, VARIANTS, uncovered_set, uncovered_two_step
from .majority import MajorityMatrix, Verdict, build_matrix, compare
from .pareto import (
    is_pareto_optimal,
    pareto_optimal_set,
    pareto_pessimal_set,
    serial_dictatorship,
)
from .reconstruct import (
    MajorityOracle,
    RotationClass,
    UnresolvableError,
    infer_margins,
    reconstruct,
    rotation_equivalent,
)
from .rules import generous_set, least_unpopular_set, popular_set, rank_maximal_set
from .topcycle import bc_characterize, tc_brute, tc_characterize

__version__ = "0.1.0"
