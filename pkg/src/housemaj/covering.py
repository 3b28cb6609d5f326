"""Covering relations (McKelvey, Bordes, Gillies) and uncovered sets.

Two independent computations are provided: the quantified definition of
covering (used as the slow oracle) and the two-step majority-path
characterization (the production path, built on BLAS boolean matmuls).
Tests assert they agree everywhere.
"""

from __future__ import annotations

import numpy as np

from .majority import MajorityMatrix

__all__ = [
    "VARIANTS",
    "MCKELVEY",
    "BORDES",
    "GILLIES",
    "covers",
    "uncovered_set",
    "uncovered_two_step",
    "uncovered_mask_two_step",
]

MCKELVEY = "mckelvey"
BORDES = "bordes"
GILLIES = "gillies"
VARIANTS = (MCKELVEY, BORDES, GILLIES)


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ValueError(f"unknown covering variant {variant!r}; choose from {VARIANTS}")


def covers(mat: MajorityMatrix, variant: str, mu, lam) -> bool:
    """Literal covering test between two assignments.

    Bordes: mu strictly beats lam, and everything that strictly beats lam is
    also strictly beaten by mu.  Gillies: mu strictly beats lam, and
    everything strictly beating mu also strictly beats lam.  McKelvey: both.
    """
    _check_variant(variant)
    i = mat.index(mu)
    j = mat.index(lam)
    if i == j:
        raise ValueError("covering is only defined between distinct assignments")
    return _covers_idx(mat.strict, variant, i, j)


def _covers_idx(strict: np.ndarray, variant: str, i: int, j: int) -> bool:
    if not strict[i, j]:
        return False
    if variant in (BORDES, MCKELVEY):
        if (strict[j] & ~strict[i]).any():
            return False
    if variant in (GILLIES, MCKELVEY):
        if (strict[:, i] & ~strict[:, j]).any():
            return False
    return True


def uncovered_set(mat: MajorityMatrix, variant: str) -> set:
    """Uncovered assignments by the quantified definition (oracle path)."""
    _check_variant(variant)
    strict = np.asarray(mat.strict)
    f = strict.astype(np.float32)
    nf = 1.0 - f
    covered = np.zeros(strict.shape[0], dtype=bool)
    if variant in (BORDES, MCKELVEY):
        bad = nf @ f.T  # bad[i, j] = #eta strictly beaten by j but not by i
        cov = strict & (bad < 0.5)
        if variant == BORDES:
            covered = cov.any(axis=0)
    if variant in (GILLIES, MCKELVEY):
        badg = f.T @ nf  # badg[i, j] = #eta with eta > i but not eta > j
        covg = strict & (badg < 0.5)
        if variant == GILLIES:
            covered = covg.any(axis=0)
    if variant == MCKELVEY:
        covered = (cov & covg).any(axis=0)
    return {mat.assignment(i) for i in np.flatnonzero(~covered)}


def uncovered_mask_two_step(
    strict: np.ndarray, weak: np.ndarray, variant: str, candidates=None
) -> np.ndarray:
    """Boolean uncovered mask via majority paths of length at most two.

    An assignment is uncovered iff it reaches every other assignment either
    directly (weakly) or through one intermediate step whose strict segment
    position depends on the variant: first for Bordes, second for Gillies,
    either for McKelvey.  ``candidates`` restricts the tested rows (the
    returned mask is over candidates) which keeps n=7 tractable.
    """
    _check_variant(variant)
    if candidates is None:
        s_rows = strict
        w_rows = weak
    else:
        s_rows = strict[candidates]
        w_rows = weak[candidates]
    wf = weak.astype(np.float32)
    sf = strict.astype(np.float32)
    if variant == BORDES:
        reach = w_rows | (s_rows.astype(np.float32) @ wf > 0.5)
    elif variant == GILLIES:
        reach = w_rows | (w_rows.astype(np.float32) @ sf > 0.5)
    else:
        reach = (
            w_rows
            | (s_rows.astype(np.float32) @ wf > 0.5)
            | (w_rows.astype(np.float32) @ sf > 0.5)
        )
    return reach.all(axis=1)


def uncovered_two_step(mat: MajorityMatrix, variant: str) -> set:
    """Uncovered set via the two-step path characterization (production path)."""
    mask = uncovered_mask_two_step(np.asarray(mat.strict), np.asarray(mat.weak), variant)
    return {mat.assignment(i) for i in np.flatnonzero(mask)}
