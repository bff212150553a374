"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .errors import InputError
from .group import FiniteGroup, GroupSpec, build_group
from .measure import PROBABILITY_SUM_TOL


def resolve_group(group) -> FiniteGroup:
    """Accept a FiniteGroup, GroupSpec, spec dict, or spec string."""
    if isinstance(group, FiniteGroup):
        return group
    if isinstance(group, (GroupSpec, dict, str)):
        return build_group(group)
    raise InputError(f"cannot interpret {group!r} as a group")


def check_measure_rows(X, G: FiniteGroup, *, probability: bool = True) -> np.ndarray:
    """2-D float array with one measure per row over the elements of G."""
    try:
        X = check_array(X, dtype=np.float64, ensure_2d=True)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if X.shape[1] != G.order:
        raise InputError(f"expected {G.order} columns (one per group element), got {X.shape[1]}")
    if probability:
        if (X < 0).any():
            raise InputError("probability rows must be nonnegative")
        bad = np.abs(X.sum(axis=1) - 1.0) > PROBABILITY_SUM_TOL
        if bad.any():
            raise InputError(f"rows {np.flatnonzero(bad).tolist()} do not sum to 1")
    return X
