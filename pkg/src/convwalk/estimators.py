"""scikit-learn style wrappers: rows of X are measures on a fixed group."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_measure_rows, resolve_group
from .classify import ClassifyOptions, classify
from .measure import Measure, ProbabilityMeasure, parse_measure
from .operator import EIGEN_TOL, GAP_TOL, lambda1

UCM = "uniformly_completely_mixing"
UE = "uniformly_ergodic"
NOT_UE = "not_uniformly_ergodic"


class _GroupEstimator(BaseEstimator):
    def _fit_group(self, X):
        G = resolve_group(self.group)
        X = check_measure_rows(X, G)
        self.group_ = G
        self.n_features_in_ = G.order
        return X

    def _options(self):
        return ClassifyOptions(eigen_tol=self.eigen_tol, gap_tol=self.gap_tol,
                               tail_tol=self.tail_tol, contour=self.contour)

    def _reports(self, X):
        check_is_fitted(self, "group_")
        X = check_measure_rows(X, self.group_)
        opts = self._options()
        return [classify(ProbabilityMeasure(self.group_, row), opts) for row in X]


class ErgodicityClassifier(ClassifierMixin, _GroupEstimator):
    """Labels each measure as completely mixing, ergodic only, or neither.

    ``fit`` only validates and binds the group; the labels are decided by
    theorem, not learned.
    """

    def __init__(self, group="cyclic:2", eigen_tol=EIGEN_TOL, gap_tol=GAP_TOL, tail_tol=1e-6,
                 contour=False):
        self.group = group
        self.eigen_tol = eigen_tol
        self.gap_tol = gap_tol
        self.tail_tol = tail_tol
        self.contour = contour

    def fit(self, X, y=None):
        self._fit_group(X)
        self.classes_ = np.array([NOT_UE, UE, UCM])
        return self

    def predict_reports(self, X):
        return self._reports(X)

    def predict(self, X):
        out = []
        for r in self._reports(X):
            if r.verdict_uniformly_completely_mixing:
                out.append(UCM)
            elif r.verdict_uniformly_ergodic:
                out.append(UE)
            else:
                out.append(NOT_UE)
        return np.array(out)


class SpectralFeatures(TransformerMixin, _GroupEstimator):
    """Per-measure numeric summary taken from :func:`classify`."""

    feature_names = ("zero_norm", "zero_spectral_radius", "gap", "fixed_space_dim",
                     "adapted", "strictly_aperiodic")

    def __init__(self, group="cyclic:2", eigen_tol=EIGEN_TOL, gap_tol=GAP_TOL, tail_tol=1e-6,
                 contour=False):
        self.group = group
        self.eigen_tol = eigen_tol
        self.gap_tol = gap_tol
        self.tail_tol = tail_tol
        self.contour = contour

    def fit(self, X, y=None):
        self._fit_group(X)
        return self

    def transform(self, X):
        rows = []
        for r in self._reports(X):
            rows.append([r.zero_norm, r.zero_spectral_radius, r.one_isolated[1],
                         r.fixed_space_dim, float(r.adapted), float(r.strictly_aperiodic)])
        return np.array(rows, dtype=np.float64).reshape(-1, len(self.feature_names))

    def get_feature_names_out(self, input_features=None):
        return np.array(self.feature_names, dtype=object)


class LeftConvolution(TransformerMixin, BaseEstimator):
    """Applies ``f -> mu * f`` to every row of X.

    ``measure`` is a weight vector or a measure string such as
    ``atoms:1=0.5,3=0.5``; rows of X are arbitrary real functions on G.
    """

    def __init__(self, group="cyclic:2", measure="haar"):
        self.group = group
        self.measure = measure

    def fit(self, X, y=None):
        G = resolve_group(self.group)
        check_measure_rows(X, G, probability=False)
        if isinstance(self.measure, Measure):
            mu = self.measure
        elif isinstance(self.measure, str):
            mu = parse_measure(self.measure, G, probability=False)
        else:
            mu = Measure(G, np.asarray(self.measure))
        self.group_ = G
        self.matrix_ = np.asarray(lambda1(mu).matrix)
        self.n_features_in_ = G.order
        return self

    def transform(self, X):
        check_is_fitted(self, "matrix_")
        X = check_measure_rows(X, self.group_, probability=False)
        out = X @ self.matrix_.T
        return out.real if np.allclose(out.imag, 0.0) else out
