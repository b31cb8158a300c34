"""Estimator-style wrapper around leaf reconstruction.

``fit`` takes an infinitesimal momentum map and computes the leaf through the
base point; ``transform`` maps points of M to G* along that leaf.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import DimensionMismatch
from .group import GroupModel
from .imm import AlphaMap
from .reconstruct import DEFAULT_STEP, DEFAULT_TOL, LeafSpec, involutivity_report, leaf_map, lift_points, obstruction_phi


class MomentumMapReconstructor(TransformerMixin, BaseEstimator):
    """Reconstruct mu: M -> G* from alpha by lifting paths through the leaf of ``(base_m, base_u)``.

    Parameters
    ----------
    group : GroupModel
    base_m, base_u : sequences or None
        Base point; defaults are the box center and the identity.
    step : float
        RK4 step length.
    grid : int or tuple
        Grid used for the diagnostic leaf computed in ``fit``.
    seed : int
        Seed for the path-independence sample.
    tol : float
        Tolerance for the obstruction verdict.
    """

    def __init__(self, group: GroupModel | None = None, base_m=None, base_u=None, step: float = DEFAULT_STEP,
                 grid=5, seed: int = 0, tol: float = DEFAULT_TOL):
        self.group = group
        self.base_m = base_m
        self.base_u = base_u
        self.step = step
        self.grid = grid
        self.seed = seed
        self.tol = tol

    def fit(self, alpha: AlphaMap, y=None):
        if not isinstance(alpha, AlphaMap):
            raise TypeError("fit expects an AlphaMap")
        if self.group is None:
            raise ValueError("group must be set")
        report = involutivity_report(alpha, self.group)
        if not report.involutive:
            raise ValueError("alpha and theta do not span an involutive distribution")
        base_m = tuple(self.base_m) if self.base_m is not None else alpha.chart.center()
        base_u = tuple(self.base_u) if self.base_u is not None else (0,) * self.group.dim
        self.spec_ = LeafSpec(alpha, self.group, base_m, base_u, self.step, self.grid, self.seed)
        self.leaf_ = leaf_map(self.spec_)
        self.obstruction_ = obstruction_phi(self.leaf_, self.tol)
        self.is_momentum_map_ = self.obstruction_.accepted
        self.n_features_in_ = alpha.chart.dim
        return self

    def transform(self, X):
        check_is_fitted(self, "leaf_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return lift_points(self.spec_, X)
