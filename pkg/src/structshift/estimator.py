"""Scikit-learn style front end.

``StructureChangeDetector`` fixes a baseline composition at fit time and
then scores any number of comparison compositions against it: ``predict``
returns the similarity-test decision per row, ``transform`` the
per-category difference vectors. Rows are compositions over the same
feature axis (categories); counts and shares are both accepted since every
row is normalized to sum to 1.

The heavy lifting lives in the functional modules; this class only adapts
their pipeline to the estimator protocol (``get_params`` / ``set_params``,
ndarray in, ndarray out) so it composes with sklearn tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .changes import difference_profile
from .report import ComparisonReport, compare_pair
from .similarity import similarity_index
from .sokolowski import CriticalValuePolicy, MonteCarloConfig, run_test
from .structures import AlignedPair, FrequencyTable, StructureVector


class StructureChangeDetector(TransformerMixin, BaseEstimator):
    """Detect similarity and distinctive change relative to a baseline.

    Parameters:
        alpha: significance level of the similarity test.
        cv_policy: critical-value policy ("embedded", "embedded-then-mc",
            "mc").
        mc_replicates, seed: Monte Carlo settings, used only when the
            policy can fall through to simulation.
        categories: optional feature labels; defaults to "c0", "c1", ...

    Attributes (after fit):
        baseline_: the normalized baseline composition, shape (k,).
        n_features_in_: number of categories.
    """

    def __init__(
        self,
        alpha: float = 0.05,
        cv_policy: str = "embedded",
        mc_replicates: int = 1_000_000,
        seed: int = 0,
        categories: tuple[str, ...] | None = None,
    ):
        self.alpha = alpha
        self.cv_policy = cv_policy
        self.mc_replicates = mc_replicates
        self.seed = seed
        self.categories = categories

    def _validate_compositions(self, X, *, reset: bool) -> np.ndarray:
        X = check_array(X, dtype=float, ensure_min_features=1)
        if reset:
            self.n_features_in_ = X.shape[1]
        elif X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        if np.any(X < 0):
            raise ValueError("compositions must be nonnegative")
        totals = X.sum(axis=1)
        if np.any(totals <= 0):
            raise ValueError("every composition must have a positive total")
        return X / totals[:, None]

    def _labels(self) -> tuple[str, ...]:
        if self.categories is not None:
            if len(self.categories) != self.n_features_in_:
                raise ValueError("categories length does not match feature count")
            return tuple(self.categories)
        return tuple(f"c{i}" for i in range(self.n_features_in_))

    def fit(self, X, y=None):
        """Fix the baseline composition.

        X must contain exactly one row (shape (1, k) or (k,)).
        """
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        X = self._validate_compositions(X, reset=True)
        if X.shape[0] != 1:
            raise ValueError(f"fit expects a single baseline composition, got {X.shape[0]} rows")
        self.baseline_ = X[0]
        return self

    def _pairs(self, X) -> list[AlignedPair]:
        X = self._validate_compositions(X, reset=False)
        labels = self._labels()
        base = StructureVector(labels, self.baseline_)
        return [AlignedPair(base, StructureVector(labels, row)) for row in X]

    def _mc_config(self) -> MonteCarloConfig:
        return MonteCarloConfig(replicates=self.mc_replicates, seed=self.seed)

    def predict(self, X) -> np.ndarray:
        """Similarity-test decision per row: True where the row is declared
        similar to the baseline."""
        check_is_fitted(self, "baseline_")
        policy = CriticalValuePolicy(self.cv_policy)
        return np.array(
            [
                run_test(p, self.alpha, policy, self._mc_config()).decision.value
                == "similar"
                for p in self._pairs(X)
            ]
        )

    def transform(self, X) -> np.ndarray:
        """Difference vectors d = row - baseline, shape (n_rows, k)."""
        check_is_fitted(self, "baseline_")
        return np.vstack([difference_profile(p).d for p in self._pairs(X)])

    def score_samples(self, X) -> np.ndarray:
        """Similarity index of each row against the baseline."""
        check_is_fitted(self, "baseline_")
        return np.array([similarity_index(p).omega_p for p in self._pairs(X)])

    def report(self, X, ids: list[str] | None = None) -> list[ComparisonReport]:
        """Full comparison reports for each row of X."""
        check_is_fitted(self, "baseline_")
        X = self._validate_compositions(X, reset=False)
        labels = self._labels()
        if ids is None:
            ids = [f"p{i}" for i in range(X.shape[0])]
        if len(ids) != X.shape[0]:
            raise ValueError("ids length does not match number of rows")
        policy = CriticalValuePolicy(self.cv_policy)
        reports = []
        for row_id, row in zip(ids, X):
            table = FrequencyTable(
                labels, ("baseline", row_id), np.vstack([self.baseline_, row])
            )
            reports.append(
                compare_pair(
                    table, "baseline", row_id, self.alpha, policy, self._mc_config()
                )
            )
        return reports
