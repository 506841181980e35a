"""scikit-learn style estimators wrapping the functional solver API.

Each learner follows the fit/get_params contract so the solvers compose with
pipelines, grid search, and cloning.  `fit(X)` estimates a weighted DAG from
an n x d sample matrix and exposes:

    coef_        post-threshold weight matrix (acyclic)
    raw_coef_    pre-threshold solution (continuous learners)
    graph_       Digraph of coef_'s nonzero pattern
    converged_   feasibility flag (continuous learners)

`predict(X)` returns the fitted linear mechanism values X @ coef_.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils import check_array

from .constraints import ConstraintSpec
from .scores import PenaltySpec, ScoreSpec, least_squares
from .solvers.continuous import (InitSpec, SolverSpec, refit_coefficients,
                                 solve, threshold)
from .solvers.discrete import astar_search, exhaustive_search, gds


class _DagLearnerMixin:
    def _check_fitted(self):
        if not hasattr(self, "coef_"):
            raise NotFittedError("call fit before using this estimator")

    def predict(self, X):
        self._check_fitted()
        X = check_array(X)
        return X @ self.coef_

    def score(self, X, y=None):
        """Negative least-squares reconstruction loss (higher is better)."""
        self._check_fitted()
        X = check_array(X)
        return -least_squares(self.coef_, X)


class ContinuousDagLearner(BaseEstimator, _DagLearnerMixin):
    """Gradient-based DAG learner (hard, soft, or barrier strategy).

    Parameters mirror SolverSpec; `init` accepts 'zero', 'uniform', an explicit
    matrix, or ('perturb-of', matrix).
    """

    def __init__(self, strategy="quadratic-penalty", objective="least-squares",
                 constraint="exp", penalty="l1", lambda1=0.0, lambda2=5.0,
                 penalty_a=3.7, include_logdet=None, threshold=0.1,
                 init="zero", init_epsilon=0.1, restarts=1, tol=1e-8,
                 max_outer=15, max_inner_iter=500, gtol=1e-7, seed=0):
        self.strategy = strategy
        self.objective = objective
        self.constraint = constraint
        self.penalty = penalty
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.penalty_a = penalty_a
        self.include_logdet = include_logdet
        self.threshold = threshold
        self.init = init
        self.init_epsilon = init_epsilon
        self.restarts = restarts
        self.tol = tol
        self.max_outer = max_outer
        self.max_inner_iter = max_inner_iter
        self.gtol = gtol
        self.seed = seed

    def _solver_spec(self) -> SolverSpec:
        include_logdet = self.include_logdet
        if include_logdet is None:
            include_logdet = self.objective in ("golem-ev", "golem-nv")
        score = ScoreSpec(
            kind=self.objective,
            penalty=PenaltySpec(self.penalty, self.lambda1, self.penalty_a),
            include_logdet_term=include_logdet)
        if isinstance(self.init, str):
            if self.init == "uniform":
                init = InitSpec("uniform", epsilon=self.init_epsilon,
                                restarts=self.restarts)
            else:
                init = InitSpec(self.init)
        elif isinstance(self.init, tuple) and self.init[0] == "perturb-of":
            init = InitSpec("perturb-of", matrix=np.asarray(self.init[1]),
                            epsilon=self.init_epsilon, restarts=self.restarts)
        else:
            init = InitSpec("matrix", matrix=np.asarray(self.init))
        return SolverSpec(strategy=self.strategy, score=score,
                          constraint=ConstraintSpec(self.constraint),
                          init=init, soft_lambda2=self.lambda2, tol=self.tol,
                          max_outer=self.max_outer,
                          max_inner_iter=self.max_inner_iter, gtol=self.gtol,
                          threshold=self.threshold)

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_features=1)
        result = solve(X, self._solver_spec(), seed=self.seed)
        self.raw_coef_ = result.b_raw
        self.coef_ = result.b_final
        self.graph_ = result.graph()
        self.converged_ = result.converged
        self.objective_trace_ = result.objective_trace
        self.score_final_ = result.score_final
        self.n_features_in_ = X.shape[1]
        return self


class _DiscreteLearnerBase(BaseEstimator, _DagLearnerMixin):
    def _search(self, X):
        raise NotImplementedError

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_features=1)
        graph = self._search(X)
        coef = refit_coefficients(graph, X)
        # same post-processing as the continuous learners (threshold parity)
        self.coef_ = threshold(coef, self.threshold)
        self.graph_ = graph
        self.n_features_in_ = X.shape[1]
        return self


class GreedyDagLearner(_DiscreteLearnerBase):
    """Hill-climbing DAG search with L0-penalized least squares."""

    def __init__(self, lambda0=0.01, threshold=0.1, restarts=5, seed=0):
        self.lambda0 = lambda0
        self.threshold = threshold
        self.restarts = restarts
        self.seed = seed

    def _search(self, X):
        return gds(X, lambda0=self.lambda0, seed=self.seed,
                   restarts=self.restarts)


class AStarDagLearner(_DiscreteLearnerBase):
    """Exact order-based search (subset-lattice A*)."""

    def __init__(self, lambda0=0.01, threshold=0.1, max_parents=None):
        self.lambda0 = lambda0
        self.threshold = threshold
        self.max_parents = max_parents

    def _search(self, X):
        return astar_search(X, lambda0=self.lambda0,
                            max_parents=self.max_parents)


class ExhaustiveDagLearner(_DiscreteLearnerBase):
    """Full enumeration of labeled DAGs; small d only."""

    def __init__(self, lambda0=0.0, threshold=0.0):
        self.lambda0 = lambda0
        self.threshold = threshold

    def _search(self, X):
        graph, self.best_score_ = exhaustive_search(X, lambda0=self.lambda0)
        return graph
