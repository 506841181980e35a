"""Structure learning for linear Gaussian SEMs.

Continuous (quadratic-penalty, soft, barrier) and discrete (exhaustive,
greedy, A*) DAG search over least-squares and Gaussian-likelihood scores,
with the diagnostics (varsortability, noise ratios) and closed-form
constructions needed to study when each family succeeds.
"""

from .constraints import ConstraintSpec, h_value, h_value_and_grad
from .estimators import (AStarDagLearner, ContinuousDagLearner,
                         ExhaustiveDagLearner, GreedyDagLearner)
from .graphs import (Digraph, Pdag, all_dags, directed_paths, is_acyclic,
                     pdag_to_dag, to_cpdag, topological_order)
from .metrics import (f1_recall, noise_ratio, shd, shd_cpdag,
                      shd_cpdag_of_dags, standardized_noise_ratio, v_source,
                      varsortability)
from .scores import (PenaltySpec, ScoreSpec, golem_nv_nonprofiled,
                     golem_objective, least_squares, least_squares_population,
                     penalty_value_and_grad, score_gradient)
from .sem import (Sem, population_covariance, sample, standardize,
                  standardize_population)
from .simulate import (erdos_renyi_dag, cholesky_alternative,
                       varsortable_counterexample, low_varsortability_sem, sample_noise_nv,
                       sample_weights)
from .solvers.continuous import (InitSpec, SolveResult, SolverSpec,
                                 refit_coefficients,
                                 refit_coefficients_population, solve,
                                 threshold)
from .solvers.discrete import astar_search, dag_score, exhaustive_search, gds

__version__ = "0.1.0"

__all__ = [
    "AStarDagLearner", "ConstraintSpec", "ContinuousDagLearner", "Digraph",
    "ExhaustiveDagLearner", "GreedyDagLearner", "InitSpec", "Pdag",
    "PenaltySpec", "ScoreSpec", "Sem", "SolveResult", "SolverSpec",
    "all_dags", "astar_search", "dag_score", "directed_paths",
    "erdos_renyi_dag", "exhaustive_search", "f1_recall", "gds",
    "golem_nv_nonprofiled", "golem_objective", "h_value", "h_value_and_grad",
    "is_acyclic", "least_squares", "least_squares_population", "noise_ratio",
    "pdag_to_dag", "penalty_value_and_grad", "population_covariance",
    "cholesky_alternative", "varsortable_counterexample", "low_varsortability_sem", "sample",
    "sample_noise_nv", "sample_weights", "score_gradient", "shd", "shd_cpdag",
    "shd_cpdag_of_dags", "solve", "standardize", "standardize_population",
    "standardized_noise_ratio", "threshold", "to_cpdag", "topological_order",
    "v_source", "varsortability", "refit_coefficients",
    "refit_coefficients_population",
]
