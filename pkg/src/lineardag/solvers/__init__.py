from .continuous import (InitSpec, SolveResult, SolverSpec, refit_coefficients,
                         refit_coefficients_population, solve, threshold)
from .discrete import (LocalScoreCache, astar_search, dag_score,
                       exhaustive_search, gds)
