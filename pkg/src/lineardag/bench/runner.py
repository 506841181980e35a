"""Grid executor: one ResultRow per (config cell, seed), CSV persistence,
and mean +/- standard-error summaries.

Tasks are pure functions of (config, cell, seed), so they can run in a
process pool; results are re-ordered by task index, making the CSV identical
whatever the schedule.
"""

from __future__ import annotations

import csv
import io
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .. import metrics as mx
from ..constraints import ConstraintSpec
from ..graphs import Digraph, graph_of_weights, to_cpdag
from ..scores import PenaltySpec, ScoreSpec
from ..sem import Sem, design_from_covariance, population_covariance, sample
from ..simulate import erdos_renyi_dag, sample_noise_nv, sample_weights
from ..solvers.continuous import (InitSpec, SolverSpec, refit_coefficients,
                                  refit_coefficients_population, solve,
                                  threshold)
from ..solvers.discrete import astar_search, exhaustive_search, gds
from .config import ExperimentConfig, MethodConfig

# Three-variable counterexample: the true triangle and the wrong triangle
# that the least-squares family actually returns, 0-indexed edges.
TRIANGLE_TRUTH_WEIGHTS = np.array([[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [1.0, 0.5, 0.0]])
TRIANGLE_TRUTH_NOISE = np.array([0.5, 1.0, 0.5])
TRIANGLE_WRONG_EDGES = frozenset({(0, 1), (2, 0), (2, 1)})

CSV_COLUMNS = [
    "kind", "d", "graph_k", "alpha", "noise_kind", "noise_r", "n",
    "population", "method", "seed", "threshold",
    "shd", "shd_cpdag", "f1_skeleton", "recall_skeleton", "precision_skeleton",
    "f1_arrows", "f1_dag", "recall_dag", "precision_dag",
    "varsortability", "noise_ratio", "noise_ratio_standardized",
    "score_final", "score_raw", "converged", "n_edges_true", "n_edges_est",
    "exact_match", "target_match", "var_order_ok", "wall_time",
    "failed", "error",
]

METRIC_COLUMNS = [
    "shd", "shd_cpdag", "f1_skeleton", "recall_skeleton", "precision_skeleton",
    "f1_arrows", "f1_dag", "recall_dag", "precision_dag", "varsortability",
    "noise_ratio", "noise_ratio_standardized", "score_final", "score_raw",
    "wall_time",
]


@dataclass
class ResultRow:
    kind: str
    d: int
    graph_k: float
    alpha: float
    noise_kind: str
    noise_r: float
    n: int
    population: bool
    method: str
    seed: int
    threshold: float | None = None
    shd: float | None = None
    shd_cpdag: float | None = None
    f1_skeleton: float | None = None
    recall_skeleton: float | None = None
    precision_skeleton: float | None = None
    f1_arrows: float | None = None
    f1_dag: float | None = None
    recall_dag: float | None = None
    precision_dag: float | None = None
    varsortability: float | None = None
    noise_ratio: float | None = None
    noise_ratio_standardized: float | None = None
    score_final: float | None = None
    score_raw: float | None = None
    converged: bool | None = None
    n_edges_true: int | None = None
    n_edges_est: int | None = None
    exact_match: bool | None = None
    target_match: bool | None = None
    var_order_ok: bool | None = None
    wall_time: float | None = None
    failed: bool = False
    error: str = ""


def _seed_for(seed: int, *coords) -> np.random.SeedSequence:
    """Stable per-task seeding from the seed and the cell coordinates.

    Coordinates are folded in through crc32 of their repr, which is stable
    across processes and runs (unlike Python's randomized str hash).
    """
    key = [int(seed)] + [zlib.crc32(repr(c).encode()) for c in coords]
    return np.random.SeedSequence(key)


def _simulate_cell(cfg: ExperimentConfig, d, k, alpha, r, seed):
    ss = _seed_for(seed, "sem", d, k, alpha, r)
    kids = ss.spawn(4)
    graph = erdos_renyi_dag(d, k, seed=kids[0], exact_count=cfg.exact_edge_count)
    weights = sample_weights(graph, alpha, seed=kids[1])
    if cfg.noise_kind == "nv" and r > 1:
        noise = sample_noise_nv(d, r, seed=kids[2])
    else:
        noise = np.ones(d)
    return Sem(weights, noise), graph


class _Problem:
    """One simulated instance with data in sampled or population form."""

    def __init__(self, sem: Sem, truth: Digraph, n: int, population: bool, seed):
        self.sem = sem
        self.truth = truth
        self.n = n
        self.population = population
        self.sigma = population_covariance(sem)
        if population:
            self.data = design_from_covariance(self.sigma)
        else:
            self.data = sample(sem, n, seed=seed)

    def refit(self, graph: Digraph) -> np.ndarray:
        if self.population:
            return refit_coefficients_population(graph, self.sigma)[0]
        return refit_coefficients(graph, self.data)


def _method_solver_spec(name: str, ov: dict) -> SolverSpec:
    presets = {
        "notears-ev": dict(strategy="quadratic-penalty", score="least-squares",
                           logdet=False, lambda1=0.0),
        "notears-nv": dict(strategy="quadratic-penalty", score="golem-nv",
                           logdet=False, lambda1=0.002),
        "golem-ev": dict(strategy="soft", score="golem-ev", logdet=True,
                         lambda1=0.02),
        "golem-nv": dict(strategy="soft", score="golem-nv", logdet=True,
                         lambda1=0.002),
        "barrier-ev": dict(strategy="barrier-path", score="least-squares",
                           logdet=False, lambda1=0.02),
        "barrier-nv": dict(strategy="barrier-path", score="golem-nv",
                           logdet=False, lambda1=0.002),
    }
    p = presets[name]
    score = ScoreSpec(
        kind=ov.get("score", p["score"]),
        penalty=PenaltySpec(ov.get("penalty", "l1"),
                            float(ov.get("lambda1", p["lambda1"])),
                            float(ov.get("penalty_a", 3.7))),
        include_logdet_term=p["logdet"])
    return SolverSpec(
        strategy=ov.get("strategy", p["strategy"]),
        score=score,
        constraint=ConstraintSpec(ov.get("constraint", "exp")),
        soft_lambda2=float(ov.get("lambda2", 5.0)),
        threshold=float(ov.get("threshold", 0.1)))


def _resolve_init(method: MethodConfig, problem: _Problem, seed) -> InitSpec:
    ov = method.overrides
    kind = ov.get("init", "zero")
    restarts = int(ov.get("init_restarts", 1))
    eps = float(ov.get("init_epsilon", 0.1))
    if kind == "zero":
        return InitSpec("zero")
    if kind == "uniform":
        return InitSpec("uniform", epsilon=eps, restarts=restarts)
    if kind == "oracle":
        # stand-in for an external high-quality reference: OLS on the truth
        return InitSpec("matrix", matrix=problem.refit(problem.truth))
    if kind == "gds":
        graph = _run_gds(method, problem, seed)
        return InitSpec("matrix", matrix=problem.refit(graph))
    if kind == "golem-ev":
        spec = _method_solver_spec("golem-ev", {})
        res = solve(problem.data, spec, seed=seed)
        return InitSpec("matrix", matrix=res.b_raw)
    raise ValueError(f"unknown init {kind!r}")


def _run_gds(method: MethodConfig, problem: _Problem, seed) -> Digraph:
    lam0 = float(method.overrides.get("lambda0", 0.01))
    if problem.population:
        return gds(covariance=problem.sigma, lambda0=lam0, seed=seed)
    return gds(problem.data, lambda0=lam0, seed=seed)


def _estimate(method: MethodConfig, problem: _Problem, seed):
    """Run one method; returns (estimated graph, score_final, score_raw, converged)."""
    name = method.name
    ov = method.overrides
    tau = float(ov.get("threshold", 0.1))
    if name in ("notears-ev", "notears-nv", "golem-ev", "golem-nv",
                "barrier-ev", "barrier-nv"):
        spec = _method_solver_spec(name, ov)
        spec = replace(spec, init=_resolve_init(method, problem, seed))
        res = solve(problem.data, spec, seed=seed)
        return res.graph(), res.score_final, res.score_raw, res.converged
    if name in ("gds", "astar", "exhaustive"):
        lam0 = float(ov.get("lambda0", 0.01 if name != "exhaustive" else 0.0))
        if name == "gds":
            graph = _run_gds(method, problem, seed)
            score = None
        elif name == "astar":
            cap = ov.get("max_parents", min(problem.truth.d - 1, 4))
            if problem.population:
                graph = astar_search(covariance=problem.sigma, lambda0=lam0,
                                     max_parents=cap)
            else:
                graph = astar_search(problem.data, lambda0=lam0, max_parents=cap)
            score = None
        else:
            if problem.population:
                graph, score = exhaustive_search(covariance=problem.sigma,
                                                 lambda0=lam0)
            else:
                graph, score = exhaustive_search(problem.data, lambda0=lam0)
        # threshold parity: discrete outputs are thresholded on refit coefficients
        coef = problem.refit(graph)
        graph = graph_of_weights(threshold(coef, tau))
        return graph, score, score, True
    if name == "empty":
        return Digraph(problem.truth.d), None, None, True
    if name == "random-dag":
        rng = np.random.default_rng(_seed_for(seed, "random-dag"))
        graph = erdos_renyi_dag(problem.truth.d, 1.0, seed=rng)
        return graph, None, None, True
    raise ValueError(f"unknown method {name!r}")


def run_task(cfg: ExperimentConfig, method: MethodConfig | None, cell: dict,
             seed: int) -> ResultRow:
    row = ResultRow(kind=cfg.kind, population=cfg.population, seed=seed, **cell)
    t0 = time.perf_counter()
    try:
        if cfg.kind == "counterexample":
            sem = Sem(TRIANGLE_TRUTH_WEIGHTS, TRIANGLE_TRUTH_NOISE)
            truth = sem.graph()
            target_edges = TRIANGLE_WRONG_EDGES
            row.d = sem.d
        else:
            sem, truth = _simulate_cell(cfg, row.d, row.graph_k, row.alpha,
                                        row.noise_r, seed)
            target_edges = truth.edges
        row.n_edges_true = truth.n_edges()
        row.noise_ratio = mx.noise_ratio(sem.noise_variances)
        row.noise_ratio_standardized = mx.standardized_noise_ratio(sem)
        if sem.d <= 20 and truth.n_edges() > 0:
            row.varsortability = mx.varsortability(
                sem.weights, population_covariance(sem))

        if cfg.kind == "standardized-ratio":
            row.wall_time = time.perf_counter() - t0
            return row

        problem = _Problem(sem, truth, row.n, cfg.population,
                           seed=_seed_for(seed, "data", row.d, row.graph_k,
                                          row.alpha, row.noise_r, row.n))
        if cfg.kind == "counterexample" and not cfg.population:
            var = problem.data.var(axis=0)
            row.var_order_ok = bool(var[0] > var[1] > var[2])
        elif cfg.kind == "counterexample":
            var = np.diag(problem.sigma)
            row.var_order_ok = bool(var[0] > var[1] > var[2])

        row.threshold = float(method.overrides.get("threshold", 0.1))
        est, score_final, score_raw, converged = _estimate(method, problem, seed)
        row.score_final = score_final
        row.score_raw = score_raw
        row.converged = converged
        row.n_edges_est = est.n_edges()
        row.exact_match = est.edges == truth.edges
        row.target_match = est.edges == target_edges
        row.shd = float(mx.shd(est, truth))
        row.shd_cpdag = float(mx.shd_cpdag(to_cpdag(est), to_cpdag(truth)))
        for mode, keys in (("skeleton", ("f1_skeleton", "recall_skeleton",
                                         "precision_skeleton")),
                           ("dag-edges", ("f1_dag", "recall_dag",
                                          "precision_dag"))):
            f1, rec, prec = mx.f1_recall(est, truth, mode=mode)
            setattr(row, keys[0], f1)
            setattr(row, keys[1], rec)
            setattr(row, keys[2], prec)
        row.f1_arrows = mx.f1_recall(est, truth, mode="arrows")[0]
    except Exception as exc:  # noqa: BLE001 - a failed cell must not kill the grid
        row.failed = True
        row.error = f"{type(exc).__name__}: {exc}"
    row.wall_time = time.perf_counter() - t0
    return row


def build_tasks(cfg: ExperimentConfig):
    """Cross product of the config grids; one task per (cell, seed)."""
    tasks = []
    thresholds = cfg.thresholds or (None,)
    for d in cfg.d:
        for k in cfg.graph_k:
            for alpha in cfg.alpha:
                for r in cfg.noise_r:
                    for n in cfg.n:
                        for method in (cfg.methods or (None,)):
                            for tau in thresholds:
                                label = method.label if method else "none"
                                m = method
                                if method and tau is not None:
                                    ov = dict(method.overrides,
                                              threshold=float(tau))
                                    label = f"{method.label}@tau={tau:g}"
                                    m = MethodConfig(method.name, label, ov)
                                cell = dict(d=d, graph_k=k, alpha=alpha,
                                            noise_kind=cfg.noise_kind,
                                            noise_r=r, n=n, method=label)
                                for seed in cfg.seeds:
                                    tasks.append((m, cell, seed))
    return tasks


def _execute(args):
    cfg, method, cell, seed = args
    return run_task(cfg, method, cell, seed)


def run(cfg: ExperimentConfig, workers: int = 1):
    """Execute the grid; returns the list of ResultRows in task order."""
    tasks = build_tasks(cfg)
    args = [(cfg, m, cell, seed) for m, cell, seed in tasks]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_execute, args, chunksize=1))
    else:
        rows = [_execute(a) for a in args]
    return rows


def rows_to_csv(rows, path=None) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for row in rows:
        record = asdict(row)
        writer.writerow({k: _fmt(record[k]) for k in CSV_COLUMNS})
    text = buf.getvalue()
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return value


def rows_from_csv(path):
    """Parse a results CSV back into ResultRows (round-trip safe)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"CSV is missing columns: {sorted(missing)}")
        rows = []
        for rec in reader:
            rows.append(ResultRow(**{k: _parse(k, rec[k]) for k in CSV_COLUMNS}))
    return rows


_BOOL_FIELDS = {"population", "converged", "exact_match", "target_match",
                "var_order_ok", "failed"}
_INT_FIELDS = {"d", "n", "seed", "n_edges_true", "n_edges_est"}
_STR_FIELDS = {"kind", "noise_kind", "method", "error"}


def _parse(key, text):
    if text == "":
        return None if key not in _STR_FIELDS else ""
    if key in _STR_FIELDS:
        return text
    if key in _BOOL_FIELDS:
        return text == "true"
    if key in _INT_FIELDS:
        return int(text)
    return float(text)


def summarize(rows):
    """Mean +/- standard error per (cell, method), as a pandas DataFrame."""
    import pandas as pd

    frame = pd.DataFrame([asdict(r) for r in rows])
    group_cols = ["kind", "d", "graph_k", "alpha", "noise_kind", "noise_r",
                  "n", "population", "method", "threshold"]
    ok = frame[~frame["failed"]]
    if ok.empty:
        return pd.DataFrame()
    grouped = ok.groupby(group_cols, dropna=False)
    out = {}
    for col in METRIC_COLUMNS + ["exact_match", "target_match"]:
        means = grouped[col].apply(lambda s: s.dropna().astype(float).mean())
        sems = grouped[col].apply(
            lambda s: s.dropna().astype(float).sem(ddof=1)
            if s.dropna().size > 1 else 0.0)
        out[f"{col}_mean"] = means
        out[f"{col}_se"] = sems
    summary = pd.DataFrame(out).reset_index()
    counts = grouped.size().rename("n_runs").reset_index()
    fails = (frame.groupby(group_cols, dropna=False)["failed"].sum()
             .rename("n_failed").reset_index())
    summary = summary.merge(counts, on=group_cols)
    summary = summary.merge(fails, on=group_cols, how="left")
    return summary


def summary_table(summary, metrics=("shd", "shd_cpdag", "f1_skeleton",
                                    "recall_dag")) -> str:
    """Aligned text table of selected metrics."""
    if summary.empty:
        return "(no successful runs)"
    cols = ["method", "d", "graph_k", "alpha", "noise_r", "n", "threshold"]
    lines = []
    header = [f"{c:>12}" for c in cols]
    for m in metrics:
        header.append(f"{m + ' (mean+/-se)':>24}")
    lines.append(" ".join(header))
    for _, rec in summary.iterrows():
        cells = [f"{str(rec[c])[:12]:>12}" for c in cols]
        for m in metrics:
            mean, se = rec.get(f"{m}_mean"), rec.get(f"{m}_se")
            txt = "-" if mean is None or (isinstance(mean, float) and np.isnan(mean)) \
                else f"{mean:.3f} +/- {se:.3f}"
            cells.append(f"{txt:>24}")
        lines.append(" ".join(cells))
    return "\n".join(lines)
