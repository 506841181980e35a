"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v`; the criterion lines are echoed
in the terminal summary (or live with -s).  Tolerances are fixed here, not
calibrated at runtime.
"""

import time
from functools import lru_cache

import numpy as np
import pytest

import lineardag as ld
from lineardag.constraints import ConstraintSpec, h_value, spectral_radius
from lineardag.graphs import all_dags, graph_of_weights, is_acyclic, mec_key, to_cpdag
from lineardag.scores import (PenaltySpec, ScoreSpec, golem_objective,
                              least_squares_population, score_value_and_grad)
from lineardag.sem import (Sem, design_from_covariance, population_covariance,
                           sample)
from lineardag.simulate import (erdos_renyi_dag, sample_noise_nv,
                                sample_weights)
from lineardag.solvers.continuous import (InitSpec, SolverSpec,
                                          refit_coefficients, solve, threshold)
from lineardag.solvers.discrete import dag_score, exhaustive_search, gds
from lineardag.bench.verify import verify_counterexample_family, verify_low_varsortability_family
from tests.conftest import (ACCEPTANCE_LINES, TRIANGLE_TRUTH_B, TRIANGLE_WRONG_B,
                            TRIANGLE_TRUTH_OMEGA, TRIANGLE_WRONG_EDGES, random_sem)


def report(number, name, passed, detail=""):
    mark = "PASS" if passed else "FAIL"
    line = f"[{mark}] criterion {number}: {name}" + (f"  [{detail}]" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


HARD_LS = SolverSpec(strategy="quadratic-penalty",
                     score=ScoreSpec("least-squares"), threshold=0.1)
SOFT_EV = SolverSpec(strategy="soft",
                     score=ScoreSpec("golem-ev", PenaltySpec("l1", 0.02),
                                     include_logdet_term=True),
                     soft_lambda2=5.0, threshold=0.1)
SOFT_NV = SolverSpec(strategy="soft",
                     score=ScoreSpec("golem-nv", PenaltySpec("l1", 0.002),
                                     include_logdet_term=True),
                     soft_lambda2=5.0, threshold=0.1)


def ev_instance(seed, d=15, k=1.0, alpha=1.0, n=10**5):
    g = ld.erdos_renyi_dag(d, k, seed=(101, seed))
    w = sample_weights(g, alpha, seed=(102, seed))
    sem = Sem(w, np.ones(d))
    return g, sample(sem, n, seed=(103, seed, n))


@lru_cache(maxsize=16)
def nv_instance(seed, d=15, r=16.0, n=10**5):
    g = ld.erdos_renyi_dag(d, 1.0, seed=(111, seed))
    w = sample_weights(g, 1.0, seed=(112, seed))
    omega = sample_noise_nv(d, r, seed=(113, seed))
    sem = Sem(w, omega)
    return g, sample(sem, n, seed=(114, seed, int(r)))


def test_criterion_1_counterexample_reproduction(triangle_sem, triangle_sigma):
    t0 = time.perf_counter()
    n_seeds = 30
    hits = {"exhaustive": 0, "hard-ls": 0, "golem-ev": 0}
    pop_hits = dict.fromkeys(hits, 0)
    var_ok = 0

    # population covariance mode (exact large-sample limit)
    design = design_from_covariance(triangle_sigma)
    g, _ = exhaustive_search(covariance=triangle_sigma, lambda0=0.0)
    pop_hits["exhaustive"] = n_seeds * (g.edges == TRIANGLE_WRONG_EDGES)
    pop_hits["hard-ls"] = n_seeds * (
        solve(design, HARD_LS).graph().edges == TRIANGLE_WRONG_EDGES)
    pop_hits["golem-ev"] = n_seeds * (
        solve(design, SOFT_EV).graph().edges == TRIANGLE_WRONG_EDGES)

    for seed in range(n_seeds):
        x = sample(triangle_sem, 10**5, seed=(200, seed))
        var = x.var(axis=0)
        var_ok += bool(var[0] > var[1] > var[2])
        g, _ = exhaustive_search(x, lambda0=0.0)
        hits["exhaustive"] += g.edges == TRIANGLE_WRONG_EDGES
        hits["hard-ls"] += solve(x, HARD_LS).graph().edges == TRIANGLE_WRONG_EDGES
        hits["golem-ev"] += solve(x, SOFT_EV).graph().edges == TRIANGLE_WRONG_EDGES

    elapsed = time.perf_counter() - t0
    ok = (all(h >= 0.95 * n_seeds for h in hits.values())
          and all(h >= 0.95 * n_seeds for h in pop_hits.values())
          and var_ok == n_seeds and elapsed < 120)
    report(1, "three-variable counterexample: every solver family returns the wrong triangle",
           ok, f"sampled {hits}, population {pop_hits}, "
               f"var order {var_ok}/{n_seeds}, {elapsed:.0f}s")


def test_criterion_2_closed_form_score_identities(triangle_sem, triangle_sigma):
    err_true = abs(least_squares_population(triangle_sem.weights,
                                            triangle_sigma) - 1.0)
    err_hat = abs(least_squares_population(TRIANGLE_WRONG_B, triangle_sigma)
                  - 23 / 24)
    rng = np.random.default_rng(42)
    max_err = 0.0
    for _ in range(100):
        sem = random_sem(rng, int(rng.integers(2, 9)))
        sigma = population_covariance(sem)
        got = least_squares_population(sem.weights, sigma)
        max_err = max(max_err, abs(got - 0.5 * sem.noise_variances.sum()))
    ok = err_true < 1e-10 and err_hat < 1e-10 and max_err < 1e-10
    report(2, "closed-form score identities (1, 23/24, tr(Omega)/2)", ok,
           f"errs {err_true:.2g}, {err_hat:.2g}, {max_err:.2g}")


def test_criterion_3_counterexample_family():
    rep = verify_counterexample_family(range(3, 11), delta=1e-3, draws=100, seed=0)
    report(3, "constructed counterexample verified for d in 3..10", rep.ok,
           f"{sum(p for _, p, _ in rep.checks)}/{len(rep.checks)} checks")


def test_criterion_4_low_varsortability_family():
    rep = verify_low_varsortability_family(n_graphs=50, d_max=5, sigma2=4.0, lambda0=0.01, seed=0)
    report(4, "low-varsortability construction verified on 50 random DAGs",
           rep.ok, f"{sum(p for _, p, _ in rep.checks)}/{len(rep.checks)} checks")


def test_criterion_5_standardized_noise_ratio():
    t0 = time.perf_counter()

    def mean_ratio(d, degree, n_seeds):
        k = degree / 2.0  # degree = average undirected node degree
        vals = []
        for s in range(n_seeds):
            g = erdos_renyi_dag(d, k, seed=(301, d, degree, s))
            w = sample_weights(g, 1.0, seed=(302, d, degree, s))
            vals.append(ld.standardized_noise_ratio(Sem(w, np.ones(d))))
        return float(np.mean(vals))

    # r' is heavy-tailed: the [1500, 2700] band is the 1000-simulation
    # confidence region (a 100-seed mean has standard error ~600 and misses
    # the band for a third of seed blocks), so the band cell runs 1000 seeds
    target = mean_ratio(50, 4, n_seeds=1000)
    monotone = True
    for d in (10, 20, 50):
        series = [mean_ratio(d, degree, n_seeds=100) for degree in (1, 2, 3, 4)]
        monotone &= all(series[i] < series[i + 1] for i in range(3))
    elapsed = time.perf_counter() - t0
    ok = 1500 <= target <= 2700 and monotone and elapsed < 60
    report(5, "standardized noise ratio magnitude and monotonicity", ok,
           f"d=50 degree-4 mean r'={target:.0f} (band [1500, 2700]), "
           f"monotone={monotone}, {elapsed:.0f}s")


def test_criterion_6_ev_degradation_with_noise_ratio():
    mean_shd = {m: {} for m in ("hard-ls", "golem-ev", "gds")}
    for r in (1.0, 16.0, 256.0):
        shds = {m: [] for m in mean_shd}
        for seed in range(10):
            if r == 1.0:
                g, x = ev_instance(seed)
            else:
                g, x = nv_instance(seed, r=r)
            shds["hard-ls"].append(ld.shd(solve(x, HARD_LS).graph(), g))
            shds["golem-ev"].append(ld.shd(solve(x, SOFT_EV).graph(), g))
            est = gds(x, lambda0=0.01, seed=seed)
            est = graph_of_weights(threshold(refit_coefficients(est, x), 0.1))
            shds["gds"].append(ld.shd(est, g))
        for m in mean_shd:
            mean_shd[m][r] = float(np.mean(shds[m]))
    increasing = all(mean_shd[m][1.0] < mean_shd[m][16.0] < mean_shd[m][256.0]
                     for m in mean_shd)
    small_at_ev = all(mean_shd[m][1.0] <= 3.0 for m in mean_shd)
    report(6, "equal-variance methods degrade as the noise ratio grows",
           increasing and small_at_ev,
           "; ".join(f"{m}: " + "->".join(f"{mean_shd[m][r]:.1f}"
                                          for r in (1.0, 16.0, 256.0))
                     for m in mean_shd))


def _solve_nv(x, init: InitSpec, seed=0):
    spec = SolverSpec(strategy="soft", score=SOFT_NV.score, soft_lambda2=5.0,
                      threshold=0.1, init=init)
    return solve(x, spec, seed=seed)


def test_criterion_7_nv_initialization_dependence():
    zero, oracle, gds_init = [], [], []
    uniform = {eps: [] for eps in (0.01, 0.05, 0.1)}
    for seed in range(10):
        g, x = nv_instance(seed)
        truth_cpdag = to_cpdag(g)

        def shd_of(res):
            return ld.shd_cpdag(to_cpdag(res.graph()), truth_cpdag)

        zero.append(shd_of(_solve_nv(x, InitSpec("zero"))))
        oracle.append(shd_of(_solve_nv(
            x, InitSpec("matrix", matrix=refit_coefficients(g, x)))))
        g_greedy = gds(x, lambda0=0.01, seed=seed)
        gds_init.append(shd_of(_solve_nv(
            x, InitSpec("matrix", matrix=refit_coefficients(g_greedy, x)))))
        for eps in uniform:
            uniform[eps].append(shd_of(_solve_nv(
                x, InitSpec("uniform", epsilon=eps, restarts=10), seed=seed)))

    mz, mo, mg = (float(np.mean(v)) for v in (zero, oracle, gds_init))
    separation = mz >= 2 * mo and mz >= 2 * mg and mz > 0
    random_no_better = all(float(np.mean(v)) >= mo for v in uniform.values())
    report(7, "likelihood solver quality hinges on the initial solution",
           separation and random_no_better,
           f"zero={mz:.1f} oracle={mo:.1f} gds-init={mg:.1f} "
           + " ".join(f"eps{eps}={np.mean(v):.1f}" for eps, v in uniform.items()))


def test_criterion_8_constraint_interchangeability():
    rng = np.random.default_rng(77)
    equiv_ok = 0
    trials = 1000
    for _ in range(trials):
        d = int(rng.integers(2, 9))
        b = rng.normal(size=(d, d)) * (rng.random((d, d)) < 0.4)
        np.fill_diagonal(b, 0)
        acyclic = is_acyclic(graph_of_weights(b))
        kinds_agree = True
        for kind in ("exp", "binomial", "logdet", "tmpi"):
            spec = (ConstraintSpec("logdet", s=spectral_radius(b * b) + 1.0)
                    if kind == "logdet" else ConstraintSpec(kind))
            kinds_agree &= (abs(h_value(b, spec)) < 1e-10) == acyclic
        equiv_ok += kinds_agree

    means = {}
    for kind in ("exp", "binomial", "logdet", "tmpi"):
        shds = []
        for seed in range(10):
            g, x = nv_instance(seed)
            spec = SolverSpec(strategy="soft", score=SOFT_NV.score,
                              soft_lambda2=5.0, threshold=0.1,
                              constraint=ConstraintSpec(kind))
            shds.append(ld.shd_cpdag_of_dags(solve(x, spec).graph(), g))
        means[kind] = float(np.mean(shds))
    baseline = means["exp"]
    no_rescue = all(v >= 0.5 * baseline for v in means.values())
    ok = equiv_ok == trials and no_rescue and baseline > 0
    report(8, "acyclicity variants agree and none rescues the solver",
           ok, f"h=0 iff acyclic {equiv_ok}/{trials}; shd-cpdag "
               + " ".join(f"{k}={v:.1f}" for k, v in means.items()))


def test_criterion_9_gradient_suite():
    rng = np.random.default_rng(9)
    worst = 0.0

    def fd_check(fun, b, analytic, mask=None):
        nonlocal worst
        step = 1e-6
        fd = np.zeros_like(b)
        for idx in np.ndindex(b.shape):
            plus, minus = b.copy(), b.copy()
            plus[idx] += step
            minus[idx] -= step
            fd[idx] = (fun(plus) - fun(minus)) / (2 * step)
        if mask is None:
            mask = np.ones(b.shape, dtype=bool)
        err = (np.abs(analytic - fd)[mask].max()
               / max(1.0, np.abs(analytic[mask]).max()))
        worst = max(worst, err)
        return err

    score_specs = [
        ScoreSpec("least-squares"),
        ScoreSpec("least-squares", PenaltySpec("l1", 0.05)),
        ScoreSpec("golem-ev", PenaltySpec("scad", 0.05),
                  include_logdet_term=True),
        ScoreSpec("golem-nv", PenaltySpec("mcp", 0.05),
                  include_logdet_term=True),
    ]
    n_points = 0
    for spec in score_specs:
        for _ in range(25):
            d = int(rng.integers(2, 8))
            x = rng.normal(size=(60, d))
            b = rng.normal(size=(d, d)) * 0.3
            np.fill_diagonal(b, 0)
            _, grad = score_value_and_grad(b, x, spec)
            offdiag = ~np.eye(d, dtype=bool)
            err = fd_check(lambda m: score_value_and_grad(m, x, spec)[0],
                           b, grad, mask=offdiag)
            assert err < 1e-5, (spec.kind, err)
            n_points += 1

    for kind in ("exp", "binomial", "logdet", "tmpi"):
        for _ in range(25):
            d = int(rng.integers(2, 8))
            b = rng.normal(size=(d, d)) * 0.4
            np.fill_diagonal(b, 0)
            spec = (ConstraintSpec("logdet", s=spectral_radius(b * b) + 1.0)
                    if kind == "logdet" else ConstraintSpec(kind))
            value, grad = ld.h_value_and_grad(b, spec)
            err = fd_check(lambda m: h_value(m, spec), b, grad)
            assert err < 1e-5, (kind, err)
            n_points += 1

    report(9, "analytic gradients match central finite differences",
           worst < 1e-5, f"{n_points} points, worst rel err {worst:.2e}")


def test_criterion_10_oracle_equivalence():
    rng = np.random.default_rng(10)
    search_ok = 0
    for trial in range(20):
        d = int(rng.integers(2, 6))
        sem = random_sem(rng, d, density=0.5)
        x = sample(sem, 2000, seed=(400, trial))
        g_ex, s_ex = exhaustive_search(x, lambda0=0.01)
        g_astar = ld.astar_search(x, lambda0=0.01)
        same_score = abs(dag_score(g_astar, x, lambda0=0.01) - s_ex) < 1e-10
        search_ok += same_score and g_astar.edges == g_ex.edges

    cpdag_ok = True
    for d in (2, 3, 4):
        classes = {}
        for g in all_dags(d):
            classes.setdefault(mec_key(g), []).append(to_cpdag(g))
        rendered = set()
        for cpdags in classes.values():
            first = cpdags[0]
            cpdag_ok &= all(c == first for c in cpdags[1:])
            key = (first.directed, first.undirected)
            cpdag_ok &= key not in rendered
            rendered.add(key)

    ok = search_ok == 20 and cpdag_ok
    report(10, "A* matches exhaustive search; CPDAGs match brute-force MEC "
               "grouping", ok, f"A* {search_ok}/20, CPDAG classes ok={cpdag_ok}")


def test_criterion_11_thresholding_observations():
    recalls = {0.1: [], 0.3: []}
    shds = {0.05: [], 0.3: []}
    for seed in range(10):
        g, x = ev_instance(seed, alpha=0.25, n=10**5)
        res = solve(x, HARD_LS)
        for tau in recalls:
            est = graph_of_weights(threshold(res.b_raw, tau))
            recalls[tau].append(ld.f1_recall(est, g, mode="dag-edges")[1])
        g2, x2 = ev_instance(seed, alpha=0.25, n=100)
        res2 = solve(x2, HARD_LS)
        for tau in shds:
            est = graph_of_weights(threshold(res2.b_raw, tau))
            shds[tau].append(ld.shd(est, g2))
    large_n = float(np.mean(recalls[0.3])) < float(np.mean(recalls[0.1]))
    small_n = float(np.mean(shds[0.3])) < float(np.mean(shds[0.05]))
    report(11, "threshold choice trades recall against false discoveries",
           large_n and small_n,
           f"n=1e5 recall tau=.3 {np.mean(recalls[0.3]):.2f} < tau=.1 "
           f"{np.mean(recalls[0.1]):.2f}; n=100 shd tau=.3 "
           f"{np.mean(shds[0.3]):.1f} < tau=.05 {np.mean(shds[0.05]):.1f}")


def test_criterion_12_sparsity_penalties():
    means = {}
    for pen in ("l1", "scad", "mcp"):
        hard_list, soft_list = [], []
        for seed in range(10):
            g, x = ev_instance(seed, k=2.0, n=1600)
            hard = SolverSpec(strategy="quadratic-penalty",
                              score=ScoreSpec("least-squares",
                                              PenaltySpec(pen, 0.1)),
                              threshold=0.1)
            hard_list.append(ld.shd(solve(x, hard).graph(), g))
            soft = SolverSpec(strategy="soft",
                              score=ScoreSpec("golem-ev", PenaltySpec(pen, 0.1),
                                              include_logdet_term=True),
                              soft_lambda2=5.0, threshold=0.1)
            soft_list.append(ld.shd(solve(x, soft).graph(), g))
        means[pen] = (float(np.mean(hard_list)), float(np.mean(soft_list)))
    ok = all(means[p][i] <= means["l1"][i]
             for p in ("scad", "mcp") for i in (0, 1))
    report(12, "concave penalties match or beat the proportional one", ok,
           "; ".join(f"{p}: hard={v[0]:.1f} soft={v[1]:.1f}"
                     for p, v in means.items()))


def test_criterion_13_primary_suite_standalone():
    # the [SECONDARY] renderer is exercised by the frontend package's own
    # tests; here we record that the primary suite has no dependency on it
    import lineardag

    frontend_free = not any("frontend" in (m or "")
                            for m in list(vars(lineardag)))
    report(13, "primary suite runs with no secondary component built",
           frontend_free, "rendering checks live in frontend/ tests")
