import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import SMALL, permuted
from cpkit import (
    BORGATTI,
    BRUSCO,
    BRUSCO_MISFIT,
    AnnealSchedule,
    BlockParams,
    ConstantDegreesWarning,
    CoreAssignment,
    CucuringuConfig,
    Graph,
    complete_graph,
    cycle_graph,
    cucuringu,
    degree_gap_estimator,
    generate_er,
    generate_gnm,
    generate_sbm2,
    greedy_restarts,
    greedy_switch,
    ideal_cp_graph,
    lip_solver,
    node_order_sweep,
    path_core_scores,
    simulated_annealing,
    star_graph,
)
from cpkit.optimize import anneal_restarts, degree_order, from_scorer, prefix_values


def all_values(g, obj):
    """Objective of every labeling, computed from block counts in bulk."""
    L = oracles.all_labelings(g.n).astype(np.int64)
    a = oracles.dense(g).astype(np.int64)
    K = L.sum(axis=1)
    mcc = ((L @ a) * L).sum(axis=1) // 2
    P = 1 - L
    mpp = ((P @ a) * P).sum(axis=1) // 2
    with np.errstate(all="ignore"):
        v = obj.counts(g.n, g.m, K, mcc, mpp)
    return L, np.where(np.isnan(v), -np.inf, v)


def exhaustive_optimum(g, obj):
    L, v = all_values(g, obj)
    return float(v.max()), L[v >= v.max() - 1e-12 * max(1, abs(v.max()))]


def smallest_optima(arg):
    """Optimal labelings of minimum core size (the tie-break target)."""
    K = arg.sum(axis=1)
    return arg[K == K.min()]


# -- greedy -----------------------------------------------------------------


def test_greedy_misfit_recovers_ideal_from_all_periphery():
    g = ideal_cp_graph(8, 3)
    out = greedy_switch(g, BRUSCO_MISFIT, init=np.zeros(8, dtype=np.int8))
    best, arg = exhaustive_optimum(g, BRUSCO_MISFIT)
    assert out.core.tolist() == [0, 1, 2]
    small = smallest_optima(arg)
    assert len(small) == 1 and small[0].tolist() == out.labels.tolist()


def test_greedy_fixed_point_returns_init():
    g = ideal_cp_graph(8, 3)
    planted = CoreAssignment.from_core(8, [0, 1, 2])
    for obj in (BRUSCO_MISFIT, BORGATTI):
        assert greedy_switch(g, obj, init=planted) == planted
        assert greedy_switch(g, obj, init=planted, return_trace=True)[0] == planted


def test_restarts_dominate_single_runs():
    g = generate_er(20, 0.15, seed=5)
    best = greedy_restarts(g, BORGATTI, restarts=10, seed=11)
    from cpkit import _rng

    singles = [greedy_switch(g, BORGATTI, seed=s) for s in _rng.spawn(11, 10)]
    assert BORGATTI(g, best) >= max(BORGATTI(g, s) for s in singles)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_greedy_trace_strictly_increasing(name):
    g = SMALL[name]
    for s in range(3):
        out, trace = greedy_switch(g, BORGATTI, seed=s, return_trace=True)
        finite = [t for t in trace if math.isfinite(t)]
        assert all(b > a for a, b in zip(finite, finite[1:]))
        assert trace[-1] == pytest.approx(BORGATTI(g, out)) or not math.isfinite(trace[-1])


@pytest.mark.parametrize("name", sorted(SMALL))
@pytest.mark.parametrize("obj", [BORGATTI, BRUSCO, BRUSCO_MISFIT, cucuringu(CucuringuConfig(0.3, 1.0))], ids=lambda o: o.name)
def test_compiled_greedy_matches_python_path(name, obj):
    g = SMALL[name]
    for s in range(3):
        fast = greedy_switch(g, obj, seed=s)
        slow, _ = greedy_switch(g, obj, seed=s, return_trace=True)
        assert fast == slow


@pytest.mark.parametrize("name", sorted(SMALL))
@pytest.mark.parametrize("obj", [BRUSCO, BRUSCO_MISFIT, BORGATTI], ids=lambda o: o.name)
def test_searchers_attain_exhaustive_optimum(name, obj):
    g = SMALL[name]
    best, _ = exhaustive_optimum(g, obj)
    tol = 1e-12 * max(1, abs(best))
    greedy = greedy_restarts(g, obj, restarts=20, seed=1)
    sa = simulated_annealing(g, obj, schedule=AnnealSchedule(t0=2.0, cooling=0.97, steps=400), seed=1)
    assert obj(g, greedy) >= best - tol
    assert obj(g, sa) >= best - tol


def test_generic_scorer_path_matches_counts_path():
    g = SMALL["er10_2"]
    slow = from_scorer("rho", BORGATTI.scorer)
    for s in range(3):
        assert greedy_switch(g, slow, seed=s) == greedy_switch(g, BORGATTI, seed=s)


# -- annealing ----------------------------------------------------------------


def test_anneal_zero_temperature_never_worse_than_init():
    g = generate_er(25, 0.2, seed=3)
    cold = AnnealSchedule(t0=1e-12, cooling=0.5, steps=200, t_stop=1e-13)
    for s in range(5):
        init = np.random.default_rng(s).integers(0, 2, 25)
        for obj in (BORGATTI, BRUSCO_MISFIT):
            out = simulated_annealing(g, obj, init=init, schedule=cold, seed=s)
            assert obj(g, out) >= obj(g, init)


def test_anneal_matches_exhaustive_on_ideal_10_3():
    g = ideal_cp_graph(10, 3)
    for obj in (BRUSCO, BRUSCO_MISFIT):
        best, arg = exhaustive_optimum(g, obj)
        out = simulated_annealing(g, obj, seed=4)
        assert obj(g, out) == pytest.approx(best)
        assert any(np.array_equal(out.labels, a) for a in arg)
    assert simulated_annealing(g, BRUSCO_MISFIT, seed=4).core.tolist() == [0, 1, 2]


def test_anneal_deterministic():
    g = generate_er(30, 0.2, seed=8)
    for obj in (BORGATTI, from_scorer("rho", BORGATTI.scorer)):
        sched = AnnealSchedule(steps=50)
        assert simulated_annealing(g, obj, schedule=sched, seed=9) == simulated_annealing(g, obj, schedule=sched, seed=9)
    assert anneal_restarts(g, BORGATTI, restarts=3, seed=2) == anneal_restarts(g, BORGATTI, restarts=3, seed=2)


def test_compiled_anneal_matches_python_path():
    g = SMALL["sbm12_1"]
    slow = from_scorer("rho", BORGATTI.scorer)
    sched = AnnealSchedule(t0=0.5, cooling=0.8, steps=40)
    for s in range(3):
        assert simulated_annealing(g, BORGATTI, schedule=sched, seed=s) == simulated_annealing(g, slow, schedule=sched, seed=s)


def test_schedule_validation():
    from cpkit import DataError

    for bad in (dict(t0=0), dict(cooling=1.0), dict(cooling=0.0), dict(steps=0), dict(t_stop=0)):
        with pytest.raises(DataError):
            AnnealSchedule(**bad)
    assert AnnealSchedule(t0=1, cooling=0.5, t_stop=0.2).temperatures().tolist() == [1, 0.5, 0.25]


# -- node-order sweep -----------------------------------------------------------


def test_path_core_sweep_on_planted_graph():
    g, planted = generate_sbm2(3, 7, BlockParams(0.3, 0.9, 0.9, 0.05), seed=2)
    obj = cucuringu(CucuringuConfig(beta=0.3, gamma=1.0))
    order = np.argsort(-path_core_scores(g), kind="stable")
    out = node_order_sweep(g, order, obj)
    _, arg = exhaustive_optimum(g, obj)
    small = smallest_optima(arg)
    assert out == planted
    assert len(small) == 1 and np.array_equal(small[0], planted.labels)


def test_constant_objective_gives_single_node_core():
    g = generate_er(12, 0.3, seed=0)
    flat = from_scorer("flat", lambda g, c: 1.0)
    order = np.arange(12)[::-1]
    assert node_order_sweep(g, order, flat).core.tolist() == [11]


def test_prefix_values_counts_and_generic_agree():
    g = generate_er(15, 0.3, seed=6)
    order = np.random.default_rng(0).permutation(15)
    fast = prefix_values(g, order, BORGATTI)
    slow = prefix_values(g, order, from_scorer("rho", BORGATTI.scorer))
    assert np.allclose(fast, slow, rtol=1e-12, atol=0)


# -- degree-prefix solver -----------------------------------------------------------


def test_lip_star():
    assert lip_solver(star_graph(5)).core.tolist() == [0]


def test_lip_ideal_is_global_optimum():
    g = ideal_cp_graph(8, 3)
    out = lip_solver(g)
    _, arg = exhaustive_optimum(g, BRUSCO_MISFIT)
    small = smallest_optima(arg)
    assert out.core.tolist() == [0, 1, 2]
    assert len(small) == 1 and np.array_equal(small[0], out.labels)


def test_lip_regular_graph_matches_prefix_scan():
    for g in (cycle_graph(9), complete_graph(6)):
        order = degree_order(g)
        misfits = [oracles.misfit_loop(oracles.dense(g), CoreAssignment.from_core(g.n, order[:K]).labels) for K in range(1, g.n)]
        assert lip_solver(g).K == int(np.argmin(misfits)) + 1


@pytest.mark.parametrize("name", sorted(SMALL))
def test_lip_equals_degree_sweep(name):
    g = SMALL[name]
    assert lip_solver(g) == node_order_sweep(g, degree_order(g), BRUSCO_MISFIT)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 40), st.floats(0.0, 1.0), st.integers(0, 2**31))
def test_lip_equals_degree_sweep_random(n, p, seed):
    g = generate_er(n, p, seed=seed)
    assert lip_solver(g) == node_order_sweep(g, degree_order(g), BRUSCO_MISFIT)


def test_lip_is_fast():
    import time

    g = generate_gnm(50_000, 500_000, seed=1)
    t = time.perf_counter()
    lip_solver(g)
    assert time.perf_counter() - t < 1.0


# -- degree gap ---------------------------------------------------------------


def test_degree_gap_example():
    # two joined hubs of degree 9 with pendant leaves; the sequence is (1, ..., 1, 9, 9)
    edges = [(3, 4)] + [(3, v) for v in (0, 1, 2, 5, 6, 7, 8, 9)] + [(4, v) for v in range(10, 18)]
    g = Graph.from_edges(edges, n=18)
    assert sorted(set(g.degrees.tolist())) == [1, 9]
    assert g.degrees[[3, 4]].tolist() == [9, 9]
    assert degree_gap_estimator(g).core.tolist() == [3, 4]
    assert degree_gap_estimator(g, high_degree_core=False).K == 16


def test_degree_gap_complete_graph_warns():
    with pytest.warns(ConstantDegreesWarning):
        out = degree_gap_estimator(complete_graph(6))
    assert out.K == 0


def test_degree_gap_planted_sbm():
    g, planted = generate_sbm2(20, 80, BlockParams(0.2, 0.8, 0.4, 0.05), seed=9)
    out = degree_gap_estimator(g)
    assert np.mean(out.labels == planted.labels) >= 0.95


def test_degree_gap_ties_pick_smaller_core():
    # sorted degrees 1,1,2,2: gaps 0,1,0 -> unique; 1,2,3: equal gaps -> split at the top
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (2, 4), (3, 4), (2, 5)])
    d = g.degrees
    out = degree_gap_estimator(g)
    assert out.core.tolist() == np.flatnonzero(d == d.max()).tolist()


# -- relabelling and determinism -------------------------------------------------


@pytest.mark.parametrize("seed", range(4))
def test_lip_commutes_with_relabelling(seed):
    g = ideal_cp_graph(12, 4)
    h, perm = permuted(g, seed)
    assert sorted(lip_solver(h).core.tolist()) == sorted(perm[:4].tolist())


def test_greedy_restarts_deterministic_and_thread_invariant(monkeypatch):
    g = generate_er(40, 0.15, seed=2)
    a = greedy_restarts(g, BORGATTI, restarts=8, seed=3)
    monkeypatch.setenv("CPKIT_THREADS", "1")
    b = greedy_restarts(g, BORGATTI, restarts=8, seed=3)
    monkeypatch.setenv("CPKIT_THREADS", "4")
    c = greedy_restarts(g, BORGATTI, restarts=8, seed=3)
    assert a == b == c
