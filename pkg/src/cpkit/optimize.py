"""Searches for core assignments that maximize an objective.

An :class:`Objective` wraps a scorer ``(graph, labels) -> float``.  The
built-in block-model objectives also carry a closed form in terms of the core
size and the core-core / periphery-periphery edge counts; with it a greedy
step scores every single flip in one vectorized pass and annealing runs in a
compiled loop.  Any other scorer works too, just more slowly.

Ties are broken toward the lowest node index and the smallest core.
"""
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numba
import numpy as np

from . import _rng
from ._parallel import ordered_map
from .errors import ConstantDegreesWarning, DataError, NumericalError
from .metrics import (
    CoreAssignment,
    CucuringuConfig,
    as_labels,
    block_counts,
    borgatti_rho,
    brusco_from_counts,
    brusco_misfit,
    brusco_Z,
    cucuringu_from_counts,
    cucuringu_objective,
    misfit_from_counts,
    rho_from_counts,
)

_KIND_RHO, _KIND_BRUSCO, _KIND_MISFIT, _KIND_CUCURINGU = 0, 1, 2, 3


@dataclass(frozen=True)
class Objective:
    """A maximized labeling score.

    ``counts``, when given, must compute the same value as ``scorer`` from
    ``(n, m, K, M_cc, M_pp)`` and broadcast over arrays, returning NaN where
    the score is undefined.  Undefined scores count as ``-inf``.
    """

    name: str
    scorer: Callable
    counts: Optional[Callable] = None
    kind: Optional[int] = None
    params: tuple = field(default=(0.0, 0.0))

    def __call__(self, g, c):
        lab = as_labels(c, g.n)
        if self.counts is not None:
            K, mcc, _, mpp = block_counts(g, lab)
            return _finite(float(self.counts(g.n, g.m, K, mcc, mpp)))
        try:
            return float(self.scorer(g, CoreAssignment(lab)))
        except NumericalError:
            return -math.inf

    def flip_values(self, g, lab, links=None):
        """Objective after flipping each node's label individually."""
        if self.counts is None:
            out = np.empty(g.n)
            for i in range(g.n):
                trial = lab.copy()
                trial[i] ^= 1
                out[i] = self(g, trial)
            return out
        if links is None:
            links = _core_links(g, lab)
        K, mcc, _, mpp = block_counts(g, lab)
        sign = np.where(lab == 1, -1, 1)
        vals = self.counts(g.n, g.m, K + sign, mcc + sign * links, mpp - sign * (g.degrees - links))
        return np.where(np.isnan(vals), -np.inf, vals)


def _finite(v):
    return -math.inf if math.isnan(v) else v


def _core_links(g, lab):
    return np.asarray(g.to_csr() @ lab.astype(np.int64)).ravel()


BORGATTI = Objective("borgatti", borgatti_rho, rho_from_counts, _KIND_RHO)
BRUSCO = Objective("brusco", brusco_Z, brusco_from_counts, _KIND_BRUSCO)
BRUSCO_MISFIT = Objective(
    "brusco-misfit",
    lambda g, c: -brusco_misfit(g, c),
    lambda n, m, K, mcc, mpp: -misfit_from_counts(n, m, K, mcc, mpp),
    _KIND_MISFIT,
)


def cucuringu(cfg=CucuringuConfig()):
    return Objective(
        f"cucuringu(beta={cfg.beta}, gamma={cfg.gamma})",
        lambda g, c: cucuringu_objective(g, c, cfg),
        lambda n, m, K, mcc, mpp: cucuringu_from_counts(n, m, K, mcc, mpp, cfg.beta, cfg.gamma),
        _KIND_CUCURINGU,
        (float(cfg.beta), float(cfg.gamma)),
    )


def from_scorer(name, scorer):
    """Objective around an arbitrary ``(graph, CoreAssignment) -> float`` function."""
    return Objective(name, scorer)


def _random_labels(n, seed):
    return _rng.as_generator(seed).integers(0, 2, size=n).astype(np.int8)


def _improves(new, cur, K_new=None, K_cur=None):
    tol = 1e-12 * max(1.0, abs(cur)) if math.isfinite(cur) else 0.0
    if new > cur + tol:
        return True
    if K_new is not None and abs(new - cur) <= tol and K_new < K_cur:
        return True
    return False


# ---------------------------------------------------------------------------
# Greedy label switching
# ---------------------------------------------------------------------------


@numba.njit(cache=True)
def _greedy_counts(kind, beta, gamma, indptr, indices, lab):
    n = lab.size
    m = indices.size // 2
    links = np.zeros(n, np.int64)
    K = 0
    mcc = 0
    mpp = 0
    for i in range(n):
        K += lab[i]
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            if lab[j]:
                links[i] += 1
            if j > i:
                if lab[i] and lab[j]:
                    mcc += 1
                elif not lab[i] and not lab[j]:
                    mpp += 1
    cur = _count_score(kind, n, m, K, mcc, mpp, beta, gamma)
    vals = np.empty(n)
    while n:
        best = 0
        for i in range(n):
            deg = indptr[i + 1] - indptr[i]
            sign = -1 if lab[i] else 1
            vals[i] = _count_score(
                kind, n, m, K + sign, mcc + sign * links[i], mpp - sign * (deg - links[i]), beta, gamma
            )
            if vals[i] > vals[best]:
                best = i
        finite = cur > -np.inf
        tol = 1e-12 * max(1.0, abs(cur)) if finite else 0.0
        strict = vals[best] > cur + tol
        if not strict:
            if not finite:
                break
            best = -1
            for i in range(n):
                if lab[i] and abs(vals[i] - cur) <= tol:
                    best = i
                    break
            if best < 0:
                break
        i = best
        deg = indptr[i + 1] - indptr[i]
        sign = -1 if lab[i] else 1
        K += sign
        mcc += sign * links[i]
        mpp -= sign * (deg - links[i])
        lab[i] = 1 - lab[i]
        for p in range(indptr[i], indptr[i + 1]):
            links[indices[p]] += sign
        if strict:
            cur = vals[i]
    return lab


def greedy_switch(g, obj, init=None, seed=None, return_trace=False):
    """Flip the single most improving label until no flip improves.

    Starts from ``init`` or, if omitted, from uniform random labels drawn
    with ``seed``.  The returned assignment is a local optimum under single
    flips.  Once no flip improves, core nodes whose removal leaves the
    value unchanged are moved to the periphery (lowest index first), which
    breaks ties toward the smaller core.  ``trace`` lists the strictly
    increasing sequence of distinct objective values.
    """
    lab = _random_labels(g.n, seed) if init is None else as_labels(init, g.n).copy()
    if obj.kind is not None and not return_trace:
        beta, gamma = obj.params
        out = _greedy_counts(obj.kind, beta, gamma, g.indptr, g.indices, lab.astype(np.int64))
        return CoreAssignment(out.astype(np.int8))
    cur = obj(g, lab)
    trace = [cur]
    links = _core_links(g, lab) if obj.counts is not None else None
    while g.n:
        vals = obj.flip_values(g, lab, links)
        i = int(np.argmax(vals))
        strict = _improves(vals[i], cur)
        if not strict:
            # equal-value moves only shrink the core, so this terminates
            if not math.isfinite(cur):
                break
            tol = 1e-12 * max(1.0, abs(cur))
            ties = np.flatnonzero((np.abs(vals - cur) <= tol) & (lab == 1))
            if ties.size == 0:
                break
            i = int(ties[0])
        sign = -1 if lab[i] else 1
        lab[i] ^= 1
        if links is not None:
            links[g.neighbors(i)] += sign
        if strict:
            cur = float(vals[i])
            trace.append(cur)
    out = CoreAssignment(lab)
    return (out, trace) if return_trace else out


def greedy_restarts(g, obj, restarts=10, seed=None, init=None):
    """Best of several greedy runs (random starts; the first uses ``init`` if given)."""
    if restarts < 1:
        raise DataError("restarts must be >= 1")
    children = _rng.spawn(seed, restarts)

    def run(k):
        start = init if (k == 0 and init is not None) else None
        return greedy_switch(g, obj, init=start, seed=children[k])

    runs = ordered_map(run, range(restarts))
    best, best_val = None, -math.inf
    for r in runs:
        v = obj(g, r)
        if best is None or _improves(v, best_val, r.K, best.K):
            best, best_val = r, v
    return best


# ---------------------------------------------------------------------------
# Simulated annealing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric cooling from ``t0`` by ``cooling`` until below ``t_stop``.

    ``steps`` proposals per temperature; ``None`` means ``max(100, 10 n)``.
    """

    t0: float = 1.0
    cooling: float = 0.95
    steps: Optional[int] = None
    t_stop: float = 1e-3

    def __post_init__(self):
        if not self.t0 > 0:
            raise DataError("t0 must be positive")
        if not 0 < self.cooling < 1:
            raise DataError("cooling must lie in (0, 1)")
        if self.steps is not None and self.steps < 1:
            raise DataError("steps must be >= 1")
        if not self.t_stop > 0:
            raise DataError("t_stop must be positive")

    def temperatures(self):
        levels = max(1, int(math.floor(math.log(self.t_stop / self.t0) / math.log(self.cooling))) + 1)
        return self.t0 * self.cooling ** np.arange(levels)


@numba.njit(cache=True)
def _count_score(kind, n, m, K, mcc, mpp, beta, gamma):
    if kind == 0:
        N = n * (n - 1) / 2.0
        ideal = K * (K - 1) / 2.0 + K * (n - K)
        am = m / N
        dm = ideal / N
        den = am * (1 - am) * dm * (1 - dm)
        if den <= 0:
            return -np.inf
        return ((m - mpp) / N - am * dm) / math.sqrt(den)
    if kind == 1:
        return mcc + (n - K) * (n - K - 1) / 2.0 - mpp
    if kind == 2:
        return -(K * (K - 1) / 2.0 - mcc + mpp)
    if K < 2 or K > n - 2:
        return -np.inf
    mcp = m - mcc - mpp
    return (
        mcc / (K * (K - 1) / 2.0)
        + mcp / (K * (n - K) * 1.0)
        - mpp / ((n - K) * (n - K - 1) / 2.0)
        - gamma * abs(K / n - beta)
    )


@numba.njit(cache=True)
def _anneal_counts(kind, beta, gamma, indptr, indices, lab, picks, uniforms, temps, steps):
    n = lab.size
    m = indices.size // 2
    links = np.zeros(n, np.int64)
    K = 0
    for i in range(n):
        K += lab[i]
    mcc = 0
    mpp = 0
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            if lab[j]:
                links[i] += 1
            if j > i:
                if lab[i] and lab[j]:
                    mcc += 1
                elif not lab[i] and not lab[j]:
                    mpp += 1
    cur = _count_score(kind, n, m, K, mcc, mpp, beta, gamma)
    best = cur
    best_lab = lab.copy()
    best_K = K
    t = 0
    for level in range(temps.size):
        temp = temps[level]
        for s in range(steps):
            i = picks[t]
            u = uniforms[t]
            t += 1
            deg = indptr[i + 1] - indptr[i]
            sign = -1 if lab[i] else 1
            nK = K + sign
            nmcc = mcc + sign * links[i]
            nmpp = mpp - sign * (deg - links[i])
            new = _count_score(kind, n, m, nK, nmcc, nmpp, beta, gamma)
            delta = new - cur
            if delta >= 0 or (delta > -np.inf and u < math.exp(delta / temp)):
                lab[i] = 1 - lab[i]
                for p in range(indptr[i], indptr[i + 1]):
                    links[indices[p]] += sign
                K, mcc, mpp, cur = nK, nmcc, nmpp, new
                tol = 1e-12 * max(1.0, abs(best)) if best > -np.inf else 0.0
                if cur > best + tol or (abs(cur - best) <= tol and K < best_K):
                    best = cur
                    best_K = K
                    best_lab[:] = lab
    return best_lab


def simulated_annealing(g, obj, init=None, schedule=AnnealSchedule(), seed=None):
    """Metropolis single-flip annealing; returns the best assignment visited.

    A flip changing the objective by ``delta`` is accepted with probability
    ``min(1, exp(delta / t))``.  Deterministic for a fixed ``seed``.
    """
    rng = _rng.as_generator(seed)
    lab = _random_labels(g.n, rng) if init is None else as_labels(init, g.n).copy()
    if g.n == 0:
        return CoreAssignment(lab)
    temps = schedule.temperatures()
    steps = schedule.steps or max(100, 10 * g.n)
    total = temps.size * steps
    picks = rng.integers(0, g.n, size=total)
    uniforms = rng.random(total)
    if obj.kind is not None:
        beta, gamma = obj.params
        best = _anneal_counts(
            obj.kind, beta, gamma, g.indptr, g.indices, lab.astype(np.int64), picks, uniforms, temps, steps
        )
        return CoreAssignment(best.astype(np.int8))
    cur = obj(g, lab)
    best, best_val = lab.copy(), cur
    t = 0
    for temp in temps:
        for _ in range(steps):
            i, u = picks[t], uniforms[t]
            t += 1
            lab[i] ^= 1
            new = obj(g, lab)
            delta = new - cur
            if delta >= 0 or (delta > -math.inf and u < math.exp(delta / temp)):
                cur = new
                if _improves(cur, best_val, int(lab.sum()), int(best.sum())):
                    best, best_val = lab.copy(), cur
            else:
                lab[i] ^= 1
    return CoreAssignment(best)


def anneal_restarts(g, obj, restarts=10, schedule=AnnealSchedule(), seed=None):
    children = _rng.spawn(seed, restarts)
    runs = ordered_map(lambda s: simulated_annealing(g, obj, schedule=schedule, seed=s), children)
    best, best_val = None, -math.inf
    for r in runs:
        v = obj(g, r)
        if best is None or _improves(v, best_val, r.K, best.K):
            best, best_val = r, v
    return best


# ---------------------------------------------------------------------------
# Node-ordering methods
# ---------------------------------------------------------------------------


def prefix_values(g, order, obj):
    """Objective of each prefix labeling; entry ``K - 1`` has the first ``K`` nodes in the core."""
    order = np.asarray(order, dtype=np.int64)
    if order.shape != (g.n,) or not np.array_equal(np.sort(order), np.arange(g.n)):
        raise DataError("order must be a permutation of the nodes")
    Ks = np.arange(1, g.n)
    if obj.counts is not None:
        rank = np.empty(g.n, dtype=np.int64)
        rank[order] = np.arange(g.n)
        e = g.edges()
        r = rank[e]
        lo, hi = r.min(axis=1), r.max(axis=1)
        cc = np.cumsum(np.bincount(hi, minlength=g.n))
        seen = np.cumsum(np.bincount(lo, minlength=g.n))
        mcc = cc[Ks - 1]
        mpp = g.m - seen[Ks - 1]
        vals = obj.counts(g.n, g.m, Ks, mcc, mpp)
        return np.where(np.isnan(vals), -np.inf, vals)
    lab = np.zeros(g.n, dtype=np.int8)
    vals = np.empty(Ks.size)
    for K in Ks:
        lab[order[K - 1]] = 1
        vals[K - 1] = obj(g, lab)
    return vals


def node_order_sweep(g, order, obj):
    """Add nodes to the core one at a time in ``order``; keep the best prefix (smallest on ties)."""
    if g.n < 2:
        raise DataError("a sweep needs at least two nodes")
    vals = prefix_values(g, order, obj)
    K = int(np.argmax(vals)) + 1
    return CoreAssignment.from_core(g.n, np.asarray(order)[:K])


def degree_order(g):
    """Nodes by decreasing degree, ties by index."""
    return np.argsort(-g.degrees, kind="stable")


def lip_solver(g):
    """Degree-prefix core minimizing Brusco's misfit count.

    For a fixed core size ``K`` the misfit equals
    ``m + K(K-1)/2 - sum of core degrees``, so the best core of each size is
    the ``K`` highest-degree nodes; the size with the smallest misfit wins.
    """
    if g.n < 2:
        raise DataError("need at least two nodes")
    order = degree_order(g)
    Ks = np.arange(1, g.n, dtype=np.int64)
    top = np.cumsum(g.degrees[order])[:-1]
    misfit = g.m + Ks * (Ks - 1) // 2 - top
    K = int(np.argmin(misfit)) + 1
    return CoreAssignment.from_core(g.n, order[:K])


def degree_gap_estimator(g, high_degree_core=True):
    """Split the sorted degree sequence at its largest consecutive gap.

    Nodes above the gap are the core (or below it, with
    ``high_degree_core=False``).  Among equal gaps the highest split point
    is used, giving the smaller high-degree side.  Constant degrees give an
    all-periphery labeling and a :class:`ConstantDegreesWarning`.
    """
    if g.n < 2:
        raise DataError("need at least two nodes")
    order = np.argsort(g.degrees, kind="stable")
    d = g.degrees[order]
    gaps = np.diff(d)
    if gaps.max() == 0:
        warnings.warn("all degrees are equal; no gap to split on", ConstantDegreesWarning, stacklevel=2)
        return CoreAssignment(np.zeros(g.n, dtype=np.int8))
    I = int(np.flatnonzero(gaps == gaps.max())[-1])
    lab = np.zeros(g.n, dtype=np.int8)
    side = order[I + 1 :] if high_degree_core else order[: I + 1]
    lab[side] = 1
    return CoreAssignment(lab)
