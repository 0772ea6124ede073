"""Core-periphery quality measures.

Block-model scores (Borgatti-Everett correlation, Brusco's agreement count,
Cucuringu's density objective) depend on a labeling only through the core
size and the core-core / periphery-periphery edge counts, so each has a
``*_from_counts`` form that broadcasts over arrays.  The optimizers in
:mod:`cpkit.optimize` use those forms to score all single-label flips at once.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .errors import (
    DataError,
    DegenerateEnsemble,
    DegenerateSplit,
    DegenerateVariance,
    EmptyGraph,
    UnreachablePair,
    ZeroDegreeSetWarning,
)
from .graph import (
    UNREACHABLE,
    _closeness_from_rows,
    all_pairs_distances,
    capacity,
    core_numbers,
    node_closeness,
    path_counts_excluding,
)


def _pairs(x):
    x = np.asarray(x, dtype=float)
    return x * (x - 1) / 2


@dataclass(frozen=True, eq=False)
class CoreAssignment:
    """Binary core (1) / periphery (0) labels."""

    labels: np.ndarray

    def __post_init__(self):
        lab = np.asarray(self.labels)
        if lab.ndim != 1:
            raise DataError("labels must be one-dimensional")
        if lab.size and not np.isin(lab, (0, 1)).all():
            raise DataError("labels must be 0 (periphery) or 1 (core)")
        lab = lab.astype(np.int8)
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @classmethod
    def from_core(cls, n, core):
        lab = np.zeros(n, dtype=np.int8)
        lab[np.asarray(core, dtype=np.int64)] = 1
        return cls(lab)

    @property
    def n(self):
        return self.labels.size

    @property
    def K(self):
        return int(self.labels.sum())

    @property
    def core(self):
        return np.flatnonzero(self.labels)

    @property
    def periphery(self):
        return np.flatnonzero(self.labels == 0)

    def __eq__(self, other):
        if isinstance(other, CoreAssignment):
            return np.array_equal(self.labels, other.labels)
        return NotImplemented

    def __hash__(self):
        return hash(self.labels.tobytes())

    def __repr__(self):
        return f"CoreAssignment(K={self.K}, core={self.core.tolist()})"


def as_labels(c, n=None):
    lab = c.labels if isinstance(c, CoreAssignment) else CoreAssignment(np.asarray(c)).labels
    if n is not None and lab.size != n:
        raise DataError(f"labels have length {lab.size}, graph has {n} nodes")
    return lab


def block_counts(g, c):
    """``(K, M_cc, M_cp, M_pp)`` edge counts for a labeling."""
    lab = as_labels(c, g.n)
    e = g.edges()
    s = lab[e[:, 0]].astype(np.int64) + lab[e[:, 1]]
    mcc = int(np.count_nonzero(s == 2))
    mpp = int(np.count_nonzero(s == 0))
    return int(lab.sum()), mcc, g.m - mcc - mpp, mpp


# ---------------------------------------------------------------------------
# Block-model scores from counts (vectorized; invalid splits give NaN)
# ---------------------------------------------------------------------------


def rho_from_counts(n, m, K, mcc, mpp):
    with np.errstate(divide="ignore", invalid="ignore"):
        N = n * (n - 1) / 2
        K = np.asarray(K, dtype=float)
        ideal = _pairs(K) + K * (n - K)
        a_mean = m / N
        d_mean = ideal / N
        cov = (m - np.asarray(mpp, dtype=float)) / N - a_mean * d_mean
        denom = np.sqrt(a_mean * (1 - a_mean) * d_mean * (1 - d_mean))
        return np.where(denom > 0, cov / denom, np.nan)


def brusco_from_counts(n, m, K, mcc, mpp):
    return np.asarray(mcc, dtype=float) + _pairs(n - np.asarray(K)) - mpp


def misfit_from_counts(n, m, K, mcc, mpp):
    """Brusco's original minimized count: absent core-core pairs plus periphery-periphery edges."""
    return _pairs(K) - np.asarray(mcc, dtype=float) + mpp


def cucuringu_from_counts(n, m, K, mcc, mpp, beta=0.5, gamma=0.0):
    with np.errstate(divide="ignore", invalid="ignore"):
        K = np.asarray(K, dtype=float)
        mcc = np.asarray(mcc, dtype=float)
        mpp = np.asarray(mpp, dtype=float)
        mcp = m - mcc - mpp
        val = mcc / _pairs(K) + mcp / (K * (n - K)) - mpp / _pairs(n - K) - gamma * np.abs(K / n - beta)
        return np.where((K >= 2) & (K <= n - 2), val, np.nan)


# ---------------------------------------------------------------------------
# Block-model metrics
# ---------------------------------------------------------------------------


def borgatti_rho(g, c):
    """Pearson correlation between the adjacency and ideal patterns over unordered pairs."""
    K, mcc, _, mpp = block_counts(g, c)
    N = g.n * (g.n - 1) // 2
    ideal = K * (K - 1) // 2 + K * (g.n - K)
    if g.m in (0, N):
        raise DegenerateVariance("adjacency is constant over node pairs")
    if ideal in (0, N):
        raise DegenerateVariance("ideal pattern is constant over node pairs")
    return float(rho_from_counts(g.n, g.m, K, mcc, mpp))


def brusco_Z(g, c):
    """Present core-core edges plus absent periphery-periphery pairs."""
    K, mcc, _, mpp = block_counts(g, c)
    return int(mcc + (g.n - K) * (g.n - K - 1) // 2 - mpp)


def brusco_misfit(g, c):
    """Absent core-core pairs plus present periphery-periphery edges (to be minimized)."""
    K, mcc, _, mpp = block_counts(g, c)
    return int(K * (K - 1) // 2 - mcc + mpp)


@dataclass(frozen=True)
class CucuringuConfig:
    beta: float = 0.5
    gamma: float = 0.0

    def __post_init__(self):
        if not 0 <= self.beta <= 1:
            raise DataError("beta must lie in [0, 1]")
        if self.gamma < 0:
            raise DataError("gamma must be non-negative")


def cucuringu_objective(g, c, cfg=CucuringuConfig()):
    """Core-core plus core-periphery density minus periphery density, with a core-size penalty."""
    K, mcc, _, mpp = block_counts(g, c)
    if not 2 <= K <= g.n - 2:
        raise DegenerateSplit(f"core size {K} leaves an empty pair class (need 2 <= K <= n-2)")
    return float(cucuringu_from_counts(g.n, g.m, K, mcc, mpp, cfg.beta, cfg.gamma))


# ---------------------------------------------------------------------------
# Transport metrics
# ---------------------------------------------------------------------------


def _best_closeness_core(g, dist):
    cores = core_numbers(g)
    whole = _closeness_from_rows(dist, np.arange(g.n), g.n)
    best = None
    for k in range(1, int(cores.max(initial=0)) + 1):
        nodes = np.flatnonzero(cores >= k)
        if nodes.size == 0:
            break
        cc = _closeness_from_rows(dist[nodes], nodes, g.n)
        if best is None or cc >= best[2]:
            best = (k, nodes, cc)
    if best is None:
        raise DataError("graph has no non-empty k-core with k >= 1")
    k, nodes, cc = best
    return k, nodes, cc / whole


@dataclass(frozen=True)
class HolmeResult:
    value: float
    observed_ratio: float
    ensemble_ratios: np.ndarray
    core_k: int
    core: np.ndarray
    metadata: dict = field(default_factory=dict)


def holme_core(g):
    """``(k, nodes, ratio)`` for the k-core of maximal closeness; ties go to larger k."""
    dist = all_pairs_distances(g)
    if np.any(dist == UNREACHABLE):
        raise UnreachablePair("Holme's coefficient needs a connected graph")
    return _best_closeness_core(g, dist)


def holme_ccp(g, ensemble_size=100, seed=None, n_swaps=None, max_retries=100):
    """Excess core closeness over a degree-preserving ensemble.

    Each replicate is rewired by double-edge swaps and gets its own maximal
    closeness k-core.  Disconnected replicates are redrawn up to
    ``max_retries`` times each.
    """
    from .nulls import rewire_preserve_degrees

    if ensemble_size < 1:
        raise DataError("ensemble_size must be >= 1")
    k, core, observed = holme_core(g)
    ratios = []
    for child in _rng.spawn(seed, ensemble_size):
        for attempt in child.spawn(max_retries):
            rep = rewire_preserve_degrees(g, n_swaps=n_swaps, seed=attempt)
            dist = all_pairs_distances(rep)
            if not np.any(dist == UNREACHABLE):
                ratios.append(_best_closeness_core(rep, dist)[2])
                break
        else:
            raise DegenerateEnsemble(f"no connected replicate in {max_retries} draws")
    ratios = np.asarray(ratios)
    meta = {"ensemble_core": "recomputed per replicate", "ensemble_size": ensemble_size}
    return HolmeResult(float(observed - ratios.mean()), float(observed), ratios, k, core, meta)


@dataclass(frozen=True)
class DaSilvaResult:
    cc: float
    N: int
    order: np.ndarray
    capacities: np.ndarray


def dasilva_core_coefficient(g, threshold=0.9):
    """Core coefficient from the capacity decay under closeness-ordered node removal.

    Nodes are ranked once by closeness on the input graph (ties to the lower
    index) and removed in that order; ``capacities[i]`` is the capacity after
    ``i`` removals.  ``N`` is the first index at which the running sum reaches
    ``threshold`` of the total, and ``cc = N / n``.
    """
    clo = node_closeness(g)
    order = np.lexsort((np.arange(g.n), -clo))
    keep = np.ones(g.n, dtype=bool)
    caps = [capacity(g)]
    for v in order:
        keep[v] = False
        caps.append(capacity(g.induced(keep)) if keep.sum() > 1 else 0.0)
    caps = np.asarray(caps)
    cum = np.cumsum(caps)
    target = threshold * cum[-1]
    N = int(np.flatnonzero(cum >= target - 1e-12 * max(1.0, cum[-1]))[0])
    return DaSilvaResult(N / g.n, N, order, caps)


# ---------------------------------------------------------------------------
# Random-walk persistence
# ---------------------------------------------------------------------------


def persistence_probability(g, nodes):
    """Chance that a stationary walker inside ``nodes`` stays there after one step."""
    nodes = np.unique(np.asarray(nodes, dtype=np.int64))
    if nodes.size == 0:
        raise DataError("persistence of an empty node set is undefined")
    inside = np.zeros(g.n, dtype=bool)
    inside[nodes] = True
    vol = int(g.degrees[nodes].sum())
    if vol == 0:
        warnings.warn("all nodes in the set are isolated; persistence taken as 0", ZeroDegreeSetWarning, stacklevel=2)
        return 0.0
    e = g.edges()
    internal = int(np.count_nonzero(inside[e[:, 0]] & inside[e[:, 1]]))
    return 2 * internal / vol


@dataclass(frozen=True)
class CPProfile:
    """Greedy persistence profile.

    ``order[k]`` is the node added at step ``k + 1`` and ``alphas[k]`` the
    persistence of the first ``k + 1`` nodes.
    """

    order: np.ndarray
    alphas: np.ndarray
    centralization: float

    def periphery(self, alpha):
        """Largest profile prefix with persistence at most ``alpha``."""
        k = int(np.searchsorted(self.alphas, alpha, side="right"))
        return np.sort(self.order[:k])

    def core_assignment(self, alpha):
        n = self.order.size
        lab = np.ones(n, dtype=np.int8)
        lab[self.periphery(alpha)] = 0
        return CoreAssignment(lab)


def cp_profile(g):
    """Persistence profile grown from the minimum-degree node.

    Each step adds the node giving the smallest persistence of the enlarged
    set; ties go to the lowest index.
    """
    if g.m == 0:
        raise EmptyGraph("the persistence profile needs at least one edge")
    deg = g.degrees
    n = g.n
    start = int(np.argmin(deg))
    in_s = np.zeros(n, dtype=bool)
    links = np.zeros(n, dtype=np.int64)  # neighbors inside the current set
    order = [start]
    alphas = [0.0]
    in_s[start] = True
    links[g.neighbors(start)] += 1
    twice_internal, vol = 0, int(deg[start])
    for _ in range(n - 1):
        cand = np.flatnonzero(~in_s)
        num = twice_internal + 2 * links[cand]
        den = vol + deg[cand]
        alpha = np.divide(num, den, out=np.zeros(cand.size), where=den > 0)
        best = alpha.min()
        pick = cand[int(np.flatnonzero(alpha <= best + 1e-12)[0])]
        twice_internal += 2 * int(links[pick])
        vol += int(deg[pick])
        in_s[pick] = True
        links[g.neighbors(pick)] += 1
        order.append(int(pick))
        alphas.append(twice_internal / vol if vol else 0.0)
    alphas = np.asarray(alphas)
    # enforce the end condition exactly; the float ratio is 2m/2m anyway
    alphas[-1] = 1.0
    order = np.asarray(order, dtype=np.int64)
    return CPProfile(order, alphas, _centralization(alphas))


def _centralization(alphas):
    n = alphas.size
    if n < 2:
        raise DataError("centralization needs at least two nodes")
    return float(1 - 2 / (n - 1) * np.sum(alphas[:-1]))


def cp_centralization(profile):
    """One minus twice the mean persistence over the first ``n - 1`` prefixes; the star scores 1."""
    return _centralization(np.asarray(profile.alphas))


# ---------------------------------------------------------------------------
# Path-Core
# ---------------------------------------------------------------------------


def path_core_scores(g):
    """Per-node sum over edges ``(j, k)`` of the fraction of ``j``-``k`` detours through the node.

    The detours are shortest paths once the edge itself is removed.  Edges
    whose removal disconnects their endpoints contribute nothing.
    """
    score = np.zeros(g.n)
    for j, k in g.edges():
        sigma, through = path_counts_excluding(g, int(j), int(k), count_dtype=np.float64)
        if sigma > 0:
            score += through / sigma
    return score
