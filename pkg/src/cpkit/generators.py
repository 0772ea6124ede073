"""Random graph models.

All dense generators draw one uniform per unordered pair, in lexicographic
``(i, j)``, ``i < j`` order, and keep the pair when the uniform falls below the
model's edge probability.  Because the draw order is fixed, models that
collapse onto one another (Chung-Lu with constant weights onto ER, DCSBM with
unit weights onto the SBM, ...) produce the identical graph from the same
seed.
"""
from dataclasses import dataclass

import numpy as np

from . import _rng
from .errors import DataError, InvalidKernel, InvalidProbability, OrderingViolation
from .graph import Graph
from .metrics import CoreAssignment


@dataclass(frozen=True)
class BlockParams:
    """Two-block model: block 1 (core) membership probability and edge rates."""

    gamma1: float = 0.5
    p11: float = 0.5
    p12: float = 0.5
    p22: float = 0.5

    def __post_init__(self):
        for name in ("gamma1", "p11", "p12", "p22"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise InvalidProbability(f"{name}={v} is outside [0, 1]")

    @property
    def is_cp(self):
        return self.p11 >= self.p12 >= self.p22

    def rates(self):
        return np.array([self.p11, self.p12, self.p22])

    def matrix(self):
        return np.array([[self.p11, self.p12], [self.p12, self.p22]])

    def swapped(self):
        return BlockParams(1 - self.gamma1, self.p22, self.p12, self.p11)


@dataclass(frozen=True)
class LayeredParams:
    """Layer rates ``p[0] >= p[1] >= ...``; layers ``l, m`` connect at rate ``p[max(l, m)]``."""

    p: tuple

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        object.__setattr__(self, "p", p)
        if any(not 0 <= x <= 1 for x in p):
            raise InvalidProbability("layer rates must lie in [0, 1]")
        if any(a < b for a, b in zip(p, p[1:])):
            raise OrderingViolation("layer rates must be non-increasing")

    def matrix(self):
        K = len(self.p)
        idx = np.maximum.outer(np.arange(K), np.arange(K))
        return np.asarray(self.p)[idx]


@dataclass(frozen=True)
class HybridParams:
    """Community-plus-coreness model ``p_ij = a [c_i = c_j] (C_i + C_j - C_i C_j) + b``."""

    communities: np.ndarray
    coreness: np.ndarray
    a: float
    b: float

    def __post_init__(self):
        c = np.asarray(self.communities)
        C = np.asarray(self.coreness, dtype=float)
        if c.shape != C.shape or c.ndim != 1:
            raise DataError("communities and coreness must be vectors of equal length")
        if np.any((C < 0) | (C > 1)):
            raise InvalidProbability("coreness values must lie in [0, 1]")
        if self.a < 0 or self.b < 0 or self.a + self.b > 1:
            raise InvalidProbability("need a >= 0, b >= 0 and a + b <= 1")
        object.__setattr__(self, "communities", c)
        object.__setattr__(self, "coreness", C)


def _pairs(n):
    return np.triu_indices(n, 1)


def _check_rates(p, tol=1e-12):
    ok = (p >= -tol) & (p <= 1 + tol)
    if not np.all(ok):
        raise InvalidProbability(f"edge probability {p[~ok][0]!r} outside [0, 1]")
    return np.clip(p, 0.0, 1.0)


def bernoulli_graph(n, prob, seed=None):
    """Keep pair ``k`` (lexicographic order) with probability ``prob[k]``."""
    i, j = _pairs(n)
    prob = _check_rates(np.broadcast_to(np.asarray(prob, dtype=float), i.shape))
    u = _rng.as_generator(seed).random(i.size)
    keep = u < prob
    return Graph._from_pairs(n, i[keep], j[keep])


def pair_probabilities(n, fn):
    """Evaluate ``fn(i, j)`` over the lexicographic pair arrays."""
    i, j = _pairs(n)
    return fn(i, j)


def unrank_pairs(n, k):
    """Map lexicographic pair ranks to ``(i, j)`` with ``i < j``."""
    k = np.asarray(k, dtype=np.int64)
    rows = np.arange(n, dtype=np.int64)
    offsets = rows * (2 * n - rows - 1) // 2
    i = np.searchsorted(offsets, k, side="right") - 1
    j = k - offsets[i] + i + 1
    return i, j


def generate_er(n, p, seed=None):
    """Erdos-Renyi graph: every pair independently present with probability ``p``."""
    return bernoulli_graph(n, float(p), seed)


def generate_gnm(n, m, seed=None):
    """Uniform simple graph with exactly ``m`` edges."""
    N = n * (n - 1) // 2
    if not 0 <= m <= N:
        raise DataError(f"m={m} is impossible on {n} nodes")
    rng = _rng.as_generator(seed)
    k = np.sort(rng.choice(N, size=m, replace=False)) if m else np.zeros(0, np.int64)
    i, j = unrank_pairs(n, k)
    return Graph._from_pairs(n, i, j)


def _weights(theta):
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1:
        raise DataError("weights must be a vector")
    if np.any(~np.isfinite(theta)) or np.any(theta < 0):
        raise InvalidProbability("weights must be finite and non-negative")
    return theta


def generate_chung_lu(theta, seed=None):
    """Edge probability ``theta_i * theta_j``."""
    theta = _weights(theta)
    i, j = _pairs(theta.size)
    return bernoulli_graph(theta.size, theta[i] * theta[j], seed)


def generate_sbm(labels, omega, seed=None):
    """Block model with integer labels and symmetric rate matrix ``omega``."""
    labels = np.asarray(labels, dtype=np.int64)
    omega = np.asarray(omega, dtype=float)
    i, j = _pairs(labels.size)
    return bernoulli_graph(labels.size, omega[labels[i], labels[j]], seed)


def generate_sbm2(n1, n2, params, seed=None, require_cp=False):
    """Two-block graph; nodes ``0..n1-1`` form block 1, returned as the planted core."""
    if require_cp and not params.is_cp:
        raise OrderingViolation(
            f"p11={params.p11}, p12={params.p12}, p22={params.p22} violate p11 >= p12 >= p22"
        )
    labels = np.r_[np.zeros(n1, np.int64), np.ones(n2, np.int64)]
    g = generate_sbm(labels, params.matrix(), seed)
    return g, CoreAssignment(1 - labels)


def generate_layered(sizes, params, seed=None):
    """Layered graph; layer 0 is innermost.  Returns the graph and layer labels."""
    labels = np.repeat(np.arange(len(sizes)), sizes)
    if len(sizes) != len(params.p):
        raise DataError("need one size per layer")
    return generate_sbm(labels, params.matrix(), seed), labels


def generate_dcsbm(theta, labels, omega, seed=None):
    """Degree-corrected block model, edge probability ``theta_i omega[c_i, c_j] theta_j``."""
    theta = _weights(theta)
    labels = np.asarray(labels, dtype=np.int64)
    omega = np.asarray(omega, dtype=float)
    if labels.shape != theta.shape:
        raise DataError("theta and labels must have equal length")
    i, j = _pairs(theta.size)
    return bernoulli_graph(theta.size, theta[i] * omega[labels[i], labels[j]] * theta[j], seed)


def generate_sociability(theta, seed=None):
    """Edge probability ``1 - exp(-2 theta_i theta_j)``."""
    theta = _weights(theta)
    i, j = _pairs(theta.size)
    return bernoulli_graph(theta.size, -np.expm1(-2.0 * theta[i] * theta[j]), seed)


def generate_logistic(theta, kernel=None, seed=None):
    """Edge probability ``e^(theta_i + theta_j) / (K_ij + e^(theta_i + theta_j))``.

    ``kernel`` is an ``n x n`` array of positive values (``inf`` allowed);
    omitted means ``K_ij = 1``.
    """
    theta = np.asarray(theta, dtype=float)
    n = theta.size
    i, j = _pairs(n)
    s = theta[i] + theta[j]
    if kernel is None:
        logk = 0.0
    else:
        kernel = np.asarray(kernel, dtype=float)
        if kernel.shape != (n, n):
            raise InvalidKernel(f"kernel must have shape ({n}, {n})")
        k = kernel[i, j]
        if np.any(np.isnan(k)) or np.any(k <= 0):
            raise InvalidKernel("kernel values must be positive")
        with np.errstate(divide="ignore"):
            logk = np.log(k)
    from scipy.special import expit

    return bernoulli_graph(n, expit(s - logk), seed)


def generate_hybrid(params, seed=None):
    """Community/core-periphery mixture graph."""
    c = params.communities
    C = params.coreness
    i, j = _pairs(c.size)
    same = (c[i] == c[j]).astype(float)
    prob = params.a * same * (C[i] + C[j] - C[i] * C[j]) + params.b
    return bernoulli_graph(c.size, prob, seed)
