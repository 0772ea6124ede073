"""Likelihood and Bayesian inference for block core-periphery models.

Block labels are coded internally as layer indices: ``0`` is block 1 (the
core) and higher indices are progressively more peripheral.  The two-block
model has three edge rates ``(p11, p12, p22)``; the layered model with ``L``
layers has rates ``p[0] >= ... >= p[L-1]`` and a pair in layers ``(l, m)``
uses ``p[max(l, m)]``.  Both are handled by one sampler through a *class
map* sending a label pair to its rate index.
"""
import functools
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numba
import numpy as np
from scipy import special

from . import _rng
from ._parallel import ordered_map
from .errors import DataError, InsufficientSamples, LogOfZero, SymmetricInit
from .generators import BlockParams
from .metrics import CoreAssignment, as_labels, block_counts

# ---------------------------------------------------------------------------
# Two-block likelihood
# ---------------------------------------------------------------------------


def _xlog(count, prob, what):
    if count == 0:
        return 0.0
    if prob <= 0:
        raise LogOfZero(f"{what} has probability 0 but occurs {count} time(s)")
    return count * math.log(prob)


def loglik_sbm2(g, c, params):
    """Complete-data log-likelihood of labels ``c`` (1 = block 1) under ``params``."""
    lab = as_labels(c, g.n)
    n = g.n
    K, mcc, mcp, mpp = block_counts(g, lab)
    pairs = (K * (K - 1) // 2, K * (n - K), (n - K) * (n - K - 1) // 2)
    edges = (mcc, mcp, mpp)
    rates = (params.p11, params.p12, params.p22)
    total = _xlog(K, params.gamma1, "block-1 membership") + _xlog(n - K, 1 - params.gamma1, "block-2 membership")
    for name, E, W, p in zip(("11", "12", "22"), edges, pairs, rates):
        total += _xlog(E, p, f"an edge in block pair {name}")
        total += _xlog(W - E, 1 - p, f"a non-edge in block pair {name}")
    return total


# ---------------------------------------------------------------------------
# Mean-field EM
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EMResult:
    """EM fit.  ``loglik`` is the variational lower bound after each iteration."""

    params: BlockParams
    responsibilities: np.ndarray
    loglik: np.ndarray
    iterations: int
    converged: bool

    @property
    def labels(self):
        return CoreAssignment((self.responsibilities > 0.5).astype(np.int8))


_EPS = 1e-10


@numba.njit(cache=True)
def _em_sweep(indptr, indices, q, s1, order, a, b, c, d):
    """Sequential coordinate ascent on each ``q_i``; keeps ``s1 = A q`` current."""
    n = q.size
    Q = q.sum()
    for t in range(n):
        i = order[t]
        deg = indptr[i + 1] - indptr[i]
        Qx = Q - q[i]
        L = a[0] + s1[i] * b + (deg - s1[i]) * c + (Qx - s1[i]) * d[0] + ((n - 1 - Qx) - (deg - s1[i])) * d[1]
        new = 1.0 / (1.0 + math.exp(-L)) if L > -700 else 0.0
        delta = new - q[i]
        if delta != 0.0:
            for p in range(indptr[i], indptr[i + 1]):
                s1[indices[p]] += delta
            Q += delta
            q[i] = new


def _expected_counts(g, q, s1):
    r = 1.0 - q
    E11 = 0.5 * float(q @ s1)
    E12 = float(r @ s1)
    E22 = g.m - E11 - E12
    S1, S2 = q.sum(), r.sum()
    P11 = 0.5 * (S1 * S1 - float(q @ q))
    P12 = S1 * S2 - float(q @ r)
    P22 = 0.5 * (S2 * S2 - float(r @ r))
    return np.array([E11, E12, E22]), np.array([P11, P12, P22])


def _elbo(g, q, s1, gamma, p):
    E, P = _expected_counts(g, q, s1)
    S1 = q.sum()
    val = S1 * math.log(gamma) + (g.n - S1) * math.log1p(-gamma)
    val -= float(np.sum(special.xlogy(q, q) + special.xlogy(1 - q, 1 - q)))
    val += float(np.sum(E * np.log(p) + (P - E) * np.log1p(-p)))
    return val


def _m_step(g, q, s1):
    E, P = _expected_counts(g, q, s1)
    with np.errstate(invalid="ignore", divide="ignore"):
        p = np.where(P > 0, E / np.where(P > 0, P, 1), 0.5)
    gamma = q.sum() / g.n
    return float(np.clip(gamma, _EPS, 1 - _EPS)), np.clip(p, _EPS, 1 - _EPS)


def newman_em(g, init=BlockParams(0.5, 0.7, 0.5, 0.3), tol=1e-8, max_iter=500, seed=None):
    """Fit the two-block model by mean-field EM.

    The E-step sweeps the nodes in a seeded random order, setting each
    node's block-1 probability to its exact conditional given the others'
    current probabilities; the M-step sets ``gamma1`` and the three rates to
    their responsibility-weighted ratios.  Each half-step raises the
    variational lower bound recorded in ``loglik``.  The fit is relabeled
    so that ``p11 >= p22``.

    Raises
    ------
    SymmetricInit
        If ``init.p11 == init.p22``, a fixed point of the iteration.
    """
    if init.p11 == init.p22:
        raise SymmetricInit("p11 == p22 is a fixed point of EM; choose an asymmetric start")
    if g.n < 2:
        raise DataError("EM needs at least two nodes")
    rng = _rng.as_generator(seed)
    gamma = float(np.clip(init.gamma1, _EPS, 1 - _EPS))
    p = np.clip(init.rates(), _EPS, 1 - _EPS)
    q = np.full(g.n, gamma)
    A = g.to_csr()
    s1 = np.asarray(A @ q).ravel()
    trace = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        a = np.array([math.log(gamma) - math.log1p(-gamma)])
        b = math.log(p[0] / p[1])
        c = math.log(p[1] / p[2])
        d = np.array([math.log1p(-p[0]) - math.log1p(-p[1]), math.log1p(-p[1]) - math.log1p(-p[2])])
        _em_sweep(g.indptr, g.indices, q, s1, rng.permutation(g.n), a, b, c, d)
        s1 = np.asarray(A @ q).ravel()  # refresh to avoid drift
        gamma, p = _m_step(g, q, s1)
        trace.append(_elbo(g, q, s1, gamma, p))
        if len(trace) > 1 and abs(trace[-1] - trace[-2]) < tol:
            converged = True
            break
    if p[0] < p[2]:
        q = 1.0 - q
        gamma = 1.0 - gamma
        p = p[::-1]
    params = BlockParams(gamma, float(p[0]), float(p[1]), float(p[2]))
    return EMResult(params, q, np.asarray(trace), it, converged)


# ---------------------------------------------------------------------------
# Gibbs sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Prior:
    """Edge-rate prior: ``flat`` (independent uniforms), ``ordered`` or ``layered``.

    ``ordered`` is uniform on ``p11 >= p12 >= p22``; ``layered`` uses
    ``layers`` blocks with rates uniform on ``p[0] >= ... >= p[layers-1]``.
    """

    kind: str = "ordered"
    layers: int = 2

    def __post_init__(self):
        if self.kind not in ("flat", "ordered", "layered"):
            raise DataError(f"unknown prior {self.kind!r}")
        if self.kind != "layered" and self.layers != 2:
            raise DataError("only the layered prior takes a layer count")
        if self.layers < 2:
            raise DataError("need at least two layers")

    @classmethod
    def parse(cls, prior, layers=None):
        if isinstance(prior, Prior):
            return prior
        if prior == "layered":
            return cls("layered", 3 if layers is None else int(layers))
        return cls(prior)

    @property
    def ordered(self):
        return self.kind != "flat"

    def class_map(self):
        L = self.layers
        if self.kind == "layered":
            return np.maximum.outer(np.arange(L), np.arange(L))
        return np.array([[0, 1], [1, 2]])

    @property
    def n_rates(self):
        return self.layers if self.kind == "layered" else 3

    def describe(self):
        return {"kind": self.kind, "layers": self.layers}


def _class_counts(g, z, cls, L, R):
    e = g.edges()
    E = np.bincount(cls[z[e[:, 0]], z[e[:, 1]]], minlength=R).astype(np.int64) if g.m else np.zeros(R, np.int64)
    nl = np.bincount(z, minlength=L).astype(np.int64)
    W = np.zeros(R, np.int64)
    for l in range(L):
        W[cls[l, l]] += nl[l] * (nl[l] - 1) // 2
        for k in range(l + 1, L):
            W[cls[l, k]] += nl[l] * nl[k]
    return E, W, nl


@numba.njit(cache=True)
def _label_sweep(indptr, indices, z, nl, cls, logp, log1mp, logg, uni, free):
    n = z.size
    L = nl.size
    nb = np.zeros(L, np.int64)
    score = np.empty(L)
    for i in range(n):
        if not free[i]:
            continue
        nb[:] = 0
        for p in range(indptr[i], indptr[i + 1]):
            nb[z[indices[p]]] += 1
        nl[z[i]] -= 1
        top = -np.inf
        for l in range(L):
            s = logg[l]
            for k in range(L):
                r = cls[l, k]
                s += nb[k] * logp[r] + (nl[k] - nb[k]) * log1mp[r]
            score[l] = s
            if s > top:
                top = s
        tot = 0.0
        for l in range(L):
            score[l] = math.exp(score[l] - top)
            tot += score[l]
        u = uni[i] * tot
        acc = 0.0
        pick = L - 1
        for l in range(L):
            acc += score[l]
            if u < acc:
                pick = l
                break
        z[i] = pick
        nl[pick] += 1


def _truncated_beta(rng, a, b, lo, hi):
    Flo, Fhi = special.betainc(a, b, lo), special.betainc(a, b, hi)
    if Fhi - Flo <= 1e-300:
        return 0.5 * (lo + hi)
    return float(np.clip(special.betaincinv(a, b, rng.uniform(Flo, Fhi)), lo, hi))


def _draw_rates(rng, E, W, ordered, previous, stats, max_tries=10000, batch=64):
    a = E + 1.0
    b = (W - E) + 1.0
    if not ordered:
        return rng.beta(a, b)
    tries = 0
    while tries < max_tries:
        draws = rng.beta(a[:, None], b[:, None], size=(a.size, batch))
        ok = np.all(np.diff(draws, axis=0) <= 0, axis=0)
        hit = np.flatnonzero(ok)
        if hit.size:
            used = int(hit[0]) + 1
            stats[0] += 1
            stats[1] += tries + used
            return draws[:, hit[0]]
        tries += batch
    # coordinate-wise update inside the ordered region, starting from the last state
    stats[1] += tries
    p = previous.copy()
    for r in range(p.size):
        lo = p[r + 1] if r + 1 < p.size else 0.0
        hi = p[r - 1] if r > 0 else 1.0
        p[r] = _truncated_beta(rng, a[r], b[r], lo, hi)
    return p


@dataclass
class GibbsChain:
    """Retained Gibbs samples.

    ``labels[s, i]`` is node ``i``'s layer at sample ``s`` (0 = core);
    ``rates[s]`` is ``(p11, p12, p22)`` for the block priors and
    ``(p_1, ..., p_L)`` for the layered prior.  ``acceptance_rate`` is the
    fraction of ordered-rate proposals accepted (1.0 for the flat prior).
    """

    prior: Prior
    gamma: np.ndarray
    rates: np.ndarray
    labels: np.ndarray
    burn_in: int
    seed: object
    acceptance_rate: float
    fallbacks: int = 0
    fingerprint: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def n_samples(self):
        return self.labels.shape[0]

    def layer_frequencies(self):
        L = self.prior.layers
        return np.stack([(self.labels == l).mean(axis=0) for l in range(L)], axis=1)

    def core_frequencies(self):
        """Per-node fraction of samples in block 1 / the innermost layer."""
        return (self.labels == 0).mean(axis=0)

    def map_labels(self):
        """Most frequent layer per node (ties to the innermost)."""
        return np.argmax(self.layer_frequencies(), axis=1)

    def core_assignment(self):
        return CoreAssignment((self.core_frequencies() > 0.5).astype(np.int8))

    def iter_records(self):
        for s in range(self.n_samples):
            yield {
                "sample": s,
                "gamma": [float(x) for x in self.gamma[s]],
                "rates": [float(x) for x in self.rates[s]],
                "labels": [int(x) for x in self.labels[s]],
            }

    def to_jsonl(self, fh):
        """Write one JSON object per retained sample."""
        for rec in self.iter_records():
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _initial_layers(g, L):
    order = np.argsort(-g.degrees, kind="stable")
    z = np.empty(g.n, dtype=np.int64)
    z[order] = np.minimum(np.arange(g.n) * L // max(g.n, 1), L - 1)
    return z


def gibbs_sampler(
    g,
    prior="ordered",
    n_samples=1000,
    burn_in=200,
    seed=None,
    init_labels=None,
    clamp_labels=None,
    layers=None,
):
    """Gibbs sampler over labels, block membership probabilities and edge rates.

    Each iteration draws the membership probabilities (Beta, or Dirichlet
    for more than two layers) and the edge rates (Beta conditionals, under
    the ordered priors by rejection) given the labels, then resamples every
    node's label in index order from its exact conditional.

    Parameters
    ----------
    prior : {"flat", "ordered", "layered"} or Prior
    init_labels : array of layer indices (0 = core), optional
        Defaults to splitting nodes into equal groups by decreasing degree.
    clamp_labels : array, optional
        Layer index per node, or -1 for a free node.  Clamped nodes keep
        their label.
    layers : int, optional
        Layer count for the layered prior (default 3).
    """
    prior = Prior.parse(prior, layers)
    if g.n < 2:
        raise DataError("Gibbs sampling needs at least two nodes")
    if n_samples < 1 or burn_in < 0:
        raise DataError("need n_samples >= 1 and burn_in >= 0")
    L, R = prior.layers, prior.n_rates
    cls = prior.class_map().astype(np.int64)
    rng = _rng.as_generator(seed)
    z = _initial_layers(g, L) if init_labels is None else np.asarray(init_labels, dtype=np.int64).copy()
    free = np.ones(g.n, dtype=np.bool_)
    if clamp_labels is not None:
        clamp = np.asarray(clamp_labels, dtype=np.int64)
        if clamp.shape != (g.n,):
            raise DataError("clamp_labels must have one entry per node")
        fixed = clamp >= 0
        z[fixed] = clamp[fixed]
        free = ~fixed
    if z.shape != (g.n,) or z.min() < 0 or z.max() >= L:
        raise DataError(f"labels must lie in 0..{L - 1}")
    total = burn_in + n_samples
    out_gamma = np.empty((n_samples, L))
    out_rates = np.empty((n_samples, R))
    out_labels = np.empty((n_samples, g.n), dtype=np.int8)
    stats = [0, 0]
    fallbacks = 0
    p = np.linspace(0.75, 0.25, R) if prior.ordered else np.full(R, 0.5)
    tiny = np.finfo(float).tiny
    for t in range(total):
        E, W, nl = _class_counts(g, z, cls, L, R)
        gamma = rng.dirichlet(nl + 1.0)
        before = stats[0]
        p = _draw_rates(rng, E, W, prior.ordered, p, stats)
        if prior.ordered and stats[0] == before:
            fallbacks += 1
        if np.any(free):
            pc = np.clip(p, tiny, 1 - 1e-16)
            logg = np.log(np.clip(gamma, tiny, None))
            _label_sweep(g.indptr, g.indices, z, nl, cls, np.log(pc), np.log1p(-pc), logg, rng.random(g.n), free)
        else:
            rng.random(g.n)
        if t >= burn_in:
            s = t - burn_in
            out_gamma[s] = gamma
            out_rates[s] = p
            out_labels[s] = z
    rate = stats[0] / stats[1] if prior.ordered and stats[1] else 1.0
    return GibbsChain(
        prior, out_gamma, out_rates, out_labels, burn_in, seed, rate, fallbacks, g.fingerprint()
    )


def gibbs_chains(g, n_chains=4, seed=None, **kwargs):
    """Independent chains with child seeds, run in parallel."""
    return ordered_map(lambda s: gibbs_sampler(g, seed=s, **kwargs), _rng.spawn(seed, n_chains))


# ---------------------------------------------------------------------------
# Marginal likelihood and posterior odds
# ---------------------------------------------------------------------------

def _support_grid(a, b, points=513, q=1e-15):
    lo = float(np.min(special.betaincinv(a, b, q)))
    hi = float(np.max(special.betaincinv(a, b, 1 - q)))
    return np.unique(np.concatenate([[0.0], np.linspace(lo, hi, points), [1.0]]))


def ordered_probability(a, b, grid=None):
    """``P(X_0 >= X_1 >= ...)`` for independent ``X_r ~ Beta(a_r, b_r)``, by grid recursion.

    The default grid spans the central ``1 - 1e-15`` mass of all factors;
    its relative error is about ``1e-5``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if grid is None:
        grid = _support_grid(a, b)
    h = special.betainc(a[-1], b[-1], grid)
    for r in range(a.size - 2, -1, -1):
        F = special.betainc(a[r], b[r], grid)
        mass = np.diff(F) * 0.5 * (h[1:] + h[:-1])
        h = np.concatenate([[0.0], np.cumsum(mass)])
    return float(min(h[-1], 1.0))


@functools.lru_cache(maxsize=65536)
def _log_ordered(E, W):
    a = np.array(E, dtype=float) + 1.0
    b = np.array(W, dtype=float) - a + 2.0
    P = ordered_probability(a, b)
    return math.log(P) if P > 0 else -math.inf


def log_evidence_given_labels(g, z, prior):
    """``log P(A, z | model)`` with rates and membership probabilities integrated out."""
    prior = Prior.parse(prior)
    L, R = prior.layers, prior.n_rates
    E, W, nl = _class_counts(g, np.asarray(z, dtype=np.int64), prior.class_map(), L, R)
    a, b = E + 1.0, (W - E) + 1.0
    val = float(np.sum(special.betaln(a, b)))
    if prior.ordered:
        lp = _log_ordered(tuple(E.tolist()), tuple(W.tolist()))
        if lp == -math.inf:
            return -math.inf
        val += lp + special.gammaln(R + 1)
    # membership probabilities integrated under a flat Dirichlet
    val += special.gammaln(L) + float(np.sum(special.gammaln(nl + 1))) - special.gammaln(g.n + L)
    return val


@dataclass(frozen=True)
class EvidenceEstimate:
    log_evidence: float
    stderr: float
    n_draws: int
    method: str


@dataclass(frozen=True)
class OddsResult:
    """Posterior odds of the block model against the layered model (equal model priors)."""

    log_odds: float
    odds: float
    block: EvidenceEstimate
    layered: EvidenceEstimate
    method: str

    def to_dict(self):
        return {
            "log_odds": self.log_odds,
            "odds": self.odds,
            "log_evidence_block": self.block.log_evidence,
            "log_evidence_layered": self.layered.log_evidence,
            "stderr_block": self.block.stderr,
            "stderr_layered": self.layered.stderr,
            "n_draws": self.block.n_draws,
            "method": self.method,
        }


_IS_METHOD = "importance sampling over labels; per-node categorical proposal from chain frequencies mixed with uniform"


def log_evidence(g, chain, n_draws=1000, mix=0.05, seed=None):
    """Importance-sampling estimate of ``log P(A | model)`` from a chain's label frequencies."""
    if chain.n_samples < 10:
        raise InsufficientSamples(f"chain has {chain.n_samples} samples; need at least 10")
    L = chain.prior.layers
    q = (1 - mix) * chain.layer_frequencies() + mix / L
    rng = _rng.as_generator(seed)
    cum = np.cumsum(q, axis=1)
    u = rng.random((n_draws, g.n))
    z = np.minimum((u[:, :, None] > cum[None, :, :]).sum(axis=2), L - 1)
    logq = np.log(q)[np.arange(g.n)[None, :], z].sum(axis=1)
    uniq, inv = np.unique(z, axis=0, return_inverse=True)
    cond = np.array([log_evidence_given_labels(g, row, chain.prior) for row in uniq])
    logw = cond[np.ravel(inv)] - logq
    top = logw.max()
    w = np.exp(logw - top)
    mean = w.mean()
    est = top + math.log(mean)
    se = float(w.std(ddof=1) / math.sqrt(n_draws) / mean) if n_draws > 1 else math.inf
    return EvidenceEstimate(est, se, n_draws, _IS_METHOD)


def posterior_odds(g, chain_block, chain_layered, n_draws=1000, seed=None):
    """Posterior odds ``Lambda`` of the block model over the layered model.

    Each model's evidence is estimated by importance sampling over label
    vectors, with the rates and membership probabilities integrated out
    analytically; ``Lambda > 1`` favors ``chain_block``'s model.
    """
    fp = g.fingerprint()
    for ch in (chain_block, chain_layered):
        if ch.fingerprint and ch.fingerprint != fp:
            raise DataError("chains were run on a different graph")
    s1, s2 = _rng.spawn(seed, 2)
    eb = log_evidence(g, chain_block, n_draws, seed=s1)
    el = log_evidence(g, chain_layered, n_draws, seed=s2)
    lo = eb.log_evidence - el.log_evidence
    odds = math.exp(lo) if lo < 700 else math.inf
    return OddsResult(lo, odds, eb, el, _IS_METHOD)


# ---------------------------------------------------------------------------
# Degree-corrected core-periphery likelihood
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DCSBMLik:
    """Labels (1 = core), node weights and the core / periphery rates."""

    labels: np.ndarray
    theta: np.ndarray
    pc: float
    pp: float

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        if np.any(theta < 0) or self.pc < 0 or self.pp < 0:
            raise DataError("weights and rates must be non-negative")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=np.int8))


def _masses(theta, lab):
    per = lab == 0
    tp = theta[per]
    total = 0.5 * (theta.sum() ** 2 - float(theta @ theta))
    Wp = 0.5 * (tp.sum() ** 2 - float(tp @ tp))
    return total - Wp, Wp


def dcsbm_loglik(g, model):
    """``sum_{i<j} A_ij log(theta_i theta_j p) - theta_i theta_j p`` with ``p = pc`` if either end is core."""
    lab = as_labels(model.labels, g.n)
    theta = model.theta
    Wc, Wp = _masses(theta, lab)
    e = g.edges()
    core_edge = (lab[e[:, 0]] | lab[e[:, 1]]).astype(bool)
    rate = np.where(core_edge, model.pc, model.pp)
    with np.errstate(divide="ignore"):
        edge_term = float(np.sum(np.log(theta[e[:, 0]] * theta[e[:, 1]] * rate)))
    return edge_term - model.pc * Wc - model.pp * Wp


def _profile(Ec, Wc, Ep, Wp):
    return special.xlogy(Ec, Ec) - special.xlogy(Ec, Wc) + special.xlogy(Ep, Ep) - special.xlogy(Ep, Wp)


def _rates(g, lab, theta):
    Wc, Wp = _masses(theta, lab)
    _, _, _, mpp = block_counts(g, lab)
    Ec, Ep = g.m - mpp, mpp
    pc = Ec / Wc if Wc > 0 else 0.0
    pp = Ep / Wp if Wp > 0 else 0.0
    return pc, pp


def _dcsbm_greedy(g, theta, lab):
    A = g.to_csr()
    per_links = np.asarray(A @ (1 - lab).astype(np.int64)).ravel()
    while True:
        per = lab == 0
        S, S2 = theta[per].sum(), float(theta[per] @ theta[per])
        total = 0.5 * (theta.sum() ** 2 - float(theta @ theta))
        _, _, _, mpp = block_counts(g, lab)
        cur = _profile(g.m - mpp, total - 0.5 * (S * S - S2), mpp, 0.5 * (S * S - S2))
        # periphery -> core removes i from the periphery; core -> periphery adds it
        sign = np.where(per, -1.0, 1.0)
        nS = S + sign * theta
        nS2 = S2 + sign * theta**2
        nWp = 0.5 * (nS * nS - nS2)
        nmpp = mpp + sign * per_links
        vals = _profile(g.m - nmpp, total - nWp, nmpp, np.maximum(nWp, 0.0))
        vals = np.where(np.isnan(vals), -np.inf, vals)
        i = int(np.argmax(vals))
        if not vals[i] > cur + 1e-12 * max(1.0, abs(cur)):
            return lab
        s = 1 if lab[i] else -1  # core -> periphery increases neighbors' periphery links
        lab[i] ^= 1
        per_links[g.neighbors(i)] += s


def dcsbm_greedy_fit(g, seed=None, restarts=10, init=None):
    """Maximize the degree-corrected core-periphery likelihood by greedy label flips.

    Weights are fixed at ``theta_i = d_i / sqrt(2 m)``; for any labels the
    rates have the closed form ``p = edges / sum of theta_i theta_j`` over
    the corresponding pairs, so each flip is scored at its optimal rates.
    Returns the best of ``restarts`` random starts (plus ``init`` if given).
    """
    if g.m == 0:
        lab = np.zeros(g.n, dtype=np.int8)
        return CoreAssignment(lab), DCSBMLik(lab, np.zeros(g.n), 0.0, 0.0)
    theta = g.degrees / math.sqrt(2.0 * g.m)
    starts = [as_labels(init, g.n).copy()] if init is not None else []
    starts += [_rng.as_generator(s).integers(0, 2, g.n).astype(np.int8) for s in _rng.spawn(seed, restarts)]
    results = ordered_map(lambda lab: _dcsbm_greedy(g, theta, lab.copy()), starts)
    best, best_val = None, -math.inf
    for lab in results:
        pc, pp = _rates(g, lab, theta)
        v = dcsbm_loglik(g, DCSBMLik(lab, theta, pc, pp))
        tol = 1e-12 * max(1.0, abs(best_val)) if math.isfinite(best_val) else 0.0
        if best is None or v > best_val + tol or (abs(v - best_val) <= tol and lab.sum() < best.sum()):
            best, best_val = lab, v
    pc, pp = _rates(g, best, theta)
    return CoreAssignment(best), DCSBMLik(best, theta, pc, pp)
