"""Significance tests for core-periphery structure.

Monte Carlo tests compare an observed statistic with its values on ``B``
null replicates.  Each replicate owns a child seed of the master seed, so
results do not depend on the worker count or the execution order.
"""
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special

from . import _rng
from ._parallel import ordered_map
from .errors import DataError, DegenerateEnsembleWarning
from .metrics import (
    CoreAssignment,
    as_labels,
    block_counts,
    borgatti_rho,
    brusco_misfit,
    cp_centralization,
    cp_profile,
    cucuringu_objective,
    CucuringuConfig,
    path_core_scores,
)
from .nulls import parametric_er, rewire_preserve_degrees, rewire_preserve_m
from .optimize import BORGATTI, greedy_restarts, lip_solver, node_order_sweep, cucuringu

_KINDS = {
    "rewire_preserve_m": "rewire_preserve_m",
    "preserve-m": "rewire_preserve_m",
    "rewire_preserve_degrees": "rewire_preserve_degrees",
    "preserve-degrees": "rewire_preserve_degrees",
    "parametric_er": "parametric_er",
    "er": "parametric_er",
}


@dataclass(frozen=True)
class NullSpec:
    """Null family, replicate count, master seed and (degree-preserving only) swap count.

    ``swap_count=None`` means ``10 m`` attempted swaps.
    """

    kind: str
    B: int = 199
    seed: Optional[int] = None
    swap_count: Optional[int] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DataError(f"unknown null model {self.kind!r}")
        object.__setattr__(self, "kind", _KINDS[self.kind])
        if int(self.B) < 1:
            raise DataError("B must be >= 1")
        if self.swap_count is not None and self.swap_count < 1:
            raise DataError("swap_count must be >= 1")

    def sampler(self, g):
        if self.kind == "rewire_preserve_m":
            return lambda s: rewire_preserve_m(g, s)
        if self.kind == "parametric_er":
            return lambda s: parametric_er(g, s)
        swaps = 10 * g.m if self.swap_count is None else self.swap_count
        return lambda s: rewire_preserve_degrees(g, swaps, s)

    def to_dict(self, g=None):
        d = {"kind": self.kind, "B": int(self.B), "seed": self.seed}
        if self.kind == "rewire_preserve_degrees":
            d["swap_count"] = self.swap_count if self.swap_count is not None or g is None else 10 * g.m
        return d


@dataclass(frozen=True)
class Statistic:
    """A named statistic: ``detect(g, seed)`` picks labels and ``score(g, c)`` scores them.

    ``detect=None`` marks a statistic of the graph alone (``score(g, None)``).
    """

    name: str
    score: Callable
    detect: Optional[Callable] = None


def _borgatti_detect(g, seed, restarts=10):
    return greedy_restarts(g, BORGATTI, restarts=restarts, seed=seed)


def _path_core_detect(g, seed, cfg=CucuringuConfig()):
    order = np.argsort(-path_core_scores(g), kind="stable")
    return node_order_sweep(g, order, cucuringu(cfg))


STATISTICS = {
    "borgatti": Statistic("borgatti", borgatti_rho, _borgatti_detect),
    "brusco": Statistic("brusco", lambda g, c: -float(brusco_misfit(g, c)), lambda g, s: lip_solver(g)),
    "cucuringu": Statistic("cucuringu", lambda g, c: cucuringu_objective(g, c), _path_core_detect),
    "centralization": Statistic("centralization", lambda g, c: cp_centralization(cp_profile(g))),
}


def get_statistic(name):
    try:
        return STATISTICS[name]
    except KeyError:
        raise DataError(f"unknown statistic {name!r}; choose from {sorted(STATISTICS)}") from None


def upper_tail_pvalue(observed, replicates):
    """``(1 + #{replicates >= observed}) / (B + 1)``, with a relative tie tolerance of 1e-12."""
    reps = np.asarray(replicates, dtype=float)
    tol = 1e-12 * max(1.0, abs(observed))
    return (1 + int(np.count_nonzero(reps >= observed - tol))) / (reps.size + 1)


@dataclass
class TestResult:
    __test__ = False  # keep pytest from collecting this class

    statistic: float
    p_value: float
    B: int
    null: NullSpec
    seed: object
    metric: str
    mode: str = "rerun-detector"
    replicates: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)

    def to_dict(self, include_replicates=True):
        d = {
            "metric": self.metric,
            "statistic": _json_float(self.statistic),
            "p_value": self.p_value,
            "B": self.B,
            "null": self.null.to_dict() if self.null is not None else None,
            "seed": self.seed,
            "mode": self.mode,
            "meta": self.meta,
        }
        if include_replicates and self.replicates is not None:
            d["replicates"] = [_json_float(x) for x in self.replicates]
        return d

    def to_json(self, **kw):
        return json.dumps(self.to_dict(**kw), sort_keys=True)


def _json_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def permutation_test(g, metric, null, labels=None, frozen=False):
    """Monte Carlo upper-tail test of a core-periphery statistic.

    Parameters
    ----------
    metric : str or Statistic
    null : NullSpec
    labels : CoreAssignment, optional
        Observed labels; by default the statistic's detector chooses them.
    frozen : bool
        Score every replicate with the observed labels instead of rerunning
        the detector on it.

    Notes
    -----
    The detector, replicate graphs and per-replicate detector runs all use
    named children of ``null.seed``.  A :class:`DegenerateEnsembleWarning`
    is issued (and recorded in ``meta``) when every replicate equals the
    input graph.
    """
    stat = get_statistic(metric) if isinstance(metric, str) else metric
    if stat.detect is None:
        frozen = False
    detect_seed = _rng.named_child(null.seed, "detect")
    if stat.detect is None:
        c_obs = None
    elif labels is not None:
        c_obs = CoreAssignment(as_labels(labels, g.n))
    else:
        c_obs = stat.detect(g, detect_seed)
    observed = float(stat.score(g, c_obs))
    samp = null.sampler(g)
    rep_seeds = _rng.spawn(_rng.named_child(null.seed, "replicates"), null.B)
    det_seeds = _rng.spawn(_rng.named_child(null.seed, "replicate-detect"), null.B)

    def one(b):
        h = samp(rep_seeds[b])
        if stat.detect is None:
            c = None
        elif frozen:
            c = c_obs
        else:
            c = stat.detect(h, det_seeds[b])
        return float(stat.score(h, c)), h == g

    out = ordered_map(one, range(null.B))
    reps = np.array([v for v, _ in out])
    meta = {}
    if all(same for _, same in out):
        msg = "every null replicate equals the input graph; the test has no power"
        warnings.warn(msg, DegenerateEnsembleWarning, stacklevel=2)
        meta["degenerate_ensemble"] = msg
    if c_obs is not None:
        meta["K"] = c_obs.K
    return TestResult(
        statistic=observed,
        p_value=upper_tail_pvalue(observed, reps),
        B=int(null.B),
        null=null,
        seed=null.seed,
        metric=stat.name,
        mode="frozen-labels" if frozen else ("rerun-detector" if stat.detect else "graph-statistic"),
        replicates=reps,
        meta=meta,
    )


@dataclass(frozen=True)
class ZScoreResult:
    """Centralization z-score against a degree-preserving ensemble (sample standard deviation)."""

    z: float
    observed: float
    mean: float
    sd: float
    replicates: np.ndarray
    B: int
    n_swaps: int
    seed: object
    zero_variance: bool = False
    explanation: str = ""

    def to_dict(self):
        return {
            "z": _json_float(self.z),
            "observed": self.observed,
            "mean": self.mean,
            "sd": self.sd,
            "B": self.B,
            "n_swaps": self.n_swaps,
            "seed": self.seed,
            "zero_variance": self.zero_variance,
            "explanation": self.explanation,
            "replicates": [float(x) for x in self.replicates],
        }


def rossa_zscore(g, B=100, n_swaps=None, seed=None):
    """``z = (C - mean C*) / sd C*`` for the profile centralization ``C``.

    With zero ensemble variance (every replicate has the same ``C``, as for
    the star) ``z`` is reported as ``+inf`` (``-inf`` if ``C`` is below the
    ensemble value) with ``zero_variance=True``.
    """
    if g.m < 2:
        raise DataError("the z-score needs at least two edges")
    if B < 2:
        raise DataError("B must be >= 2 for a sample standard deviation")
    swaps = 10 * g.m if n_swaps is None else int(n_swaps)
    observed = cp_centralization(cp_profile(g))
    seeds = _rng.spawn(seed, B)
    reps = np.array(
        ordered_map(lambda s: cp_centralization(cp_profile(rewire_preserve_degrees(g, swaps, s))), seeds)
    )
    mean = float(reps.mean())
    sd = float(reps.std(ddof=1))
    if sd <= 1e-15 * max(1.0, abs(mean)):
        z = math.inf if observed >= mean else -math.inf
        why = "all replicates share one centralization value, so the z-score denominator is zero"
        return ZScoreResult(z, observed, mean, 0.0, reps, B, swaps, seed, True, why)
    return ZScoreResult((observed - mean) / sd, observed, mean, sd, reps, B, swaps, seed)


def _log_hypergeom_pmf(k, N, S, m):
    return (
        special.gammaln(S + 1) - special.gammaln(k + 1) - special.gammaln(S - k + 1)
        + special.gammaln(N - S + 1) - special.gammaln(m - k + 1) - special.gammaln(N - S - m + k + 1)
        - special.gammaln(N + 1) + special.gammaln(m + 1) + special.gammaln(N - m + 1)
    )


def hypergeom_upper_tail(ell, N, S, m):
    """``P(X >= ell)`` for ``X ~ Hypergeometric(population N, successes S, draws m)``, in log space."""
    lo, hi = max(0, m - (N - S)), min(S, m)
    if ell <= lo:
        return 1.0
    if ell > hi:
        return 0.0
    k = np.arange(ell, hi + 1, dtype=float)
    return float(min(1.0, np.exp(special.logsumexp(_log_hypergeom_pmf(k, N, S, m)))))


def surprise_pvalue(g, c):
    """Exact chance that ``m`` uniformly placed edges put at least the observed number on core-incident pairs."""
    lab = as_labels(c, g.n)
    n = g.n
    K, mcc, mcp, _ = block_counts(g, lab)
    N = n * (n - 1) // 2
    S = K * (K - 1) // 2 + K * (n - K)
    return hypergeom_upper_tail(int(mcc + mcp), N, S, g.m)
