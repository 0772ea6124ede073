"""Null-model graph samplers for significance testing."""
import numba
import numpy as np

from . import _rng
from .errors import DataError
from .generators import generate_er, generate_gnm
from .graph import Graph


def rewire_preserve_m(g, seed=None):
    """Uniform simple graph with the same node and edge counts as ``g``.

    Drawn directly (``m`` distinct pairs without replacement), which is the
    stationary law of edge-count-preserving rewiring.
    """
    return generate_gnm(g.n, g.m, seed)


@numba.njit(cache=True)
def _swap(u, v, n, pick1, pick2, flip):
    # a typed dict rather than a set: numba's set degrades under repeated
    # discard/add and can stall on lookups
    edges = dict()
    for e in range(u.size):
        edges[u[e] * n + v[e]] = True
    done = 0
    for t in range(pick1.size):
        e1 = pick1[t]
        e2 = pick2[t]
        if e1 == e2:
            continue
        a, b = u[e1], v[e1]
        c, d = u[e2], v[e2]
        if flip[t]:
            c, d = d, c
        # (a, b), (c, d) -> (a, d), (c, b)
        if a == d or c == b:
            continue
        x1, y1 = min(a, d), max(a, d)
        x2, y2 = min(c, b), max(c, b)
        k1 = x1 * n + y1
        k2 = x2 * n + y2
        if k1 == k2 or k1 in edges or k2 in edges:
            continue
        del edges[u[e1] * n + v[e1]]
        del edges[u[e2] * n + v[e2]]
        edges[k1] = True
        edges[k2] = True
        u[e1], v[e1] = x1, y1
        u[e2], v[e2] = x2, y2
        done += 1
    return done


def rewire_preserve_degrees(g, n_swaps=None, seed=None, return_accepted=False):
    """Degree-preserving randomization by double-edge swaps.

    ``n_swaps`` attempted swaps (default ``10 m``); proposals that would
    create a self-loop or a repeated edge are rejected, so the chain is
    symmetric and its stationary law is uniform over simple graphs with the
    input degree sequence.
    """
    if n_swaps is None:
        n_swaps = 10 * g.m
    if n_swaps < 0:
        raise DataError("n_swaps must be non-negative")
    e = g.edges()
    if g.m < 2 or n_swaps == 0:
        return (g, 0) if return_accepted else g
    rng = _rng.as_generator(seed)
    pick1 = rng.integers(0, g.m, size=n_swaps)
    pick2 = rng.integers(0, g.m, size=n_swaps)
    flip = rng.integers(0, 2, size=n_swaps).astype(np.bool_)
    u = e[:, 0].copy()
    v = e[:, 1].copy()
    done = _swap(u, v, np.int64(g.n), pick1, pick2, flip)
    out = Graph.from_edges(np.column_stack([u, v]), n=g.n, node_names=g.node_names, warn=False)
    return (out, int(done)) if return_accepted else out


def estimated_density(g):
    N = g.n * (g.n - 1) / 2
    return g.m / N if N else 0.0


def parametric_er(g, seed=None):
    """ER draw at the observed edge density."""
    if g.n < 2:
        raise DataError("parametric ER bootstrap needs n >= 2")
    return generate_er(g.n, estimated_density(g), seed)
