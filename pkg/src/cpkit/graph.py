"""Immutable simple undirected graphs and the traversal kernels built on them.

Graphs are stored in compressed sparse row form with sorted neighbor lists.
Distances use :data:`UNREACHABLE` (``-1``) for pairs with no connecting path.
"""
import hashlib
import warnings
from typing import NamedTuple

import numba
import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import DataError, InputCleanupWarning, NotAnEdge, UnreachablePair

UNREACHABLE = -1


def _frozen(a, dtype):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


class Graph:
    """Simple undirected graph on nodes ``0..n-1``.

    Build one with :meth:`from_edges` or :meth:`from_adjacency`; the
    constructor itself expects already-clean CSR arrays.

    Attributes
    ----------
    n : int
        Number of nodes.
    m : int
        Number of edges.
    indptr, indices : ndarray
        CSR structure; ``indices[indptr[i]:indptr[i+1]]`` is the strictly
        increasing neighbor list of node ``i``.
    node_names : tuple or None
        Original labels, if the graph was read from a file.
    """

    __slots__ = ("n", "m", "indptr", "indices", "node_names", "_degrees")

    def __init__(self, n, indptr, indices, node_names=None):
        self.n = int(n)
        self.indptr = _frozen(indptr, np.int64)
        self.indices = _frozen(indices, np.int64)
        if self.indptr.shape != (self.n + 1,):
            raise DataError("indptr must have length n + 1")
        self.m = int(self.indices.size // 2)
        if node_names is not None:
            node_names = tuple(node_names)
            if len(node_names) != self.n:
                raise DataError("node_names must have one entry per node")
        self.node_names = node_names
        self._degrees = _frozen(np.diff(self.indptr), np.int64)

    def __setattr__(self, name, value):
        if hasattr(self, "_degrees"):
            raise AttributeError("Graph is immutable")
        object.__setattr__(self, name, value)

    @classmethod
    def from_edges(cls, edges, n=None, node_names=None, warn=True):
        """Build a graph from an iterable of ``(i, j)`` integer pairs.

        Self-loops and repeated edges are dropped (with an
        :class:`InputCleanupWarning` unless ``warn`` is false).
        """
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if e.size == 0:
            e = e.reshape(0, 2)
        if e.ndim != 2 or e.shape[1] != 2:
            raise DataError("edges must be a sequence of pairs")
        if e.size and e.min() < 0:
            raise DataError("node indices must be non-negative")
        if n is None:
            n = int(e.max()) + 1 if e.size else 0
        elif e.size and e.max() >= n:
            raise DataError(f"edge endpoint {int(e.max())} out of range for n={n}")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        loops = lo == hi
        key = np.unique(lo[~loops] * n + hi[~loops])
        dropped = int(loops.sum()) + int((~loops).sum() - key.size)
        if dropped and warn:
            warnings.warn(
                f"dropped {int(loops.sum())} self-loop(s) and "
                f"{int((~loops).sum() - key.size)} duplicate edge(s)",
                InputCleanupWarning,
                stacklevel=2,
            )
        return cls._from_pairs(n, key // n if n else key, key % n if n else key, node_names)

    @classmethod
    def _from_pairs(cls, n, i, j, node_names=None):
        # i < j, unique; symmetric CSR with sorted rows
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        rows = np.concatenate([i, j])
        cols = np.concatenate([j, i])
        order = np.lexsort((cols, rows))
        counts = np.bincount(rows, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(n, indptr, cols[order], node_names)

    @classmethod
    def from_adjacency(cls, a):
        """Build a graph from a symmetric 0/1 matrix (dense or scipy sparse)."""
        if sparse.issparse(a):
            a = sparse.coo_matrix(a)
            n = a.shape[0]
            mask = a.data != 0
            r, c = a.row[mask], a.col[mask]
        else:
            a = np.asarray(a)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise DataError("adjacency matrix must be square")
            n = a.shape[0]
            r, c = np.nonzero(a)
        if a.shape[0] != a.shape[1]:
            raise DataError("adjacency matrix must be square")
        upper = {(int(x), int(y)) for x, y in zip(r, c) if x < y}
        lower = {(int(y), int(x)) for x, y in zip(r, c) if x > y}
        if upper != lower:
            raise DataError("adjacency matrix is not symmetric")
        return cls.from_edges(np.array(sorted(upper), dtype=np.int64).reshape(-1, 2), n=n)

    @property
    def degrees(self):
        return self._degrees

    def neighbors(self, i):
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def has_edge(self, i, j):
        nb = self.neighbors(i)
        k = np.searchsorted(nb, j)
        return bool(k < nb.size and nb[k] == j)

    def edges(self):
        """``(m, 2)`` array of edges ``(i, j)``, ``i < j``, in lexicographic order."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self._degrees)
        keep = rows < self.indices
        return np.column_stack([rows[keep], self.indices[keep]])

    def to_csr(self):
        data = np.ones(self.indices.size, dtype=np.int8)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def to_dense(self):
        a = np.zeros((self.n, self.n), dtype=np.int8)
        e = self.edges()
        a[e[:, 0], e[:, 1]] = 1
        a[e[:, 1], e[:, 0]] = 1
        return a

    def induced(self, keep):
        """Subgraph induced by a boolean mask or index array; nodes renumbered in order."""
        keep = np.asarray(keep)
        if keep.dtype != bool:
            mask = np.zeros(self.n, dtype=bool)
            mask[keep] = True
            keep = mask
        new_id = np.cumsum(keep) - 1
        e = self.edges()
        sel = keep[e[:, 0]] & keep[e[:, 1]]
        names = None
        if self.node_names is not None:
            names = [nm for nm, k in zip(self.node_names, keep) if k]
        return Graph._from_pairs(int(keep.sum()), new_id[e[sel, 0]], new_id[e[sel, 1]], names)

    def fingerprint(self):
        """SHA-256 of the structure (node names excluded)."""
        h = hashlib.sha256()
        h.update(np.int64(self.n).tobytes())
        h.update(self.indptr.tobytes())
        h.update(self.indices.tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash(self.fingerprint())

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# Deterministic constructions
# ---------------------------------------------------------------------------


def empty_graph(n):
    return Graph._from_pairs(n, [], [])


def complete_graph(n):
    i, j = np.triu_indices(n, 1)
    return Graph._from_pairs(n, i, j)


def star_graph(n):
    """Star on ``n`` nodes with centre 0."""
    return Graph._from_pairs(n, np.zeros(n - 1, dtype=np.int64), np.arange(1, n))


def path_graph(n):
    return Graph._from_pairs(n, np.arange(n - 1), np.arange(1, n))


def cycle_graph(n):
    e = np.column_stack([np.arange(n), (np.arange(n) + 1) % n])
    return Graph.from_edges(e, n=n)


def ideal_cp_graph(n, k):
    """Ideal core-periphery graph: nodes ``0..k-1`` form the core.

    Every pair with at least one core endpoint is joined; the periphery is an
    independent set.
    """
    i, j = np.triu_indices(n, 1)
    keep = i < k
    return Graph._from_pairs(n, i[keep], j[keep])


# ---------------------------------------------------------------------------
# Degrees and distances
# ---------------------------------------------------------------------------


class DistanceRow(NamedTuple):
    source: int
    dist: np.ndarray


def degrees(g):
    """Degree sequence ``d_i = |adj(i)|`` as a fresh array."""
    return np.array(g.degrees)


def _expand(indptr, indices, frontier):
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    offs = np.repeat(starts - np.concatenate([[0], np.cumsum(counts)[:-1]]), counts)
    return np.repeat(frontier, counts), indices[np.arange(total) + offs]


def _bfs(g, source, skip=None, count_dtype=np.int64):
    """Level-synchronous BFS returning hop distances and shortest-path counts.

    ``skip`` is an edge ``(u, v)`` treated as absent.
    """
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    sigma = np.zeros(g.n, dtype=count_dtype)
    dist[source] = 0
    sigma[source] = 1
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        src, dst = _expand(g.indptr, g.indices, frontier)
        if skip is not None:
            u, v = skip
            cut = ((src == u) & (dst == v)) | ((src == v) & (dst == u))
            src, dst = src[~cut], dst[~cut]
        fresh = dist[dst] == UNREACHABLE
        dist[dst[fresh]] = level + 1
        on_level = dist[dst] == level + 1
        np.add.at(sigma, dst[on_level], sigma[src[on_level]])
        frontier = np.unique(dst[fresh])
        level += 1
    return dist, sigma


def bfs_distances(g, source):
    """Unweighted hop distances from ``source``."""
    if not 0 <= source < g.n:
        raise DataError(f"source {source} out of range")
    dist, _ = _bfs(g, source)
    return DistanceRow(int(source), dist)


def all_pairs_distances(g, sources=None):
    """Hop-distance matrix (rows = ``sources``, default all nodes)."""
    if g.n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    d = csgraph.shortest_path(g.to_csr(), method="D", directed=False, unweighted=True, indices=sources)
    out = np.full(d.shape, UNREACHABLE, dtype=np.int64)
    finite = np.isfinite(d)
    out[finite] = d[finite].astype(np.int64)
    return out


def _closeness_from_rows(rows, sources, n):
    if n < 2:
        raise DataError("closeness needs at least two nodes")
    rows = np.asarray(rows)
    off = np.ones(rows.shape, dtype=bool)
    off[np.arange(len(sources)), sources] = False
    if np.any(rows[off] == UNREACHABLE):
        raise UnreachablePair("closeness is undefined: some required pair is disconnected")
    return len(sources) * (n - 1) / float(rows[off].sum())


def closeness_centrality(g, nodes):
    """Closeness of a node set: inverse mean distance from its members to all other nodes."""
    nodes = np.unique(np.asarray(nodes, dtype=np.int64))
    if nodes.size == 0:
        raise DataError("closeness of an empty node set is undefined")
    return _closeness_from_rows(all_pairs_distances(g, nodes), nodes, g.n)


def node_closeness(g, dist=None):
    """Closeness of every single node; requires a connected graph."""
    if dist is None:
        dist = all_pairs_distances(g)
    if np.any(dist == UNREACHABLE):
        raise UnreachablePair("closeness is undefined on a disconnected graph")
    if g.n < 2:
        raise DataError("closeness needs at least two nodes")
    return (g.n - 1) / dist.sum(axis=1).astype(float)


def capacity(g, chunk=512):
    """Sum over unordered pairs of inverse distance; disconnected pairs add 0."""
    total = 0.0
    for lo in range(0, g.n, chunk):
        src = np.arange(lo, min(lo + chunk, g.n))
        d = all_pairs_distances(g, src).astype(float)
        upper = np.arange(g.n)[None, :] > src[:, None]
        sel = upper & (d > 0)
        total += float(np.sum(1.0 / d[sel]))
    return total


# ---------------------------------------------------------------------------
# k-cores
# ---------------------------------------------------------------------------


@numba.njit(cache=True)
def _core_numbers(indptr, indices):
    # Batagelj-Zaversnik bucket peeling, O(n + m)
    n = indptr.size - 1
    deg = np.empty(n, np.int64)
    md = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] > md:
            md = deg[v]
    bins = np.zeros(md + 1, np.int64)
    for v in range(n):
        bins[deg[v]] += 1
    start = 0
    for d in range(md + 1):
        num = bins[d]
        bins[d] = start
        start += num
    pos = np.empty(n, np.int64)
    vert = np.empty(n, np.int64)
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(md, 0, -1):
        bins[d] = bins[d - 1]
    if md >= 0 and bins.size:
        bins[0] = 0
    for i in range(n):
        v = vert[i]
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bins[du] += 1
                deg[u] -= 1
    return deg


def core_numbers(g):
    """Largest ``k`` such that each node belongs to the ``k``-core."""
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    return _core_numbers(g.indptr, g.indices)


def k_core(g, k, cores=None):
    """Nodes of the maximal subgraph whose members all have >= ``k`` neighbors inside it."""
    if cores is None:
        cores = core_numbers(g)
    return np.flatnonzero(cores >= k)


# ---------------------------------------------------------------------------
# Shortest-path counting with one edge removed
# ---------------------------------------------------------------------------


def path_counts_excluding(g, j, k, count_dtype=np.int64):
    """Shortest ``j``-``k`` paths once the edge ``(j, k)`` is removed.

    Returns
    -------
    sigma : int
        Number of shortest paths (0 if removal disconnects ``j`` and ``k``).
    through : ndarray
        ``through[i]`` is the number of those paths with ``i`` as an interior
        node; zero at ``j`` and ``k``.
    """
    if not g.has_edge(j, k):
        raise NotAnEdge(f"({j}, {k}) is not an edge")
    dj, sj = _bfs(g, j, skip=(j, k), count_dtype=count_dtype)
    through = np.zeros(g.n, dtype=count_dtype)
    if dj[k] == UNREACHABLE:
        return count_dtype(0), through
    dk, sk = _bfs(g, k, skip=(j, k), count_dtype=count_dtype)
    on_path = (dj >= 0) & (dk >= 0) & (dj + dk == dj[k])
    on_path[[j, k]] = False
    through[on_path] = sj[on_path] * sk[on_path]
    return sj[k], through
