"""Edge-list reading and writing.

Format: UTF-8 text, one edge per line as two tokens separated by whitespace
or a comma.  Lines starting with ``#`` are comments.  A line with a single
token declares a node without adding an edge, which lets isolated nodes and
node order survive a round trip.  Node labels are densified to ``0..n-1`` in
first-seen order.
"""
import io as _io
import os
import re
import warnings

import numpy as np

from .errors import InputCleanupWarning, ParseError
from .graph import Graph

_SPLIT = re.compile(r"[\s,]+")


def parse_edge_list(lines, path=None):
    """Parse text, or an iterable of text lines, into a :class:`Graph` with node names."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    index = {}
    names = []
    src, dst = [], []

    def node(tok):
        k = index.get(tok)
        if k is None:
            k = index[tok] = len(names)
            names.append(tok)
        return k

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = [t for t in _SPLIT.split(line) if t]
        if len(toks) == 1:
            node(toks[0])
        elif len(toks) == 2:
            src.append(node(toks[0]))
            dst.append(node(toks[1]))
        else:
            raise ParseError(f"expected one or two tokens, got {len(toks)}", line=lineno, path=path)
    if not names:
        raise ParseError("no nodes or edges found", path=path)
    edges = np.column_stack([np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", InputCleanupWarning)
        g = Graph.from_edges(edges, n=len(names), node_names=names)
    for w in caught:
        warnings.warn(f"{path or '<input>'}: {w.message}", InputCleanupWarning, stacklevel=2)
    return g


def read_edge_list(path):
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, path=os.fspath(path))


def format_edge_list(g):
    """Render ``g`` as edge-list text using its node names when present."""
    names = g.node_names if g.node_names is not None else [str(i) for i in range(g.n)]
    e = g.edges()
    out = _io.StringIO()
    out.write(f"# n={g.n} m={g.m}\n")
    seen = np.full(g.n, -1, dtype=np.int64)
    flat = e.ravel()
    if flat.size:
        first = np.unique(flat, return_index=True)
        seen[first[0]] = first[1]
    order = np.argsort(np.where(seen < 0, np.iinfo(np.int64).max, seen), kind="stable")
    if np.any(seen < 0) or not np.array_equal(order, np.arange(g.n)):
        for v in range(g.n):
            out.write(f"{names[v]}\n")
    for i, j in e:
        out.write(f"{names[i]} {names[j]}\n")
    return out.getvalue()


def write_edge_list(g, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edge_list(g))
