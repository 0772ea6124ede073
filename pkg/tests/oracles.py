"""Slow, direct reference implementations used only by the tests.

Each oracle recomputes a quantity from its definition with plain loops over
dense matrices or node pairs, sharing no code with the package.
"""
import itertools
import math
from fractions import Fraction

import numpy as np


def dense(g):
    a = np.zeros((g.n, g.n), dtype=np.int64)
    for i in range(g.n):
        for j in g.neighbors(i):
            a[i, j] = 1
    return a


def floyd_warshall(a):
    n = a.shape[0]
    inf = 10**9
    d = np.where(a > 0, 1, inf)
    np.fill_diagonal(d, 0)
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return np.where(d >= inf, -1, d)


def popcount_degrees(a):
    return [sum(int(x) for x in row) for row in a]


def block_counts_loop(a, lab):
    n = a.shape[0]
    cc = cp = pp = 0
    for i in range(n):
        for j in range(i + 1, n):
            if a[i, j]:
                if lab[i] and lab[j]:
                    cc += 1
                elif lab[i] or lab[j]:
                    cp += 1
                else:
                    pp += 1
    return cc, cp, pp


def pearson_loop(a, lab):
    xs, ys = [], []
    n = a.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            xs.append(float(a[i, j]))
            ys.append(1.0 if (lab[i] or lab[j]) else 0.0)
    N = len(xs)
    mx, my = sum(xs) / N, sum(ys) / N
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    return sxy / math.sqrt(sxx * syy)


def brusco_loop(a, lab):
    n = a.shape[0]
    z = 0
    for i in range(n):
        for j in range(i + 1, n):
            if lab[i] and lab[j] and a[i, j]:
                z += 1
            if not lab[i] and not lab[j] and not a[i, j]:
                z += 1
    return z


def misfit_loop(a, lab):
    """Core-core non-edges plus periphery-periphery edges."""
    n = a.shape[0]
    z = 0
    for i in range(n):
        for j in range(i + 1, n):
            if lab[i] and lab[j] and not a[i, j]:
                z += 1
            if not lab[i] and not lab[j] and a[i, j]:
                z += 1
    return z


def all_labelings(n):
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int8)


def exhaustive_best(score, n, skip_invalid=True):
    """Best value and the labelings attaining it, scoring every 0/1 vector."""
    best, arg = -math.inf, []
    for lab in all_labelings(n):
        try:
            v = score(lab)
        except ArithmeticError:
            continue
        if v is None or (isinstance(v, float) and math.isnan(v)):
            continue
        if v > best + 1e-12 * max(1, abs(best)):
            best, arg = v, [lab]
        elif abs(v - best) <= 1e-12 * max(1, abs(best)):
            arg.append(lab)
    return best, arg


def closeness_set(dist, U):
    n = dist.shape[0]
    tot = 0.0
    for i in U:
        for j in range(n):
            if j != i:
                tot += dist[i, j]
    return 1.0 / (tot / (len(U) * (n - 1)))


def capacity_from_dist(dist):
    n = dist.shape[0]
    c = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i, j] > 0:
                c += 1.0 / dist[i, j]
    return c


def remove_nodes(a, nodes):
    keep = [i for i in range(a.shape[0]) if i not in set(nodes)]
    return a[np.ix_(keep, keep)]


def all_shortest_paths(a, s, t):
    """Every shortest s-t path, by breadth-first path extension."""
    if s == t:
        return [[s]]
    frontier = [[s]]
    seen = {s}
    while frontier:
        nxt = []
        found = []
        level_seen = set()
        for path in frontier:
            for v in np.flatnonzero(a[path[-1]]):
                v = int(v)
                if v in seen:
                    continue
                if v == t:
                    found.append(path + [v])
                else:
                    nxt.append(path + [v])
                    level_seen.add(v)
        if found:
            return found
        seen |= level_seen
        frontier = nxt
    return []


def hypergeom_tail_enumerate(N, S, m, ell):
    """P(X >= ell) by listing every m-subset of N items (the first S are successes)."""
    hits = total = 0
    for sub in itertools.combinations(range(N), m):
        total += 1
        if sum(1 for x in sub if x < S) >= ell:
            hits += 1
    return Fraction(hits, total)


def hypergeom_tail_count(N, S, m, ell):
    """Same tail by exact subset counting: a DP over items, tracking (size, successes)."""
    # ways[j][k] = number of j-subsets of the items seen so far with k successes
    ways = [[0] * (S + 1) for _ in range(m + 1)]
    ways[0][0] = 1
    for item in range(N):
        success = item < S
        for j in range(min(m, item + 1), 0, -1):
            row, prev = ways[j], ways[j - 1]
            if success:
                for k in range(S, 0, -1):
                    row[k] += prev[k - 1]
            else:
                for k in range(S + 1):
                    row[k] += prev[k]
    total = sum(ways[m])
    return Fraction(sum(ways[m][ell:]) if ell <= S else 0, total)


def beta_moments(a, b):
    """Mean, variance and fourth central moment of Beta(a, b)."""
    mean = a / (a + b)
    var = a * b / ((a + b) ** 2 * (a + b + 1))
    s = a + b
    # raw moments E[X^k] = prod_{r<k} (a + r) / (s + r)
    raw = [1.0]
    for k in range(1, 5):
        raw.append(raw[-1] * (a + k - 1) / (s + k - 1))
    mu4 = raw[4] - 4 * mean * raw[3] + 6 * mean**2 * raw[2] - 3 * mean**4
    return mean, var, mu4
