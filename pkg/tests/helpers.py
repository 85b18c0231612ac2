"""Shared builders and independent oracles for the test suite.

The oracles work on plain nested tuples and python loops — deliberately a
different route than the library's vectorized implementations, so the two
can disagree when one is wrong.
"""

from itertools import combinations

import numpy as np

from hcratio import SimilarityGraph


# -- graph builders ----------------------------------------------------------

def graph_from(W, epsilon=0.0):
    return SimilarityGraph(np.asarray(W), epsilon=epsilon)


def from_edges(n, edges):
    """Unit weights unless an edge is given as (u, v, w)."""
    W = np.zeros((n, n), dtype=np.int64)
    for e in edges:
        u, v, w = e if len(e) == 3 else (*e, 1)
        W[u, v] = W[v, u] = w
    return graph_from(W)


def path_graph(n):
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def clique_graph(n, w=1):
    W = np.full((n, n), w, dtype=np.int64)
    np.fill_diagonal(W, 0)
    return graph_from(W)


def star_graph(n, center=0):
    return from_edges(n, [(center, v) for v in range(n) if v != center])


def linked_stars(n):
    """Two stars on n/2 vertices each, centers 0 and n/2 joined by an edge."""
    assert n % 2 == 0 and n >= 4
    h = n // 2
    edges = [(0, v) for v in range(1, h)] + [(h, v) for v in range(h + 1, n)]
    edges.append((0, h))
    return from_edges(n, edges)


def matching_graph(n, pairs):
    return from_edges(n, list(pairs))


def random_int_graph(rng, n, wmax=3, density=1.0):
    W = np.zeros((n, n), dtype=np.int64)
    iu = np.triu_indices(n, 1)
    vals = rng.integers(0, wmax + 1, size=len(iu[0]))
    if density < 1.0:
        vals = vals * (rng.random(len(iu[0])) < density)
    W[iu] = vals
    return graph_from(W + W.T)


def random_nested(rng, n):
    """Random binary tree on 0..n-1 by repeatedly joining two random parts."""
    parts = list(range(n))
    while len(parts) > 1:
        i, j = sorted(rng.choice(len(parts), size=2, replace=False))
        b = parts.pop(j)
        a = parts.pop(i)
        parts.append((a, b))
    return parts[0]


def is_connected(g):
    n = g.n
    if n == 0:
        return False
    seen = {0}
    frontier = [0]
    while frontier:
        u = frontier.pop()
        for v in range(n):
            if v not in seen and g.weights[u, v] > 0:
                seen.add(v)
                frontier.append(v)
    return len(seen) == n


# -- nested-tuple oracles ----------------------------------------------------

def leaves_of(nested):
    if isinstance(nested, int):
        return {nested}
    out = set()
    for child in nested:
        out |= leaves_of(child)
    return out


def pair_cluster_size(nested, i, j):
    """Leaf count of the smallest cluster containing both i and j."""
    while True:
        # a child holding both i and j can never be a bare leaf
        for child in nested:
            s = leaves_of(child)
            if i in s and j in s:
                nested = child
                break
        else:
            return len(leaves_of(nested))


def triplet_relation(nested, i, j, k):
    """('pair', (a, b), out) for the first-merged pair, or ('simul',)."""
    while True:
        homes = []
        for x in (i, j, k):
            for ci, child in enumerate(nested):
                if x in leaves_of(child):
                    homes.append(ci)
                    break
        if homes[0] == homes[1] == homes[2]:
            nested = nested[homes[0]]
            continue
        if len(set(homes)) == 3:
            return ("simul",)
        trip = (i, j, k)
        for x in range(3):
            for y in range(x + 1, 3):
                if homes[x] == homes[y]:
                    out = trip[3 - x - y]
                    return ("pair", (min(trip[x], trip[y]), max(trip[x], trip[y])), out)


def oracle_dasgupta(W, nested):
    W = np.asarray(W)
    n = W.shape[0]
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            if W[i, j] > 0:
                total += W[i, j].item() * pair_cluster_size(nested, i, j)
    return total


def oracle_total(W, nested):
    W = np.asarray(W)
    n = W.shape[0]
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            if W[i, j] > 0:
                total += W[i, j].item() * (pair_cluster_size(nested, i, j) - 2)
    return total


def oracle_triplet_sum(W, nested):
    """Total cost as the sum over triplets of what the merge order charges."""
    W = np.asarray(W)
    n = W.shape[0]
    total = 0
    for i, j, k in combinations(range(n), 3):
        rel = triplet_relation(nested, i, j, k)
        if rel[0] == "simul":
            total += (W[i, j] + W[i, k] + W[j, k]).item()
        else:
            (a, b), out = rel[1], rel[2]
            total += (W[a, out] + W[b, out]).item()
    return total


def oracle_base(W):
    """Sum over triplets of the two smallest pairwise weights; plain loops."""
    W = np.asarray(W)
    n = W.shape[0]
    total = 0
    for i, j, k in combinations(range(n), 3):
        ws = sorted((W[i, j].item(), W[i, k].item(), W[j, k].item()))
        total += ws[0] + ws[1]
    return total


def oracle_min_triplet(W, i, j, k):
    ws = sorted((W[i][j], W[i][k], W[j][k]))
    return ws[0] + ws[1]
