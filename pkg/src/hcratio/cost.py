"""Cost functions for (similarity graph, clustering tree) pairs.

The headline quantities: the classic weighted-LCA-size objective, the
shifted total cost (same minimizers, zero lower bound), the graph-only
base cost, and their ratio.  A tree is *consistent* with the graph when
every vertex triplet is merged as cheaply as its weights allow — which
happens exactly when total cost equals base cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import LeafMismatch
from .graph import SimilarityGraph, base_cost, _check_triplet
from .tree import HcTree

Value = Union[int, float]


@dataclass(frozen=True)
class CostReport:
    """All scalar costs of one (graph, tree) pair."""

    dasgupta: Value
    total: Value
    base: Value
    ratio: Union[Fraction, float]
    consistent: bool


def _lca_counts(g: SimilarityGraph, t: HcTree) -> np.ndarray:
    if t.vertices != tuple(range(g.n)):
        raise LeafMismatch(
            f"tree leaves {t.vertices[:6]}... do not match graph vertices 0..{g.n - 1}")
    return t.lca_leaf_counts()


def dasgupta_cost(g: SimilarityGraph, t: HcTree) -> Value:
    """Sum over positive-weight pairs of weight x (leaves under their LCA)."""
    M = _lca_counts(g, t)
    ii, jj = g.positive_pairs()
    return (g.weights[ii, jj] * M[ii, jj]).sum().item() if len(ii) else 0


def total_cost(g: SimilarityGraph, t: HcTree) -> Value:
    """Dasgupta cost shifted down by twice the total weight.

    Computed edge-wise as weight x (LCA leaf count - 2); always >= 0, and 0
    exactly when every positive pair is merged as a sibling cherry.
    """
    M = _lca_counts(g, t)
    ii, jj = g.positive_pairs()
    return (g.weights[ii, jj] * (M[ii, jj] - 2)).sum().item() if len(ii) else 0


def triplet_cost(g: SimilarityGraph, t: HcTree, i: int, j: int, k: int) -> Value:
    """Cost this tree's merge order charges the triplet {i, j, k}.

    The pair merged first is free; the other two weights are paid once each.
    A simultaneous merge pays all three.
    """
    _check_triplet(g, i, j, k)
    rel = t.merge_relation(i, j, k)
    if rel.is_simultaneous:
        return g.weight(i, j) + g.weight(i, k) + g.weight(j, k)
    a, b = rel.pair
    out = rel.outsider
    return g.weight(a, out) + g.weight(b, out)


def ratio_cost(g: SimilarityGraph, t: HcTree) -> Union[Fraction, float]:
    """total / base, with 0/0 = 1 and positive/0 = +inf.

    Exact Fraction for integer-weighted graphs, float otherwise.
    """
    tot = total_cost(g, t)
    base = base_cost(g)
    if base == 0:
        return Fraction(1) if tot == 0 else math.inf
    if g.integral:
        return Fraction(tot, base)
    return tot / base


def find_inconsistent_triplet(
        g: SimilarityGraph, t: HcTree) -> Optional[tuple[int, int, int]]:
    """Lexicographically-first triplet costing more than its weights require.

    None when the tree is consistent with the graph.
    """
    W = g.weights
    M = _lca_counts(g, t)
    n = g.n
    for i in range(n - 2):
        idx = np.arange(i + 1, n)
        wj = W[i, idx]
        mj = M[i, idx]
        w_ij, w_ik = wj[:, None], wj[None, :]
        m_ij, m_ik = mj[:, None], mj[None, :]
        w_jk = W[np.ix_(idx, idx)]
        m_jk = M[np.ix_(idx, idx)]
        # exactly one LCA is strictly lowest (pair merged first), or all tie
        pair_ij = (m_ij < m_ik) & (m_ij < m_jk)
        pair_ik = (m_ik < m_ij) & (m_ik < m_jk)
        pair_jk = (m_jk < m_ij) & (m_jk < m_ik)
        cost = np.where(pair_ij, w_ik + w_jk,
               np.where(pair_ik, w_ij + w_jk,
               np.where(pair_jk, w_ij + w_ik,
                        w_ij + w_ik + w_jk)))
        low = w_ij + w_ik + w_jk - np.maximum(np.maximum(w_ij, w_ik), w_jk)
        bad = cost != low
        m = len(idx)
        bad[np.tril_indices(m)] = False
        if bad.any():
            flat = int(np.argmax(bad))  # row-major => lexicographic (j, k)
            return (i, int(idx[flat // m]), int(idx[flat % m]))
    return None


def is_consistent(g: SimilarityGraph, t: HcTree) -> bool:
    """True iff every triplet is charged the least its weights allow."""
    return find_inconsistent_triplet(g, t) is None


def cost_report(g: SimilarityGraph, t: HcTree) -> CostReport:
    """Evaluate all costs of the pair in one go."""
    M = _lca_counts(g, t)
    ii, jj = g.positive_pairs()
    if len(ii):
        w = g.weights[ii, jj]
        das = (w * M[ii, jj]).sum().item()
        tot = (w * (M[ii, jj] - 2)).sum().item()
    else:
        das = tot = 0
    base = base_cost(g)
    if base == 0:
        ratio: Union[Fraction, float] = Fraction(1) if tot == 0 else math.inf
    elif g.integral:
        ratio = Fraction(tot, base)
    else:
        ratio = tot / base
    return CostReport(dasgupta=das, total=tot, base=base, ratio=ratio,
                      consistent=is_consistent(g, t))
