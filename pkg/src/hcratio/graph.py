"""Similarity graphs: weight-matrix model, triplet classification, base cost.

A similarity graph is a complete weighted graph on vertices ``0..n-1`` with a
symmetric, nonnegative, zero-diagonal weight matrix.  Pairs with weight zero
are "non-edges".  The key graph-only quantity is the base cost: for every
unordered triplet, the sum of its two smallest pairwise weights, summed over
all triplets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DuplicateEdge,
    InvalidTriplet,
    InvalidVertex,
    InvalidWeight,
    ParseError,
    SelfLoop,
)


@dataclass(frozen=True)
class TripletType:
    """Classification of a vertex triplet by its three pairwise weights.

    kind 1: a unique strictly largest weight; ``max_pair`` is that edge.
    kind 2: exactly two tied largest weights; ``apex`` is the vertex the two
            heaviest edges share.
    kind 3: all three weights equal.
    """

    kind: int
    max_pair: Optional[tuple[int, int]] = None
    apex: Optional[int] = None

    @classmethod
    def type1(cls, u: int, v: int) -> "TripletType":
        return cls(1, max_pair=(min(u, v), max(u, v)))

    @classmethod
    def type2(cls, apex: int) -> "TripletType":
        return cls(2, apex=apex)

    @classmethod
    def type3(cls) -> "TripletType":
        return cls(3)

    @property
    def is_type1(self) -> bool:
        return self.kind == 1

    @property
    def is_type2(self) -> bool:
        return self.kind == 2

    @property
    def is_type3(self) -> bool:
        return self.kind == 3


class SimilarityGraph:
    """Immutable similarity graph over vertices ``0..n-1``.

    ``weights`` is kept as a dense numpy matrix: int64 when every entry is
    integral (all downstream sums stay exact), float64 otherwise.  ``labels``
    maps vertex index to the external name used in files and Newick trees.
    ``epsilon`` is the absolute tolerance of the weight-equality predicate
    used for triplet classification (0 means exact comparison).
    """

    __slots__ = ("n", "weights", "labels", "epsilon")

    def __init__(self, weights, labels: Optional[Sequence[str]] = None,
                 epsilon: float = 0.0):
        w = np.asarray(weights)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InvalidWeight("weight matrix must be square")
        if w.dtype.kind not in "iuf":
            raise InvalidWeight("weights must be numeric")
        if w.dtype.kind == "f":
            if not np.all(np.isfinite(w)):
                raise InvalidWeight("weights must be finite")
            if np.all(w == np.floor(w)) and (w.size == 0 or np.abs(w).max() < 2**53):
                w = w.astype(np.int64)
            else:
                w = w.astype(np.float64)
        else:
            w = w.astype(np.int64)
        if w.size and w.min() < 0:
            raise InvalidWeight("weights must be nonnegative")
        if not np.array_equal(w, w.T):
            raise InvalidWeight("weight matrix must be symmetric")
        if np.any(np.diagonal(w) != 0):
            raise SelfLoop("diagonal entries must be zero")

        n = w.shape[0]
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        else:
            labels = tuple(labels)
            if len(labels) != n:
                raise InvalidWeight("need exactly one label per vertex")
            if len(set(labels)) != n:
                raise InvalidWeight("duplicate vertex label")
        if epsilon < 0:
            raise InvalidWeight("epsilon must be nonnegative")

        w.setflags(write=False)
        self.n = n
        self.weights = w
        self.labels = labels
        self.epsilon = float(epsilon)

    # -- basic queries ----------------------------------------------------

    @property
    def integral(self) -> bool:
        return self.weights.dtype.kind == "i"

    def weight(self, i: int, j: int):
        """Weight of pair (i, j) as a plain Python number."""
        return self.weights[i, j].item()

    def total_weight(self):
        """Sum of all pairwise weights (each unordered pair once)."""
        n = self.n
        iu = np.triu_indices(n, 1)
        return self.weights[iu].sum().item() if n > 1 else 0

    def weights_equal(self, a, b) -> bool:
        if self.epsilon == 0.0:
            return a == b
        return abs(a - b) <= self.epsilon

    def positive_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Index arrays (ii, jj) of all pairs i < j with positive weight."""
        return np.nonzero(np.triu(self.weights, 1))

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidVertex(f"unknown vertex label {label!r}") from None

    def induced(self, vertices: Sequence[int]) -> "SimilarityGraph":
        """Subgraph on the given vertices, relabeled to 0..k-1 in list order."""
        idx = list(vertices)
        sub = self.weights[np.ix_(idx, idx)]
        return SimilarityGraph(sub, labels=[self.labels[v] for v in idx],
                               epsilon=self.epsilon)

    def __repr__(self) -> str:
        return f"SimilarityGraph(n={self.n}, dtype={self.weights.dtype})"


def _check_triplet(g: SimilarityGraph, i: int, j: int, k: int) -> None:
    if len({i, j, k}) != 3:
        raise InvalidTriplet(f"indices must be pairwise distinct: {(i, j, k)}")
    for v in (i, j, k):
        if not (0 <= v < g.n):
            raise InvalidTriplet(f"vertex {v} out of range 0..{g.n - 1}")


def triplet_type(g: SimilarityGraph, i: int, j: int, k: int) -> TripletType:
    """Classify triplet {i,j,k} by comparing its three pairwise weights.

    Equality is judged by the graph's epsilon predicate.  Type-3 requires all
    three weights mutually equal; otherwise a tie between the two largest
    gives Type-2 (apex = shared endpoint of the two heaviest edges), and a
    strict maximum gives Type-1.
    """
    _check_triplet(g, i, j, k)
    edges = ((g.weight(i, j), (i, j)), (g.weight(i, k), (i, k)),
             (g.weight(j, k), (j, k)))
    eq = g.weights_equal
    (wa, ea), (wb, eb), (wc, _) = sorted(edges, key=lambda t: -t[0])
    if eq(wa, wb) and eq(wb, wc) and eq(wa, wc):
        return TripletType.type3()
    if eq(wa, wb):
        (shared,) = set(ea) & set(eb)
        return TripletType.type2(shared)
    return TripletType.type1(*ea)


def min_triplet_cost(g: SimilarityGraph, i: int, j: int, k: int):
    """Sum of the two smallest pairwise weights of the triplet."""
    _check_triplet(g, i, j, k)
    a, b, c = g.weight(i, j), g.weight(i, k), g.weight(j, k)
    return a + b + c - max(a, b, c)


def base_cost(g: SimilarityGraph):
    """Sum of min_triplet_cost over all unordered triplets (0 when n < 3).

    Vectorized per smallest index i: for fixed i the contributions over pairs
    j < k reduce to elementwise sums/maxima of one weight row against the
    trailing submatrix.  Summation order is fixed, so results are
    deterministic; with integer weights they are exact int64 arithmetic.
    """
    W = g.weights
    n = g.n
    if n < 3:
        return 0 if g.integral else 0.0
    total = 0 if g.integral else 0.0
    for i in range(n - 2):
        row = W[i, i + 1:]
        sub = W[i + 1:, i + 1:]
        three = row[:, None] + row[None, :] + sub
        high = np.maximum(np.maximum(row[:, None], row[None, :]), sub)
        iu = np.triu_indices(row.shape[0], 1)
        total += (three[iu] - high[iu]).sum().item()
    return total


def load_edge_list(text: str, epsilon: float = 0.0) -> SimilarityGraph:
    """Parse line-oriented records ``u v w`` into a SimilarityGraph.

    Vertex indices follow first appearance; pairs never mentioned get weight
    zero.  '#' starts a comment.  Raises SelfLoop / DuplicateEdge /
    InvalidWeight on bad records.
    """
    order: dict[str, int] = {}
    records: list[tuple[str, str, object]] = []
    seen: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 'u v w', got {raw!r}")
        u, v, wtok = parts
        if u == v:
            raise SelfLoop(f"line {lineno}: self-loop on {u!r}")
        w = _parse_weight(wtok, lineno)
        key = (u, v) if u <= v else (v, u)
        if key in seen:
            raise DuplicateEdge(f"line {lineno}: pair {u!r},{v!r} repeated")
        seen.add(key)
        for name in (u, v):
            if name not in order:
                order[name] = len(order)
        records.append((u, v, w))

    n = len(order)
    floaty = any(isinstance(w, float) for _, _, w in records)
    mat = np.zeros((n, n), dtype=np.float64 if floaty else np.int64)
    for u, v, w in records:
        mat[order[u], order[v]] = w
        mat[order[v], order[u]] = w
    return SimilarityGraph(mat, labels=list(order), epsilon=epsilon)


def load_matrix(text: str, epsilon: float = 0.0) -> SimilarityGraph:
    """Parse the square-matrix format: a line with n, then n rows of n values."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty matrix input")
    head = lines[0].split()
    if len(head) != 1:
        raise ParseError("first line must contain the vertex count only")
    try:
        n = int(head[0])
    except ValueError:
        raise ParseError(f"bad vertex count {head[0]!r}") from None
    if n < 0:
        raise ParseError("vertex count must be nonnegative")
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for r, ln in enumerate(lines[1:], 1):
        vals = [_parse_weight(tok, r) for tok in ln.split()]
        if len(vals) != n:
            raise ParseError(f"row {r}: expected {n} values, got {len(vals)}")
        rows.append(vals)
    floaty = any(isinstance(v, float) for row in rows for v in row)
    mat = np.array(rows, dtype=np.float64 if floaty else np.int64)
    return SimilarityGraph(mat, epsilon=epsilon)


def load_graph(text: str, epsilon: float = 0.0) -> SimilarityGraph:
    """Auto-detect edge-list vs matrix format and load accordingly."""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if len(line.split()) == 1:
            return load_matrix(text, epsilon=epsilon)
        return load_edge_list(text, epsilon=epsilon)
    raise ParseError("empty graph input")


def _parse_weight(token: str, lineno: int):
    try:
        w = int(token)
    except ValueError:
        pass
    else:
        if w < 0:
            raise InvalidWeight(f"line {lineno}: negative weight {token}")
        return w
    try:
        w = float(token)
    except ValueError:
        raise ParseError(f"line {lineno}: {token!r} is not a number") from None
    if math.isnan(w) or math.isinf(w):
        raise InvalidWeight(f"line {lineno}: weight must be finite")
    if w < 0:
        raise InvalidWeight(f"line {lineno}: negative weight {token}")
    return w
