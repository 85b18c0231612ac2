"""Exact recognition of graphs a tree can cluster at the cost lower bound.

Pipeline, per working vertex set: build the minimal merge partition forced
by triplet weights, look for a claw (one vertex tied equally to three
mutually-lighter vertices in three other blocks), then derive a two-sided
split — by candidate scan when a claw exists, by constraint 2-coloring
otherwise — and recurse on both sides.  Succeeds if and only if some tree
reaches ratio 1; the tree it returns always does.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Union

import numpy as np

from .errors import NotZeroBase
from .graph import SimilarityGraph, base_cost, triplet_type
from .tree import HcTree

Value = Union[int, float]


class Partition:
    """Disjoint nonempty vertex blocks; indexed ascending by smallest member."""

    __slots__ = ("blocks", "block_of")

    def __init__(self, blocks):
        blocks = [tuple(sorted(b)) for b in blocks]
        if any(not b for b in blocks):
            raise ValueError("empty block")
        blocks.sort(key=lambda b: b[0])
        self.blocks: tuple[tuple[int, ...], ...] = tuple(blocks)
        self.block_of: dict[int, int] = {}
        for bi, b in enumerate(blocks):
            for v in b:
                if v in self.block_of:
                    raise ValueError(f"vertex {v} in two blocks")
                self.block_of[v] = bi

    def __len__(self) -> int:
        return len(self.blocks)

    def __repr__(self) -> str:
        return f"Partition({list(map(set, self.blocks))})"


@dataclass(frozen=True)
class Bipartition:
    """A two-sided split of the working vertex set."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(sorted(self.a)))
        object.__setattr__(self, "b", tuple(sorted(self.b)))
        if not self.a or not self.b or set(self.a) & set(self.b):
            raise ValueError("sides must be disjoint and nonempty")


@dataclass(frozen=True)
class Claw:
    """Apex tied at leg_weight to three leaves whose mutual weights are lighter.

    All four vertices lie in distinct partition blocks.
    """

    apex: int
    leaves: tuple[int, int, int]
    leg_weight: Value

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(sorted(self.leaves)))


@dataclass
class ClusterLabelSet:
    """Labels one block collects while scanning a crossing pair.

    label0 / label1 hold a witness vertex (or None); label2 maps each
    distinct tied-leg weight to the witness vertex that produced it.
    """

    label0: Optional[int] = None
    label1: Optional[int] = None
    label2: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DetectionResult:
    """Outcome of build_bisection: a spanning tree, or the stuck vertex set."""

    tree: Optional[HcTree]
    failed_on: Optional[frozenset[int]] = None

    @property
    def perfect(self) -> bool:
        return self.tree is not None


# ---------------------------------------------------------------------------
# stage 1: minimal merge partition


class _UnionFind:
    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def minimal_valid_partition(g: SimilarityGraph) -> Optional[Partition]:
    """Coarsest-refining partition every ratio-1 tree must respect, or None.

    Two forces drive merges.  A triplet with a unique heaviest pair must
    merge that pair before its third vertex joins, so the pair shares a
    block.  And a triplet with two tied heaviest pairs (apex x, base u, v)
    must not see u, v merged while x sits outside; whenever the current
    blocks do exactly that, x's block is merged in.  Repeat to fixpoint.
    None means everything collapsed into one block: no two-sided split of
    the working set can respect the weights.
    """
    n = g.n
    if n < 2:
        raise ValueError("need at least 2 vertices")
    uf = _UnionFind(n)
    type2: list[tuple[int, int, int]] = []  # (apex, base u, base v)
    for i, j, k in combinations(range(n), 3):
        tt = triplet_type(g, i, j, k)
        if tt.is_type1:
            uf.union(*tt.max_pair)
        elif tt.is_type2:
            u, v = (x for x in (i, j, k) if x != tt.apex)
            type2.append((tt.apex, u, v))

    changed = True
    while changed:
        changed = False
        for apex, u, v in type2:
            ru, rv = uf.find(u), uf.find(v)
            if ru == rv and uf.find(apex) != ru:
                uf.union(apex, u)
                changed = True

    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(uf.find(v), []).append(v)
    if len(groups) == 1:
        return None
    return Partition(groups.values())


def _crossing_type2(g: SimilarityGraph, p: Partition):
    """Yield (apex, u, v) for each two-tied-maxima triplet spanning 3 blocks."""
    bof = p.block_of
    for i, j, k in combinations(range(g.n), 3):
        if len({bof[i], bof[j], bof[k]}) != 3:
            continue
        tt = triplet_type(g, i, j, k)
        if tt.is_type2:
            u, v = (x for x in (i, j, k) if x != tt.apex)
            yield tt.apex, u, v


# ---------------------------------------------------------------------------
# stage 2: claw detection


def detect_claw(g: SimilarityGraph, p: Partition) -> Optional[Claw]:
    """Find a claw whose four vertices sit in four distinct blocks, or None.

    Scans vertex pairs (i, j) from different blocks in ascending order.  For
    each pair, every vertex r of every other block contributes a label for
    r's block, keyed by how the triplet {i, j, r} ties:

    * all three weights equal                  -> '0'
    * (i, j) among the two tied heaviest pairs -> '1'
    * (i, j) strictly lightest, w(r,i)=w(r,j)  -> '(2, w)' with w the tie

    Two labels on two *different* blocks identify a claw with (i, j) as one
    leaf pair: '0' with '(2,w)', '1' with '(2,w)', or '(2,w)' with '(2,w'')'
    at distinct weights (the larger tie is the leg weight).
    """
    bof = p.block_of
    n = g.n
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = bof[i], bof[j]
            if bi == bj:
                continue
            labels: dict[int, ClusterLabelSet] = {}
            for r in range(n):
                br = bof[r]
                if br == bi or br == bj:
                    continue
                tt = triplet_type(g, i, j, r)
                if tt.is_type1:
                    continue  # cannot happen across 3 blocks of a held partition
                ls = labels.setdefault(br, ClusterLabelSet())
                if tt.is_type3:
                    if ls.label0 is None:
                        ls.label0 = r
                elif tt.apex == r:
                    ls.label2.setdefault(g.weight(r, i), r)
                else:  # apex is i or j: (i, j) is one of the tied maxima
                    if ls.label1 is None:
                        ls.label1 = r
            claw = _claw_from_labels(g, i, j, labels)
            if claw is not None:
                return claw
    return None


def _claw_from_labels(g: SimilarityGraph, i: int, j: int,
                      labels: dict[int, ClusterLabelSet]) -> Optional[Claw]:
    order = sorted(labels)
    twos = [(b, w, r) for b in order for w, r in sorted(labels[b].label2.items())]
    if not twos:
        return None
    # '0' + '(2,w)' on distinct blocks: apex is the tied witness
    for b in order:
        s = labels[b].label0
        if s is None:
            continue
        for bt, w, r in twos:
            if bt != b:
                return Claw(apex=r, leaves=(i, j, s), leg_weight=w)
    # '1' + '(2,w)' on distinct blocks
    for b in order:
        s = labels[b].label1
        if s is None:
            continue
        for bt, w, r in twos:
            if bt != b:
                return Claw(apex=r, leaves=(i, j, s), leg_weight=w)
    # '(2,w)' + '(2,w'')' on distinct blocks, w != w'': heavier tie is the leg
    # (distinctness respects the comparison tolerance, else two ties that
    # count as equal would fabricate a claw with untied legs)
    for x in range(len(twos)):
        b1, w1, r1 = twos[x]
        for y in range(x + 1, len(twos)):
            b2, w2, r2 = twos[y]
            if b1 == b2 or g.weights_equal(w1, w2):
                continue
            if w1 < w2:
                b1, w1, r1, b2, w2, r2 = b2, w2, r2, b1, w1, r1
            return Claw(apex=r1, leaves=(i, j, r2), leg_weight=w1)
    return None


# ---------------------------------------------------------------------------
# stage 3: split with a claw


def case1_bipartition(g: SimilarityGraph, p: Partition,
                      claw: Claw) -> Optional[Bipartition]:
    """Split off one block reachable from the claw's leaves via light edges.

    Each block is represented by its smallest vertex, except the claw's own
    four vertices, which represent their blocks.  Representative pairs
    weighing strictly less than the leg weight are light.  Any two-sided
    split must carve out exactly one block from the light component of the
    three leaves, so those blocks (ascending) are the only candidates; a
    candidate survives unless some three-block two-tied-maxima triplet has
    its apex inside it.  No survivor means no split exists at all.
    """
    m = len(p.blocks)
    rep = [b[0] for b in p.blocks]
    for v in (claw.apex, *claw.leaves):
        rep[p.block_of[v]] = v
    leg = claw.leg_weight

    def light(x: int, y: int) -> bool:
        w = g.weight(x, y)
        return w < leg and not g.weights_equal(w, leg)

    seeds = [p.block_of[v] for v in claw.leaves]
    comp = set(seeds)
    queue = list(seeds)
    while queue:
        b = queue.pop()
        for other in range(m):
            if other not in comp and light(rep[b], rep[other]):
                comp.add(other)
                queue.append(other)

    blocked = [False] * m
    for apex, _, _ in _crossing_type2(g, p):
        blocked[p.block_of[apex]] = True

    for b in sorted(comp):
        if not blocked[b]:
            rest = [v for ob in range(m) if ob != b for v in p.blocks[ob]]
            return Bipartition(p.blocks[b], tuple(rest))
    return None


# ---------------------------------------------------------------------------
# stage 3': split without a claw


def case2_bipartition(g: SimilarityGraph, p: Partition) -> Optional[Bipartition]:
    """Split blocks by 2-coloring the not-on-the-same-side constraint graph.

    Every two-tied-maxima triplet spanning three blocks (apex x, base u, v)
    forbids u's and v's blocks from sharing a side unless x joins them; with
    whole blocks as units that forces the two base blocks apart.  Color by
    BFS, lowest uncolored block rooted at color 0; an odd constraint cycle
    means no split exists.  With no constraints at all, the lowest block is
    split off alone.  The side containing block 0 is returned first.
    """
    m = len(p.blocks)
    adj: list[set[int]] = [set() for _ in range(m)]
    for _, u, v in _crossing_type2(g, p):
        bu, bv = p.block_of[u], p.block_of[v]
        adj[bu].add(bv)
        adj[bv].add(bu)

    color = [-1] * m
    for start in range(m):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            b = queue.popleft()
            for nb in sorted(adj[b]):
                if color[nb] == -1:
                    color[nb] = 1 - color[b]
                    queue.append(nb)
                elif color[nb] == color[b]:
                    return None  # odd cycle of constraints

    if all(c == 0 for c in color):  # no constraints anywhere
        rest = [v for b in p.blocks[1:] for v in b]
        return Bipartition(p.blocks[0], tuple(rest))

    side0 = [v for b in range(m) if color[b] == 0 for v in p.blocks[b]]
    side1 = [v for b in range(m) if color[b] == 1 for v in p.blocks[b]]
    if color[0] != 0:
        side0, side1 = side1, side0
    return Bipartition(tuple(side0), tuple(side1))


# ---------------------------------------------------------------------------
# composition and recursion


def valid_bisect(g: SimilarityGraph) -> Optional[Bipartition]:
    """One two-sided split respecting all triplet weights, or None."""
    if g.n < 2:
        raise ValueError("need at least 2 vertices")
    if g.n == 2:
        return Bipartition((0,), (1,))
    p = minimal_valid_partition(g)
    if p is None:
        return None
    claw = detect_claw(g, p)
    if claw is not None:
        return case1_bipartition(g, p, claw)
    return case2_bipartition(g, p)


def zero_base_cost_tree(g: SimilarityGraph) -> HcTree:
    """Zero-total-cost tree for a graph whose positive edges form a matching.

    Matched pairs become sibling cherries; pairs and leftover singletons are
    strung along a caterpillar spine in ascending vertex order.
    """
    ii, jj = g.positive_pairs()
    degree = np.bincount(np.concatenate([ii, jj]), minlength=g.n) \
        if len(ii) else np.zeros(g.n, dtype=np.int64)
    if (degree > 1).any():
        bad = int(np.argmax(degree > 1))
        raise NotZeroBase(f"vertex {bad} has {int(degree[bad])} positive edges")

    matched = set(ii.tolist()) | set(jj.tolist())
    units: list = [(int(u), int(v)) for u, v in zip(ii.tolist(), jj.tolist())]
    units.extend(v for v in range(g.n) if v not in matched)
    units.sort(key=lambda u: u if isinstance(u, int) else u[0])
    spine = units[0]
    for u in units[1:]:
        spine = (spine, u)
    return HcTree.from_nested(spine)


def build_bisection(g: SimilarityGraph) -> DetectionResult:
    """Full recursive detection over the whole graph.

    Zero base cost short-circuits to the matching construction.  Otherwise
    split, recurse on both induced sides, and join under a fresh root; any
    side with no valid split aborts the whole build and is reported.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if base_cost(g) == 0:
        return DetectionResult(tree=zero_base_cost_tree(g))

    out: dict[int, object] = {}
    root_task: list = [tuple(range(g.n)), None, None]
    stack: list[tuple[list, bool]] = [(root_task, False)]
    while stack:
        task, expanded = stack.pop()
        verts = task[0]
        if len(verts) == 1:
            out[id(task)] = verts[0]
            continue
        if expanded:
            out[id(task)] = (out[id(task[1])], out[id(task[2])])
            continue
        bp = valid_bisect(g.induced(verts))
        if bp is None:
            return DetectionResult(tree=None, failed_on=frozenset(verts))
        task[1] = [tuple(verts[x] for x in bp.a), None, None]
        task[2] = [tuple(verts[x] for x in bp.b), None, None]
        stack.append((task, True))
        stack.append((task[1], False))
        stack.append((task[2], False))
    return DetectionResult(tree=HcTree.from_nested(out[id(root_task)]))
