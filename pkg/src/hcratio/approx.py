"""Approximation for near-perfect graphs via forced merge constraints.

When a graph is a bounded multiplicative distortion of one that clusters
perfectly, triplets whose heaviest weight beats the runner-up by more than
the squared distortion must still merge that pair first.  Collecting those
forced merges and building any tree consistent with all of them yields a
(1 + delta^2)-approximation of the optimal ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import InvalidDelta
from .graph import SimilarityGraph
from .tree import HcTree, binarize


@dataclass(frozen=True)
class RootedTripletConstraint:
    """Merge requirement "{pair together before outsider}"."""

    pair: tuple[int, int]
    outsider: int

    def __post_init__(self):
        a, b = self.pair
        if len({a, b, self.outsider}) != 3:
            raise ValueError("constraint needs three distinct vertices")
        object.__setattr__(self, "pair", (min(a, b), max(a, b)))


def _delta_squared(delta) -> Fraction:
    """delta^2 as an exact rational; decimal reading for float input."""
    if isinstance(delta, Fraction):
        d = delta
    elif isinstance(delta, int):
        d = Fraction(delta)
    else:
        try:
            d = Fraction(str(delta))
        except ValueError:
            raise InvalidDelta(f"cannot interpret delta {delta!r}") from None
    if d < 1:
        raise InvalidDelta(f"delta must be >= 1, got {delta}")
    return d * d


def build_constraints(g: SimilarityGraph, delta) -> set[RootedTripletConstraint]:
    """Forced merges: triplets whose top weight exceeds delta^2 x runner-up."""
    d2 = _delta_squared(delta)
    exact = g.integral
    d2f = float(d2)
    out: set[RootedTripletConstraint] = set()
    for i, j, k in combinations(range(g.n), 3):
        edges = sorted(((g.weight(i, j), (i, j)), (g.weight(i, k), (i, k)),
                        (g.weight(j, k), (j, k))), key=lambda e: -e[0])
        (w1, pair), (w2, _), _ = edges
        if (Fraction(w1) > d2 * w2) if exact else (w1 > d2f * w2):
            out.add(RootedTripletConstraint(
                pair=pair, outsider=next(x for x in (i, j, k) if x not in pair)))
    return out


def rtc_build(constraints, n: int) -> Optional[HcTree]:
    """Tree satisfying every merge constraint, or None if none exists.

    Classic recursive component construction: link each constraint's pair,
    split the working set into linked components, and recurse per component
    with the constraints living entirely inside it.  A level whose links
    glue everything into one component (with >= 2 vertices) is a dead end.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    cons = list(constraints)
    out: dict[int, object] = {}
    root_task: list = [tuple(range(n)), cons, None]
    stack: list[tuple[list, bool]] = [(root_task, False)]
    while stack:
        task, expanded = stack.pop()
        verts = task[0]
        if len(verts) == 1:
            out[id(task)] = verts[0]
            continue
        if expanded:
            out[id(task)] = tuple(out[id(child)] for child in task[2])
            continue
        parent = {v: v for v in verts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c in task[1]:
            ra, rb = find(c.pair[0]), find(c.pair[1])
            if ra != rb:
                parent[rb] = ra
        comps: dict[int, list[int]] = {}
        for v in verts:
            comps.setdefault(find(v), []).append(v)
        if len(comps) == 1:
            return None
        children = []
        for comp in sorted(comps.values(), key=min):
            comp_set = set(comp)
            inner = [c for c in task[1]
                     if c.outsider in comp_set and c.pair[0] in comp_set
                     and c.pair[1] in comp_set]
            children.append([tuple(sorted(comp)), inner, None])
        task[2] = children
        stack.append((task, True))
        stack.extend((child, False) for child in children)
    return HcTree.from_nested(out[id(root_task)])


def approx_tree(g: SimilarityGraph, delta) -> Optional[HcTree]:
    """Binary tree within (1 + delta^2) of the optimal ratio, or None.

    None only when no tree satisfies the forced merges — in particular the
    input is then not a delta-distortion of any perfectly-clusterable graph.
    """
    t = rtc_build(build_constraints(g, delta), g.n)
    return None if t is None else binarize(t)
