"""Random unit-weight graphs, their closed-form predictions, experiments.

Two models: every pair independently with one probability, or a planted
two-block layout with in-block and cross-block probabilities.  The
predicted ratio compares the best tree of the *expectation* graph against
the expected base cost; experiments check how tightly sampled graphs
concentrate around both quantities.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb, inf
from typing import Union

import numpy as np

from .errors import InvalidParam
from .graph import SimilarityGraph, base_cost

Value = Union[int, float]


class ProbabilityMatrix:
    """Symmetric pairwise edge probabilities with a zero diagonal."""

    __slots__ = ("n", "p")

    def __init__(self, p):
        p = np.asarray(p, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise InvalidParam("probability matrix must be square")
        if not (np.all(p >= 0.0) and np.all(p <= 1.0)):
            raise InvalidParam("probabilities must lie in [0, 1]")
        if not np.array_equal(p, p.T):
            raise InvalidParam("probability matrix must be symmetric")
        if np.any(np.diag(p) != 0.0):
            raise InvalidParam("diagonal must be zero")
        self.n = p.shape[0]
        self.p = p
        p.setflags(write=False)


def _check_prob(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise InvalidParam(f"{name} must be in [0, 1], got {x}")
    return x


@dataclass(frozen=True)
class ErModel:
    """Every pair appears independently with probability p."""

    n: int
    p: float

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParam(f"need n >= 1, got {self.n}")
        _check_prob("p", self.p)

    def probability_matrix(self) -> ProbabilityMatrix:
        m = np.full((self.n, self.n), self.p)
        np.fill_diagonal(m, 0.0)
        return ProbabilityMatrix(m)


@dataclass(frozen=True)
class PlantedModel:
    """Two equal blocks: probability p inside a block, q across."""

    n: int
    p: float
    q: float

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise InvalidParam(f"planted model needs even n >= 2, got {self.n}")
        _check_prob("p", self.p)
        _check_prob("q", self.q)
        if self.p <= self.q:
            warnings.warn(f"planted model expects p > q, got p={self.p}, q={self.q}",
                          stacklevel=3)

    def probability_matrix(self) -> ProbabilityMatrix:
        h = self.n // 2
        m = np.full((self.n, self.n), self.q)
        m[:h, :h] = self.p
        m[h:, h:] = self.p
        np.fill_diagonal(m, 0.0)
        return ProbabilityMatrix(m)


Model = Union[ErModel, PlantedModel]


def _sample(P: ProbabilityMatrix, seed: int) -> SimilarityGraph:
    """Unit-weight sample; one uniform draw per pair, ascending (i, j)."""
    n = P.n
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, 1)
    draws = rng.random(len(iu[0]))
    w = np.zeros((n, n), dtype=np.int64)
    w[iu] = draws < P.p[iu]
    return SimilarityGraph(w + w.T)


def gen_er(n: int, p: float, seed: int) -> SimilarityGraph:
    """Sample a unit-weight graph where each pair appears with probability p."""
    return _sample(ErModel(n, p).probability_matrix(), seed)


def gen_planted(n: int, p: float, q: float, seed: int) -> SimilarityGraph:
    """Sample the two-block model: blocks [0, n/2) and [n/2, n)."""
    return _sample(PlantedModel(n, p, q).probability_matrix(), seed)


def expected_base_cost(P: ProbabilityMatrix) -> float:
    """Expected base cost: per triplet, 2x all-three plus each exactly-two term."""
    p = P.p
    n = P.n
    total = 0.0
    for i in range(n - 2):
        a = p[i, i + 1:]
        pij, pik = a[:, None], a[None, :]
        pjk = p[i + 1:, i + 1:]
        tri = pij * pik * pjk
        wedge = (pij * pjk * (1.0 - pik) + pjk * pik * (1.0 - pij)
                 + pik * pij * (1.0 - pjk))
        iu = np.triu_indices(n - i - 1, 1)
        total += float((2.0 * tri + wedge)[iu].sum())
    return total


def expectation_tree_total_cost(model: Model) -> float:
    """Total cost of the best tree for the model's expectation graph."""
    if isinstance(model, ErModel):
        return model.p * 2.0 * comb(model.n, 3)
    h = model.n // 2
    return 2.0 * model.p * 2.0 * comb(h, 3) + 4.0 * model.q * comb(h, 2) * h


def predicted_rho(model: Model) -> float:
    """Leading-order predicted optimum ratio for large n."""
    if isinstance(model, ErModel):
        p = model.p
        den = 3.0 * p - p * p
        return 2.0 / den if den else inf
    p, q = model.p, model.q
    den = 3.0 * (p + q) ** 2 - p ** 3 - 3.0 * p * q * q
    return (2.0 * p + 6.0 * q) / den if den else inf


@dataclass(frozen=True)
class ExperimentReport:
    """Per-trial base costs and ratio estimates, plus the model's predictions."""

    samples: int
    seeds: tuple[int, ...]
    base_costs: tuple[int, ...]
    expected_base_cost: float
    expectation_tree_total_cost: float
    predicted_rho: float
    rho_estimates: tuple[float, ...]

    @property
    def max_base_deviation(self) -> float:
        """Largest relative deviation of a sampled base cost from its mean value."""
        e = self.expected_base_cost
        return max(abs(b / e - 1.0) for b in self.base_costs) if e else inf

    @property
    def rho_mean(self) -> float:
        return sum(self.rho_estimates) / len(self.rho_estimates)


def run_experiment(model: Model, trials: int, seed_base: int,
                   jobs: int = 1) -> ExperimentReport:
    """Sample `trials` graphs (seeds seed_base + t) and compare to predictions.

    Each trial's ratio estimate divides the closed-form tree cost of the
    expectation graph by that sample's exact base cost.  Trials are pure and
    independently seeded, so the report is identical for any worker count.
    """
    if trials < 1:
        raise InvalidParam(f"need trials >= 1, got {trials}")
    P = model.probability_matrix()
    tree_total = expectation_tree_total_cost(model)
    seeds = tuple(seed_base + t for t in range(trials))

    def one(seed: int) -> int:
        return base_cost(_sample(P, seed))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            bases = tuple(pool.map(one, seeds))
    else:
        bases = tuple(one(s) for s in seeds)

    rhos = tuple(tree_total / b if b else inf for b in bases)
    return ExperimentReport(
        samples=trials,
        seeds=seeds,
        base_costs=bases,
        expected_base_cost=expected_base_cost(P),
        expectation_tree_total_cost=tree_total,
        predicted_rho=predicted_rho(model),
        rho_estimates=rhos,
    )
