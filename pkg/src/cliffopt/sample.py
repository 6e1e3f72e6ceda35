"""Uniform sampling of symplectic matrices and cost-distribution estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tableau import Tableau, symplectic_form


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _project(u: int, v: int, w: int, n: int) -> int:
    # component of u symplectically orthogonal to span(v, w), given <v, w> = 1
    if symplectic_form(u, w, n):
        u ^= v
    if symplectic_form(u, v, n):
        u ^= w
    return u


def _reduce_basis(vectors: list[int]) -> list[int]:
    basis: list[int] = []
    for x in vectors:
        for b in basis:
            x = min(x, x ^ b)
        if x:
            basis.append(x)
    return basis


def _combine(basis: list[int], coeffs: int) -> int:
    out = 0
    for i, b in enumerate(basis):
        if (coeffs >> i) & 1:
            out ^= b
    return out


def random_clifford(n: int, seed=None) -> Tableau:
    """Exactly uniform element of Sp(2n, 2).

    Rows are drawn in symplectic pairs (image of X_i, image of Z_i): a
    uniform non-zero vector of the current complement, then a uniform
    partner with symplectic product 1, then recurse into the complement of
    the pair.  The number of choices at each step does not depend on the
    earlier ones, so every matrix is equally likely.
    """
    rng = _rng(seed)
    basis = [1 << i for i in range(2 * n)]
    xs, zs = [], []
    for _ in range(n):
        dim = len(basis)
        v = _combine(basis, int(rng.integers(1, 1 << dim)))
        while True:
            w = _combine(basis, int(rng.integers(0, 1 << dim)))
            if symplectic_form(v, w, n):
                break
        xs.append(v)
        zs.append(w)
        basis = _reduce_basis([_project(b, v, w, n) for b in basis])
    return Tableau.from_rows(n, xs + zs)


def random_cliffords(n: int, count: int, seed=None) -> list[Tableau]:
    rng = _rng(seed)
    return [random_clifford(n, rng) for _ in range(count)]


def hoeffding_epsilon(samples: int, alpha: float = 0.001) -> float:
    """Half-width with P(|p_hat - p| > eps) <= alpha for a proportion."""
    return math.sqrt(math.log(2 / alpha) / (2 * samples))


@dataclass
class DistributionEstimate:
    proportions: dict[int, float]
    samples: int
    confidence: float
    epsilon: float
    not_found: float = 0.0
    counts: dict[int, int] = field(default_factory=dict)

    def as_json(self) -> dict:
        return {
            "samples": self.samples,
            "confidence": self.confidence,
            "epsilon": self.epsilon,
            "not_found": self.not_found,
            "proportions": {str(k): v for k, v in sorted(self.proportions.items())},
        }


def estimate_distribution(n: int, samples: int, db, seed=None, alpha: float = 0.001, mim: bool = True) -> DistributionEstimate:
    from .synth import optimal_cost

    rng = _rng(seed)
    ts = random_cliffords(n, samples, rng)
    costs = db.lookup_many(ts)
    if mim and not db.complete:
        for i in np.flatnonzero(costs < 0):
            c = optimal_cost(db, ts[i], mim=True)
            costs[i] = -1 if c is None else c
    counts: dict[int, int] = {}
    for c in costs.tolist():
        if c >= 0:
            counts[c] = counts.get(c, 0) + 1
    missing = int((costs < 0).sum())
    return DistributionEstimate(
        proportions={k: v / samples for k, v in sorted(counts.items())},
        samples=samples,
        confidence=1 - alpha,
        epsilon=hoeffding_epsilon(samples, alpha),
        not_found=missing / samples,
        counts=counts,
    )
