import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from cliffopt.canonical import group_order, keyspace
from cliffopt.sample import estimate_distribution, hoeffding_epsilon, random_clifford, random_cliffords
from cliffopt.tableau import is_symplectic

from conftest import db_cached


def _chi2_pvalue(n, samples, seed):
    ks = keyspace(n)
    counts = Counter(ks.encode(t) for t in random_cliffords(n, samples, seed))
    size = group_order(n)
    assert len(counts) == size
    observed = np.array(list(counts.values()), dtype=float)
    return stats.chisquare(observed, np.full(size, samples / size)).pvalue


def test_uniform_single_qubit():
    assert _chi2_pvalue(1, 100_000, 1) > 0.001


def test_uniform_two_qubits():
    assert _chi2_pvalue(2, 100_000, 2) > 0.001


def test_outputs_are_symplectic():
    rng = np.random.default_rng(0)
    for n in range(1, 9):
        for _ in range(20):
            assert is_symplectic(random_clifford(n, rng))


def test_seed_determinism():
    assert random_cliffords(4, 10, 42) == random_cliffords(4, 10, 42)
    assert random_cliffords(4, 10, 42) != random_cliffords(4, 10, 43)


def test_hoeffding_spot_value():
    assert hoeffding_epsilon(20_000) == pytest.approx(0.0138, abs=5e-5)
    assert hoeffding_epsilon(100, 0.05) == pytest.approx(math.sqrt(math.log(40) / 200))


def _exact(db):
    totals = db.orbit_totals()
    return {k: t / group_order(db.n) for k, t in enumerate(totals)}


def test_two_qubit_estimate_within_epsilon():
    db = db_cached(2)
    est = estimate_distribution(2, 20_000, db, seed=5)
    exact = _exact(db)
    assert est.epsilon == pytest.approx(0.0138, abs=5e-5)
    assert est.not_found == 0
    for k, p in exact.items():
        assert abs(est.proportions.get(k, 0.0) - p) <= est.epsilon


def test_three_qubit_estimate_against_layers(db3):
    est = estimate_distribution(3, 20_000, db3, seed=6)
    exact = _exact(db3)
    for k, p in exact.items():
        assert abs(est.proportions.get(k, 0.0) - p) <= est.epsilon
    mean = sum(k * p for k, p in exact.items())
    got = sum(k * p for k, p in est.proportions.items())
    assert abs(got - mean) < 0.05


def test_estimate_with_meet_in_the_middle():
    half = db_cached(3, max_cost=6)
    full = db_cached(3)
    a = estimate_distribution(3, 300, half, seed=7)
    b = estimate_distribution(3, 300, full, seed=7)
    assert a.counts == b.counts and a.not_found == 0
    c = estimate_distribution(3, 300, half, seed=7, mim=False)
    assert c.not_found > 0


def test_report_json():
    est = estimate_distribution(2, 1000, db_cached(2), seed=1)
    data = est.as_json()
    assert data["samples"] == 1000 and data["confidence"] == pytest.approx(0.999)
    assert sum(data["proportions"].values()) == pytest.approx(1.0)
