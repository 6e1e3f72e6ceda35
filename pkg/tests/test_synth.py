import numpy as np
import pytest

from cliffopt.canonical import EXACT, INDEPENDENT, SIMULTANEOUS, canonicalize
from cliffopt.circuit import CostModel, cost, h
from cliffopt.database import exact_cost_table
from cliffopt.sample import random_clifford
from cliffopt.synth import NotFound, mim_search, optimal_cost, reconstruct, synthesize
from cliffopt.tableau import from_circuit, gate_matrix, identity

from conftest import db_cached


def test_identity_and_single_gate():
    db = db_cached(2)
    assert len(reconstruct(db, identity(2))) == 0
    c = reconstruct(db, gate_matrix(h(1), 2))
    assert len(c) == 1 and from_circuit(c) == gate_matrix(h(1), 2)


@pytest.mark.parametrize("mode", ["exact", "simultaneous", "independent"])
def test_reconstruct_all_two_qubit_elements(mode):
    db = db_cached(2, mode)
    ks = db.space
    for key, c in exact_cost_table(db_cached(2, "exact")).items():
        t = ks.decode(key)
        circ = reconstruct(db, t)
        assert from_circuit(circ) == t
        assert len(circ) == db.lookup(t)
        if mode != "independent":
            assert len(circ) == c and circ.relabel is None


def test_reconstruct_random_three_qubit(db3):
    rng = np.random.default_rng(7)
    for _ in range(1000):
        t = random_clifford(3, rng)
        circ = reconstruct(db3, t)
        assert from_circuit(circ) == t
        assert len(circ) == db3.lookup(t)


def test_independent_reconstruction_reports_relabeling():
    db = db_cached(3, "independent")
    rng = np.random.default_rng(3)
    seen = False
    for _ in range(100):
        t = random_clifford(3, rng)
        c = reconstruct(db, t)
        assert from_circuit(c) == t
        assert from_circuit(c.with_swaps()) == t
        seen |= c.relabel is not None
    assert seen


def test_depth_reconstruction():
    db = db_cached(3, metric="depth")
    rng = np.random.default_rng(4)
    for _ in range(50):
        t = random_clifford(3, rng)
        c = reconstruct(db, t)
        assert from_circuit(c) == t
        assert cost(c, CostModel.depth()) == db.lookup(t)


def test_cz_metric_reconstruction():
    db = db_cached(3, metric="cz")
    rng = np.random.default_rng(5)
    for _ in range(50):
        t = random_clifford(3, rng)
        c = reconstruct(db, t)
        assert from_circuit(c) == t
        assert cost(c, CostModel.cz_count()) == db.lookup(t)


def test_reconstruct_out_of_range():
    db = db_cached(3, max_cost=3)
    t = next(t for t in (random_clifford(3, s) for s in range(100)) if db.lookup(t) is None)
    with pytest.raises(NotFound):
        reconstruct(db, t)


@pytest.mark.parametrize("mode", ["exact", "simultaneous", "independent"])
def test_mim_matches_full_database_on_all_two_qubit_elements(mode):
    full = db_cached(2, mode)
    half = db_cached(2, mode, max_cost=(full.max_cost + 1) // 2)
    ks = full.space
    for key in exact_cost_table(db_cached(2, "exact")):
        t = ks.decode(key)
        st = {}
        c = mim_search(half, t, st)
        assert st["cost"] == full.lookup(t)
        assert from_circuit(c) == t
        if mode != "independent":
            assert len(c) == st["cost"]


def test_mim_three_qubits(db3):
    half = db_cached(3, max_cost=6)
    rng = np.random.default_rng(11)
    for _ in range(60):
        t = random_clifford(3, rng)
        c = mim_search(half, t)
        assert from_circuit(c) == t
        assert len(c) == db3.lookup(t)


def test_mim_depth_metric():
    full = db_cached(3, metric="depth")
    half = db_cached(3, metric="depth", max_cost=(full.max_cost + 1) // 2)
    rng = np.random.default_rng(12)
    for _ in range(20):
        t = random_clifford(3, rng)
        st = {}
        c = mim_search(half, t, st)
        assert from_circuit(c) == t and st["cost"] == full.lookup(t)
        assert cost(c, CostModel.depth()) == st["cost"]


def test_mim_not_found_beyond_twice_depth(db3):
    tiny = db_cached(3, max_cost=3)
    t = next(t for t in (random_clifford(3, s) for s in range(200)) if db3.lookup(t) > 6)
    with pytest.raises(NotFound):
        mim_search(tiny, t)
    assert optimal_cost(tiny, t) is None
    assert optimal_cost(tiny, t, mim=False) is None


def test_visited_counter_and_synthesize(db3):
    half = db_cached(3, max_cost=6)
    t = next(t for t in (random_clifford(3, s) for s in range(100)) if db3.lookup(t) > 6)
    st = {}
    mim_search(half, t, st)
    assert st["visited"] > 0
    assert from_circuit(synthesize(half, t)) == t
    assert from_circuit(synthesize(db3, t, mim=False)) == t


def test_reconstruction_is_deterministic(db3):
    t = random_clifford(3, 99)
    assert reconstruct(db3, t) == reconstruct(db3, t)
