import functools
import itertools

import numpy as np
import pytest

from cliffopt.circuit import CNOT, CZ, H, P, PDAG, SWAP, Circuit, CostModel, Gate
from cliffopt.database import build

ALL_KINDS = (H, P, PDAG, CNOT, CZ, SWAP)


def random_circuit(rng, n, length, kinds=(H, P, CNOT)):
    gates = []
    for _ in range(length):
        k = kinds[int(rng.integers(len(kinds)))]
        if k in (H, P, PDAG) or n == 1:
            if n == 1 and k not in (H, P, PDAG):
                k = H
            gates.append(Gate(k, (int(rng.integers(n)),)))
        else:
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(Gate(k, (int(a), int(b))))
    return Circuit(n, tuple(gates))


def all_gates(n, kinds=ALL_KINDS):
    out = []
    for k in kinds:
        if k in (H, P, PDAG):
            out += [Gate(k, (q,)) for q in range(n)]
        else:
            out += [Gate(k, pair) for pair in itertools.permutations(range(n), 2)]
    return out


# --- explicit unitaries (qubit 0 is the most significant tensor factor) ----------

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)
_Y = np.array([[0, -1j], [1j, 0]])
_ONE = {
    H: np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    P: np.diag([1, 1j]),
    PDAG: np.diag([1, -1j]),
}


def _embed(n, ops):
    out = np.array([[1]], dtype=complex)
    for q in range(n):
        out = np.kron(out, ops.get(q, _I2))
    return out


def gate_unitary(g, n):
    if g.kind in _ONE:
        return _embed(n, {g.qubits[0]: _ONE[g.kind]})
    a, b = g.qubits
    p0 = np.diag([1, 0]).astype(complex)
    p1 = np.diag([0, 1]).astype(complex)
    if g.kind == CNOT:
        return _embed(n, {a: p0}) + _embed(n, {a: p1, b: _X})
    if g.kind == CZ:
        return _embed(n, {a: p0}) + _embed(n, {a: p1, b: _Z})
    if g.kind == SWAP:
        return (sum(_embed(n, {a: m, b: m}) for m in (_I2, _X, _Y, _Z)) / 2).astype(complex)
    raise ValueError(g.kind)


def circuit_unitary(c):
    u = np.eye(2 ** c.n, dtype=complex)
    for g in c.gates:
        u = gate_unitary(g, c.n) @ u
    return u


def pauli_matrix(u, n):
    """Unsigned Pauli operator for a packed (x | z) vector."""
    ops = {}
    for q in range(n):
        x, z = (u >> q) & 1, (u >> (n + q)) & 1
        ops[q] = [[_I2, _Z], [_X, _Y]][x][z]
    return _embed(n, ops)


def decode_pauli(m, n):
    """Packed vector of the Pauli proportional to ``m``."""
    for u in range(4 ** n):
        if abs(np.trace(pauli_matrix(u, n).conj().T @ m)) > 2 ** n - 1e-6:
            return u
    raise AssertionError("not a Pauli operator")


# --- shared databases ---------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def db_cached(n, mode="simultaneous", metric="gates", max_cost=None, linear=False):
    if metric == "cz":
        model = CostModel.cz_count()
    elif linear:
        model = CostModel.gate_count((CNOT,))
    else:
        model = CostModel(metric)
    return build(n, mode, model, max_cost=max_cost, linear=linear)


@pytest.fixture(scope="session")
def db3():
    return db_cached(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- acceptance report ----------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
