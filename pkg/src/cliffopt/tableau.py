"""Binary symplectic matrices (Clifford unitaries modulo Pauli/phase).

A tableau on ``n`` qubits is a 2n x 2n matrix over GF(2).  Row ``i < n``
is the image of X_i under conjugation, row ``n + i`` the image of Z_i, each
written as an (x | z) bit vector.  Storage is column-major: ``cols[j]`` is
an integer whose bit ``i`` is the entry in row ``i``.

Appending a gate multiplies on the right, which only touches one or two
columns.  CZ and SWAP are not primitive; their rules follow from
CZ = H_b CNOT H_b and SWAP = CNOT CNOT CNOT.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circuit import CNOT, CZ, H, P, PDAG, SWAP, Circuit, Gate

DEBUG = bool(os.environ.get("CLIFFOPT_DEBUG"))


class TableauError(ValueError):
    pass


def _popparity(x: int) -> int:
    return bin(x).count("1") & 1


@dataclass(frozen=True)
class Tableau:
    n: int
    cols: tuple[int, ...]

    def __post_init__(self):
        if len(self.cols) != 2 * self.n:
            raise TableauError(f"expected {2 * self.n} columns, got {len(self.cols)}")

    # -- views --------------------------------------------------------------
    def to_array(self) -> np.ndarray:
        m = 2 * self.n
        out = np.zeros((m, m), dtype=np.uint8)
        for j, c in enumerate(self.cols):
            for i in range(m):
                out[i, j] = (c >> i) & 1
        return out

    @classmethod
    def from_array(cls, a) -> "Tableau":
        a = np.asarray(a, dtype=np.uint8) & 1
        m = a.shape[0]
        if a.shape != (m, m) or m % 2:
            raise TableauError(f"need a square even-sized matrix, got {a.shape}")
        cols = tuple(int(sum(int(a[i, j]) << i for i in range(m))) for j in range(m))
        return cls(m // 2, cols)

    def rows(self) -> list[int]:
        """Row bit vectors; bit ``j`` is column ``j``."""
        m = 2 * self.n
        return [sum(((c >> i) & 1) << j for j, c in enumerate(self.cols)) for i in range(m)]

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[int]) -> "Tableau":
        m = 2 * n
        return cls(n, tuple(sum(((r >> j) & 1) << i for i, r in enumerate(rows)) for j in range(m)))

    def __str__(self) -> str:
        return "\n".join("".join(str(v) for v in row) for row in self.to_array())


def identity(n: int) -> Tableau:
    if n < 1:
        raise TableauError("n must be positive")
    return Tableau(n, tuple(1 << j for j in range(2 * n)))


def symplectic_form(u: int, v: int, n: int) -> int:
    """<u, v> = u_x . v_z + u_z . v_x (mod 2) for packed (x | z) vectors."""
    mask = (1 << n) - 1
    return _popparity(((u & mask) & (v >> n)) ^ ((u >> n) & (v & mask)))


def is_symplectic(t: Tableau) -> bool:
    """Block conditions A^T C = C^T A, B^T D = D^T B, A^T D + C^T B = I.

    Equivalently the columns form a symplectic basis: <col_j, col_{n+j}> = 1
    and every other pair is orthogonal.
    """
    n, c = t.n, t.cols
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            want = 1 if j == i + n else 0
            if symplectic_form(c[i], c[j], n) != want:
                return False
    return True


def _check_qubits(n: int, g: Gate) -> None:
    if max(g.qubits) >= n:
        raise TableauError(f"gate {g} out of range for {n} qubits")


def apply_gate(t: Tableau, g: Gate) -> Tableau:
    n = t.n
    _check_qubits(n, g)
    c = list(t.cols)
    k = g.qubits[0]
    if g.kind in (P, PDAG):
        c[n + k] ^= c[k]
    elif g.kind == H:
        c[k], c[n + k] = c[n + k], c[k]
    elif g.kind == CNOT:
        j = g.qubits[1]
        c[j] ^= c[k]
        c[n + k] ^= c[n + j]
    elif g.kind == CZ:
        b = g.qubits[1]
        c[n + k] ^= c[b]
        c[n + b] ^= c[k]
    elif g.kind == SWAP:
        b = g.qubits[1]
        c[k], c[b] = c[b], c[k]
        c[n + k], c[n + b] = c[n + b], c[n + k]
    out = Tableau(n, tuple(c))
    if DEBUG and not is_symplectic(out):
        raise TableauError(f"non-symplectic result after {g}")
    return out


def apply_gate_row(u: int, n: int, g: Gate) -> int:
    """Image row u @ M(g) for a packed (x | z) row vector u."""

    def bit(i):
        return (u >> i) & 1

    k = g.qubits[0]
    if g.kind in (P, PDAG):
        return u ^ (bit(k) << (n + k))
    if g.kind == H:
        d = bit(k) ^ bit(n + k)
        return u ^ (d << k) ^ (d << (n + k))
    j = g.qubits[1]
    if g.kind == CNOT:
        u ^= bit(k) << j
        return u ^ (bit(n + j) << (n + k))
    if g.kind == CZ:
        return u ^ (bit(j) << (n + k)) ^ (bit(k) << (n + j))
    if g.kind == SWAP:
        d = bit(k) ^ bit(j)
        u ^= (d << k) | (d << j)
        d = bit(n + k) ^ bit(n + j)
        return u ^ (d << (n + k)) ^ (d << (n + j))
    raise TableauError(g.kind)


def gate_matrix(g: Gate, n: int) -> Tableau:
    return apply_gate(identity(n), g)


def mat_vec(t: Tableau, v: int) -> int:
    """t @ v for a packed column vector v."""
    out = 0
    j = 0
    while v:
        if v & 1:
            out ^= t.cols[j]
        v >>= 1
        j += 1
    return out


def compose(a: Tableau, b: Tableau) -> Tableau:
    """Matrix product a @ b: circuit ``a`` followed by circuit ``b``."""
    if a.n != b.n:
        raise TableauError(f"dimension mismatch: {a.n} vs {b.n} qubits")
    return Tableau(a.n, tuple(mat_vec(a, c) for c in b.cols))


def transpose(t: Tableau) -> Tableau:
    return Tableau(t.n, tuple(t.rows()))


def inverse(t: Tableau) -> Tableau:
    # M Omega M^T = Omega with Omega = [[0, I], [I, 0]] gives M^-1 = Omega M^T Omega
    n = t.n
    r = t.rows()
    cols = []
    for j in range(2 * n):
        # column j of Omega M^T Omega is row (j +- n) of M with x/z halves swapped
        row = r[(j + n) % (2 * n)]
        mask = (1 << n) - 1
        cols.append(((row & mask) << n) | (row >> n))
    return Tableau(n, tuple(cols))


def relabel_matrix(perm: Sequence[int]) -> Tableau:
    """Tableau of the wire permutation sending qubit i to wire perm[i]."""
    n = len(perm)
    cols = [0] * (2 * n)
    for i, p in enumerate(perm):
        cols[p] = 1 << i
        cols[n + p] = 1 << (n + i)
    return Tableau(n, tuple(cols))


def permutation_of(t: Tableau) -> tuple[int, ...] | None:
    """Inverse of :func:`relabel_matrix`; None when ``t`` is not a wire permutation."""
    n = t.n
    perm = [0] * n
    for p in range(n):
        c = t.cols[p]
        if c == 0 or c & (c - 1) or c >= (1 << n):
            return None
        i = c.bit_length() - 1
        if t.cols[n + p] != 1 << (n + i):
            return None
        perm[i] = p
    if sorted(perm) != list(range(n)):
        return None
    return tuple(perm)


def apply_gates(t: Tableau, gates: Iterable[Gate]) -> Tableau:
    for g in gates:
        t = apply_gate(t, g)
    return t


def from_circuit(c: Circuit) -> Tableau:
    t = apply_gates(identity(c.n), c.gates)
    if c.relabel is not None:
        t = compose(t, relabel_matrix(c.relabel))
    return t


def rename(t: Tableau, perm: Sequence[int]) -> Tableau:
    """Simultaneous renaming of inputs and outputs, P t P^T."""
    r = relabel_matrix(perm)
    return compose(compose(inverse(r), t), r)


# --- text format -------------------------------------------------------------

def parse_tableau(text: str | bytes) -> Tableau:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("n "):
        raise TableauError("tableau file must start with 'n <n>'")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise TableauError("malformed 'n <n>' header") from None
    body = lines[1:]
    if len(body) != 2 * n or any(len(r) != 2 * n or set(r) - {"0", "1"} for r in body):
        raise TableauError(f"expected {2 * n} rows of {2 * n} binary digits")
    t = Tableau.from_array([[int(ch) for ch in r] for r in body])
    if not is_symplectic(t):
        raise TableauError("matrix is not symplectic")
    return t


def emit_tableau(t: Tableau) -> str:
    return f"n {t.n}\n{t}\n"


# --- linear reversible specialization ------------------------------------------

@dataclass(frozen=True)
class LinearMatrix:
    """Invertible n x n GF(2) matrix; ``cols[j]`` bit ``i`` is entry (i, j)."""

    n: int
    cols: tuple[int, ...]

    def to_array(self) -> np.ndarray:
        return np.array([[(c >> i) & 1 for c in self.cols] for i in range(self.n)], dtype=np.uint8)

    @classmethod
    def from_array(cls, a) -> "LinearMatrix":
        a = np.asarray(a, dtype=np.uint8) & 1
        n = a.shape[0]
        return cls(n, tuple(int(sum(int(a[i, j]) << i for i in range(n))) for j in range(n)))


def linear_identity(n: int) -> LinearMatrix:
    return LinearMatrix(n, tuple(1 << j for j in range(n)))


def linear_apply_cnot(a: LinearMatrix, k: int, j: int) -> LinearMatrix:
    if k == j or max(k, j) >= a.n or min(k, j) < 0:
        raise TableauError(f"bad CNOT({k}, {j}) on {a.n} qubits")
    c = list(a.cols)
    c[j] ^= c[k]
    return LinearMatrix(a.n, tuple(c))


def linear_from_tableau(t: Tableau) -> LinearMatrix:
    n = t.n
    lo = (1 << n) - 1
    for j in range(n):
        if t.cols[j] & ~lo or t.cols[n + j] & lo:
            raise TableauError("tableau is not block diagonal (not a CNOT-only unitary)")
    return LinearMatrix(n, t.cols[:n])


def gf2_inverse_cols(cols: Sequence[int], n: int) -> tuple[int, ...]:
    """Inverse of an n x n GF(2) matrix given by packed columns."""
    # Gauss-Jordan on rows of [A | I]
    rows = [sum(((cols[j] >> i) & 1) << j for j in range(n)) | (1 << (n + i)) for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if (rows[r] >> col) & 1), None)
        if piv is None:
            raise TableauError("matrix is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(n):
            if r != col and (rows[r] >> col) & 1:
                rows[r] ^= rows[col]
    inv_rows = [r >> n for r in rows]
    return tuple(sum(((inv_rows[i] >> j) & 1) << i for i in range(n)) for j in range(n))


def linear_to_tableau(a: LinearMatrix) -> Tableau:
    """Block-diagonal tableau diag(A, A^-T)."""
    n = a.n
    inv = gf2_inverse_cols(a.cols, n)
    # columns of A^-T are the rows of A^-1
    inv_rows = [sum(((inv[j] >> i) & 1) << j for j in range(n)) for i in range(n)]
    return Tableau(n, tuple(a.cols) + tuple(r << n for r in inv_rows))
