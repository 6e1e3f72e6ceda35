"""Canonical representatives under qubit renaming.

Tableaux are packed into integer keys.  The 2n columns are grouped per
qubit: unit ``k`` holds the pair (col_k, col_{n+k}) as one 4n-bit string
``col_k << 2n | col_{n+k}``, and unit 0 occupies the most significant bits.
Integer order on keys is therefore lexicographic order on the unit
sequence, and sorting the units of a key is a canonical form under any
permutation of column pairs.  Linear (CNOT-only) matrices use the same
scheme with one n-bit column per unit.

Renaming qubits is a bit permutation of the key.  All n! renamings are
visited by Heap's algorithm so that each step is a single transposition,
and a transposition is at most two delta swaps (rows inside every column
field, then the two unit fields).  A table-driven version with 8-bit chunk
lookups is kept as ``transpose_qubits_lut`` for cross-checking.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import CNOT, CZ, H, P, PDAG, SWAP, Gate
from .tableau import LinearMatrix, Tableau, TableauError


class EquivMode(enum.IntEnum):
    EXACT = 0
    SIMULTANEOUS = 1
    INDEPENDENT = 2

    @classmethod
    def parse(cls, name) -> "EquivMode":
        if isinstance(name, (cls, int)):
            return cls(name)
        return cls[str(name).upper()]


EXACT = EquivMode.EXACT
SIMULTANEOUS = EquivMode.SIMULTANEOUS
INDEPENDENT = EquivMode.INDEPENDENT


def heap_transpositions(n: int) -> list[tuple[int, int]]:
    """Transpositions that walk through all n! permutations (Heap's algorithm)."""
    swaps = []
    c = [0] * n
    i = 1
    while i < n:
        if c[i] < i:
            swaps.append((0, i) if i % 2 == 0 else (c[i], i))
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1
    return swaps


class KeySpace:
    """Packed-key arithmetic for one register size.

    ``linear=False``: symplectic tableaux, 4n^2-bit keys.
    ``linear=True``: invertible n x n matrices, n^2-bit keys.
    """

    CHUNK = 8

    def __init__(self, n: int, linear: bool = False):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.linear = linear
        self.ncols = n if linear else 2 * n
        self.colbits = n if linear else 2 * n
        self.unit = n if linear else 4 * n
        self.bits = self.unit * n
        self.nbytes = (self.bits + 7) // 8
        self.dtype = np.uint64 if self.bits <= 64 else object
        self.colmask = (1 << self.colbits) - 1
        self.unitmask = (1 << self.unit) - 1
        self.shift = [self._col_shift(j) for j in range(self.ncols)]
        self.swaps = heap_transpositions(n)
        self._lut_cache: dict = {}

    # -- layout -------------------------------------------------------------
    def _col_shift(self, j: int) -> int:
        n = self.n
        if self.linear:
            return n * (n - 1 - j)
        if j < n:
            return self.unit * (n - 1 - j) + 2 * n
        return self.unit * (n - 1 - (j - n))

    def _row_image(self, i: int, perm) -> int:
        if self.linear:
            return perm[i]
        n = self.n
        return perm[i % n] + n * (i // n)

    def _col_image(self, j: int, perm) -> int:
        return self._row_image(j, perm)

    def array(self, values) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(len(values), dtype=object)
            out[:] = [int(v) for v in values]
            return out
        return np.asarray(values, dtype=np.uint64)

    def empty(self) -> np.ndarray:
        return np.empty(0, dtype=self.dtype)

    # -- conversions ----------------------------------------------------------
    def encode(self, t) -> int:
        if t.n != self.n or len(t.cols) != self.ncols:
            raise TableauError(f"expected a {'linear' if self.linear else 'symplectic'} object on {self.n} qubits")
        return sum(c << s for c, s in zip(t.cols, self.shift))

    def decode(self, key: int):
        key = int(key)
        cols = tuple((key >> s) & self.colmask for s in self.shift)
        return LinearMatrix(self.n, cols) if self.linear else Tableau(self.n, cols)

    def identity_key(self) -> int:
        return sum(1 << (j + s) for j, s in enumerate(self.shift))

    def to_bytes(self, key: int) -> bytes:
        return int(key).to_bytes(self.nbytes, "big")

    # -- gate application -------------------------------------------------------
    def _col(self, keys, j):
        return (keys >> self.shift[j]) & self.colmask

    def apply_gate(self, keys: np.ndarray, g: Gate) -> np.ndarray:
        n, sh = self.n, self.shift
        k = g.qubits[0]
        if self.linear:
            if g.kind != CNOT:
                raise ValueError(f"linear space admits CNOT only, got {g.kind}")
            return keys ^ (self._col(keys, k) << sh[g.qubits[1]])
        if g.kind in (P, PDAG):
            return keys ^ (self._col(keys, k) << sh[n + k])
        if g.kind == H:
            d = self._col(keys, k) ^ self._col(keys, n + k)
            return keys ^ (d << sh[k]) ^ (d << sh[n + k])
        j = g.qubits[1]
        if g.kind == CNOT:
            keys = keys ^ (self._col(keys, k) << sh[j])
            return keys ^ (self._col(keys, n + j) << sh[n + k])
        if g.kind == CZ:
            return keys ^ (self._col(keys, j) << sh[n + k]) ^ (self._col(keys, k) << sh[n + j])
        if g.kind == SWAP:
            keys = self._swap_cols(keys, k, j)
            return self._swap_cols(keys, n + k, n + j)
        raise ValueError(g.kind)

    def _swap_cols(self, keys, a, b):
        d = self._col(keys, a) ^ self._col(keys, b)
        return keys ^ (d << self.shift[a]) ^ (d << self.shift[b])

    def apply_gates(self, keys: np.ndarray, gates) -> np.ndarray:
        for g in gates:
            keys = self.apply_gate(keys, g)
        return keys

    def left_multiply(self, t, keys: np.ndarray) -> np.ndarray:
        """Keys of t @ M for every M encoded in ``keys``."""
        size = 1 << self.colbits
        lut = [0] * size
        for v in range(size):
            acc, j, x = 0, 0, v
            while x:
                if x & 1:
                    acc ^= t.cols[j]
                x >>= 1
                j += 1
            lut[v] = acc
        lut = self.array(lut)
        out = np.zeros(len(keys), dtype=self.dtype)
        if self.dtype is object:
            out[:] = 0
        for s in self.shift:
            idx = ((keys >> s) & self.colmask).astype(np.int64)
            out = out | (lut[idx] << s)
        return out

    # -- bit permutations -------------------------------------------------------
    def _bit_lut(self, bitmap: list[int]) -> list[np.ndarray]:
        c = self.CHUNK
        tables = []
        for start in range(0, self.bits, c):
            width = min(c, self.bits - start)
            vals = [0] * (1 << width)
            for v in range(1 << width):
                acc = 0
                for b in range(width):
                    if (v >> b) & 1:
                        acc |= 1 << bitmap[start + b]
                vals[v] = acc
            tables.append(self.array(vals))
        return tables

    def _bitmap(self, perm, rows: bool, cols: bool) -> list[int]:
        bitmap = [0] * self.bits
        for j in range(self.ncols):
            jj = self._col_image(j, perm) if cols else j
            for i in range(self.colbits):
                ii = self._row_image(i, perm) if rows else i
                bitmap[self.shift[j] + i] = self.shift[jj] + ii
        return bitmap

    def _luts(self, a: int, b: int, rows: bool, cols: bool):
        key = (a, b, rows, cols)
        if key not in self._lut_cache:
            perm = list(range(self.n))
            perm[a], perm[b] = perm[b], perm[a]
            self._lut_cache[key] = self._bit_lut(self._bitmap(perm, rows, cols))
        return self._lut_cache[key]

    def _permute_bits(self, keys: np.ndarray, tables) -> np.ndarray:
        c = self.CHUNK
        out = None
        for idx, table in enumerate(tables):
            part = table[((keys >> (idx * c)) & ((1 << c) - 1)).astype(np.int64)]
            out = part if out is None else out | part
        return out

    def _delta_swaps(self, a: int, b: int, rows: bool, cols: bool):
        key = (a, b, rows, cols, "delta")
        if key not in self._lut_cache:
            a, b = min(a, b), max(a, b)
            ops = []
            if rows:
                # bit a <-> bit b (and n+a <-> n+b) inside every column field
                low = (1 << a) if self.linear else (1 << a) | (1 << (self.n + a))
                mask = sum(low << self.shift[j] for j in range(self.ncols))
                ops.append((b - a, mask))
            if cols:
                # whole unit fields a <-> b
                w = self.unit
                ops.append((w * (b - a), self.unitmask << (w * (self.n - 1 - b))))
            if self.dtype is not object:
                ops = [(np.uint64(d), np.uint64(m)) for d, m in ops]
            self._lut_cache[key] = ops
        return self._lut_cache[key]

    def transpose_qubits(self, keys, a, b, rows=True, cols=True) -> np.ndarray:
        """Keys after exchanging qubits ``a`` and ``b`` (delta swaps, no tables)."""
        if a == b:
            return keys.copy()
        x = keys
        for d, m in self._delta_swaps(a, b, rows, cols):
            t = ((x >> d) ^ x) & m
            x = x ^ t ^ (t << d)
        return x

    def transpose_qubits_lut(self, keys, a, b, rows=True, cols=True) -> np.ndarray:
        return self._permute_bits(keys, self._luts(a, b, rows, cols))

    def renamings(self, keys: np.ndarray, rows: bool = True, cols: bool = True):
        """Yield the key array under each of the n! qubit renamings (identity first)."""
        cur = keys
        yield cur
        for a, b in self.swaps:
            cur = self.transpose_qubits(cur, a, b, rows, cols)
            yield cur

    def sort_units(self, keys: np.ndarray) -> np.ndarray:
        n, w = self.n, self.unit
        units = np.stack([(keys >> (w * (n - 1 - k))) & self.unitmask for k in range(n)], axis=1)
        units = np.sort(units, axis=1)
        out = units[:, 0]
        for k in range(1, n):
            out = (out << w) | units[:, k]
        return out

    # -- canonical forms -----------------------------------------------------------
    def canonical(self, keys: np.ndarray, mode) -> np.ndarray:
        mode = EquivMode.parse(mode)
        keys = np.asarray(keys, dtype=self.dtype)
        if mode == EXACT or self.n == 1 and mode == SIMULTANEOUS:
            return keys.copy()
        if len(keys) == 0:
            return keys.copy()
        if mode == SIMULTANEOUS:
            best = None
            for img in self.renamings(keys):
                best = img if best is None else np.minimum(best, img)
            return best
        best = None
        for img in self.renamings(keys, rows=True, cols=False):
            img = self.sort_units(img)
            best = img if best is None else np.minimum(best, img)
        return best

    def members(self, keys: np.ndarray, mode, side: str = "both") -> np.ndarray:
        """Orbit images as a (len(keys), m) array, possibly with repeats.

        ``side="left"`` restricts independent renaming to row permutations,
        which is all a right-invariant lookup needs.
        """
        mode = EquivMode.parse(mode)
        keys = np.asarray(keys, dtype=self.dtype)
        if mode == EXACT:
            return keys[:, None].copy()
        if mode == SIMULTANEOUS:
            return np.stack(list(self.renamings(keys)), axis=1)
        left = list(self.renamings(keys, rows=True, cols=False))
        if side == "left":
            return np.stack(left, axis=1)
        out = []
        for img in left:
            out.extend(self.renamings(img, rows=False, cols=True))
        return np.stack(out, axis=1)

    def orbit_sizes(self, keys: np.ndarray, mode) -> np.ndarray:
        mode = EquivMode.parse(mode)
        if mode == EXACT or len(keys) == 0:
            return np.ones(len(keys), dtype=np.int64)
        if mode == INDEPENDENT:
            # units are distinct (independent columns), so each row permutation
            # fixes the key for at most one column permutation
            keys = np.asarray(keys, dtype=self.dtype)
            base = self.sort_units(keys)
            fixed = np.zeros(len(keys), dtype=np.int64)
            for img in self.renamings(keys, rows=True, cols=False):
                fixed += self.sort_units(img) == base
            return math.factorial(self.n) ** 2 // fixed
        m = self.members(keys, mode)
        m = np.sort(m, axis=1)
        distinct = 1 + (m[:, 1:] != m[:, :-1]).sum(axis=1)
        return distinct.astype(np.int64)


@lru_cache(maxsize=None)
def keyspace(n: int, linear: bool = False) -> KeySpace:
    return KeySpace(n, linear)


@dataclass(frozen=True, order=True)
class CanonicalKey:
    mode: EquivMode
    n: int
    value: int
    linear: bool = False

    @property
    def bytes(self) -> bytes:
        return keyspace(self.n, self.linear).to_bytes(self.value)

    def decode(self):
        return keyspace(self.n, self.linear).decode(self.value)


def canonicalize(t: Tableau, mode=SIMULTANEOUS) -> CanonicalKey:
    mode = EquivMode.parse(mode)
    ks = keyspace(t.n)
    v = ks.canonical(ks.array([ks.encode(t)]), mode)[0]
    return CanonicalKey(mode, t.n, int(v))


def canonicalize_linear(a: LinearMatrix, mode=SIMULTANEOUS) -> CanonicalKey:
    mode = EquivMode.parse(mode)
    ks = keyspace(a.n, linear=True)
    v = ks.canonical(ks.array([ks.encode(a)]), mode)[0]
    return CanonicalKey(mode, a.n, int(v), linear=True)


def orbit(t, mode=SIMULTANEOUS) -> set:
    """All distinct members of the equivalence class of ``t``."""
    mode = EquivMode.parse(mode)
    ks = keyspace(t.n, isinstance(t, LinearMatrix))
    m = ks.members(ks.array([ks.encode(t)]), mode)[0]
    return {ks.decode(v) for v in set(int(v) for v in m)}


def group_order(n: int) -> int:
    """|Sp(2n, 2)| = 2^(n^2) prod_{j=1..n} (4^j - 1)."""
    return 2 ** (n * n) * math.prod(4**j - 1 for j in range(1, n + 1))


def gl_order(n: int) -> int:
    return math.prod(2**n - 2**i for i in range(n))


def permutations(n: int):
    return itertools.permutations(range(n))
