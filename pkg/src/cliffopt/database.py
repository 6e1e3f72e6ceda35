"""Layered breadth-first databases of optimal costs.

Layer ``k`` is the sorted array of canonical keys whose optimal cost is
exactly ``k``.  A layer is built from its parents only: every move applied
to a parent of cost ``k - w`` yields a child of cost ``k - 2w .. k``, so it
suffices to discard children already present in the last ``2 * w_max``
layers.  Zero-weight moves are closed over inside each layer.
"""

from __future__ import annotations

import io
import logging
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastcrc import crc64

from .canonical import EXACT, EquivMode, KeySpace, group_order, gl_order, keyspace
from .circuit import (
    CNOT,
    CZ,
    DEPTH,
    GATE_KINDS,
    GATES,
    H,
    P,
    PDAG,
    SWAP,
    WEIGHTED,
    CostModel,
    Gate,
)
from .tableau import LinearMatrix, Tableau

log = logging.getLogger(__name__)

MAGIC = b"CLDB1"
METRIC_IDS = {GATES: 0, DEPTH: 1, WEIGHTED: 2}
_LINEAR_FLAG = 0x80
_COMPLETE_FLAG = 0x40
PARENT_CHUNK = 1 << 17


class DatabaseError(Exception):
    pass


class CorruptDatabase(DatabaseError):
    pass


@dataclass(frozen=True)
class Move:
    """A unit of expansion: one gate, or one parallel layer for depth."""

    gates: tuple[Gate, ...]
    weight: int


def _single_gates(n: int, gate_set, linear: bool) -> list[Gate]:
    gs = set(gate_set)
    out: list[Gate] = []
    if linear:
        if gs != {CNOT}:
            raise DatabaseError("linear databases use the CNOT-only gate set")
    for q in range(n):
        if H in gs:
            out.append(Gate(H, (q,)))
        # P and PDAG have the same tableau; one of them suffices
        if P in gs:
            out.append(Gate(P, (q,)))
        elif PDAG in gs:
            out.append(Gate(PDAG, (q,)))
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            if CNOT in gs:
                out.append(Gate(CNOT, (a, b)))
            if a < b and CZ in gs:
                out.append(Gate(CZ, (a, b)))
            if a < b and SWAP in gs:
                out.append(Gate(SWAP, (a, b)))
    return out


def parallel_layers(n: int, gate_set) -> list[tuple[Gate, ...]]:
    """Every non-empty set of admitted gates on pairwise disjoint qubits."""
    gs = set(gate_set)
    one = [k for k in (H, P) if k in gs]
    if P not in gs and PDAG in gs:
        one.append(PDAG)
    out: list[tuple[Gate, ...]] = []

    def rec(q: int, used: frozenset, acc: list):
        if q == n:
            if acc:
                out.append(tuple(acc))
            return
        if q in used:
            rec(q + 1, used, acc)
            return
        rec(q + 1, used, acc)
        for k in one:
            rec(q + 1, used, acc + [Gate(k, (q,))])
        for j in range(q + 1, n):
            if j in used:
                continue
            u = used | {j}
            if CNOT in gs:
                rec(q + 1, u, acc + [Gate(CNOT, (q, j))])
                rec(q + 1, u, acc + [Gate(CNOT, (j, q))])
            if CZ in gs:
                rec(q + 1, u, acc + [Gate(CZ, (q, j))])
            if SWAP in gs:
                rec(q + 1, u, acc + [Gate(SWAP, (q, j))])

    rec(0, frozenset(), [])
    return out


def moves_for(n: int, model: CostModel, linear: bool = False) -> list[Move]:
    if model.metric == DEPTH:
        return [Move(layer, 1) for layer in parallel_layers(n, model.gate_set)]
    return [Move((g,), model.weight(g.kind)) for g in _single_gates(n, model.gate_set, linear)]


def _members(sorted_keys: np.ndarray, keys: np.ndarray) -> np.ndarray:
    if len(sorted_keys) == 0 or len(keys) == 0:
        return np.zeros(len(keys), dtype=bool)
    idx = np.searchsorted(sorted_keys, keys)
    idx[idx == len(sorted_keys)] = 0
    return sorted_keys[idx] == keys


def _unique(keys: np.ndarray) -> np.ndarray:
    if len(keys) == 0:
        return keys
    if keys.dtype == object:
        return np.array(sorted(set(keys.tolist())), dtype=object)
    return np.unique(keys)


@dataclass
class LayerDatabase:
    n: int
    mode: EquivMode
    model: CostModel
    layers: list[np.ndarray] = field(default_factory=list)
    linear: bool = False
    complete: bool = False
    stopped: str | None = None

    @property
    def space(self) -> KeySpace:
        return keyspace(self.n, self.linear)

    @property
    def max_cost(self) -> int:
        return len(self.layers) - 1

    @property
    def moves(self) -> list[Move]:
        return moves_for(self.n, self.model, self.linear)

    def __len__(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def layer_sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]

    def orbit_totals(self) -> list[int]:
        """Number of group elements per layer (classes weighted by orbit size)."""
        ks = self.space
        out = []
        for layer in self.layers:
            total = 0
            for start in range(0, len(layer), PARENT_CHUNK):
                total += int(ks.orbit_sizes(layer[start:start + PARENT_CHUNK], self.mode).sum())
            out.append(total)
        return out

    def group_size(self) -> int:
        return gl_order(self.n) if self.linear else group_order(self.n)

    # -- lookup ------------------------------------------------------------------
    def canonical(self, keys: np.ndarray) -> np.ndarray:
        return self.space.canonical(keys, self.mode)

    def cost_of_canonical(self, keys: np.ndarray) -> np.ndarray:
        """Layer index of each canonical key, -1 when absent."""
        out = np.full(len(keys), -1, dtype=np.int64)
        for k, layer in enumerate(self.layers):
            out[_members(layer, keys)] = k
        return out

    def lookup_keys(self, keys: np.ndarray) -> np.ndarray:
        return self.cost_of_canonical(self.canonical(keys))

    def lookup(self, t: Tableau | LinearMatrix) -> int | None:
        if t.n != self.n or isinstance(t, LinearMatrix) != self.linear:
            raise DatabaseError(f"object does not match a {self.n}-qubit {'linear ' if self.linear else ''}database")
        ks = self.space
        c = int(self.lookup_keys(ks.array([ks.encode(t)]))[0])
        return None if c < 0 else c

    def lookup_many(self, ts) -> np.ndarray:
        ks = self.space
        return self.lookup_keys(ks.array([ks.encode(t) for t in ts]))

    # -- persistence ---------------------------------------------------------------
    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    def to_bytes(self) -> bytes:
        buf = io.BytesIO()
        mode_byte = int(self.mode) | (_LINEAR_FLAG if self.linear else 0) | (_COMPLETE_FLAG if self.complete else 0)
        mask = sum(1 << i for i, k in enumerate(GATE_KINDS) if k in self.model.gate_set)
        weights = bytes(min(255, self.model.weights.get(k, 1)) for k in GATE_KINDS)
        buf.write(MAGIC)
        buf.write(struct.pack("<BBBH", self.n, mode_byte, METRIC_IDS[self.model.metric], mask))
        buf.write(weights)
        buf.write(struct.pack("<I", len(self.layers)))
        for layer in self.layers:
            buf.write(struct.pack("<Q", len(layer)))
            buf.write(_pack_keys(layer, self.space))
        payload = buf.getvalue()
        return payload + struct.pack("<Q", crc64.xz(payload))

    @classmethod
    def load(cls, path) -> "LayerDatabase":
        return cls.from_bytes(Path(path).read_bytes())

    @classmethod
    def from_bytes(cls, data: bytes) -> "LayerDatabase":
        if len(data) < len(MAGIC) + 8:
            raise CorruptDatabase("file too short")
        if data[:4] != MAGIC[:4]:
            raise CorruptDatabase("bad magic")
        if data[:5] != MAGIC:
            raise DatabaseError(f"unsupported database version {data[4:5]!r}")
        payload, (crc,) = data[:-8], struct.unpack("<Q", data[-8:])
        if crc64.xz(payload) != crc:
            raise CorruptDatabase("checksum mismatch (truncated or corrupt file)")
        pos = len(MAGIC)
        try:
            n, mode_byte, metric_id, mask = struct.unpack_from("<BBBH", payload, pos)
            pos += 5
            weights = payload[pos:pos + len(GATE_KINDS)]
            pos += len(GATE_KINDS)
            (nlayers,) = struct.unpack_from("<I", payload, pos)
            pos += 4
            linear = bool(mode_byte & _LINEAR_FLAG)
            ks = keyspace(n, linear)
            layers = []
            for _ in range(nlayers):
                (count,) = struct.unpack_from("<Q", payload, pos)
                pos += 8
                end = pos + count * ks.nbytes
                if end > len(payload):
                    raise CorruptDatabase("layer runs past end of file")
                layers.append(_unpack_keys(payload[pos:end], count, ks))
                pos = end
        except struct.error as exc:
            raise CorruptDatabase(str(exc)) from None
        if pos != len(payload):
            raise CorruptDatabase("trailing bytes after last layer")
        metric = {v: k for k, v in METRIC_IDS.items()}[metric_id]
        gate_set = tuple(k for i, k in enumerate(GATE_KINDS) if mask >> i & 1)
        w = {k: weights[i] for i, k in enumerate(GATE_KINDS) if k in gate_set} if metric == WEIGHTED else {}
        return cls(
            n=n,
            mode=EquivMode(mode_byte & 0x0F),
            model=CostModel(metric, gate_set, w),
            layers=layers,
            linear=linear,
            complete=bool(mode_byte & _COMPLETE_FLAG),
        )


def _pack_keys(keys: np.ndarray, ks: KeySpace) -> bytes:
    if ks.dtype is object:
        return b"".join(int(k).to_bytes(ks.nbytes, "big") for k in keys)
    raw = np.ascontiguousarray(keys, dtype=">u8").view(np.uint8).reshape(-1, 8)
    return raw[:, 8 - ks.nbytes:].tobytes()


def _unpack_keys(raw: bytes, count: int, ks: KeySpace) -> np.ndarray:
    if ks.dtype is object:
        w = ks.nbytes
        return ks.array([int.from_bytes(raw[i * w:(i + 1) * w], "big") for i in range(count)])
    arr = np.zeros((count, 8), dtype=np.uint8)
    arr[:, 8 - ks.nbytes:] = np.frombuffer(raw, dtype=np.uint8).reshape(count, ks.nbytes)
    return arr.view(">u8").reshape(count).astype(np.uint64)


# --- construction ------------------------------------------------------------------

def _expand(ks: KeySpace, mode, parents: np.ndarray, moves: list[Move]) -> np.ndarray:
    kids = [ks.canonical(ks.apply_gates(parents, m.gates), mode) for m in moves]
    return _unique(np.concatenate(kids)) if kids else ks.empty()


def _expand_parallel(ks, mode, parents, moves, pool) -> np.ndarray:
    chunks = [parents[i:i + PARENT_CHUNK] for i in range(0, len(parents), PARENT_CHUNK)]
    if not chunks or not moves:
        return ks.empty()
    if pool is None:
        parts = [_expand(ks, mode, c, moves) for c in chunks]
    else:
        parts = list(pool.map(lambda c: _expand(ks, mode, c, moves), chunks))
    return _unique(np.concatenate(parts))


def build(
    n: int,
    mode=EquivMode.SIMULTANEOUS,
    model: CostModel | None = None,
    max_cost: int | None = None,
    mem_limit: int | None = None,
    linear: bool = False,
    threads: int = 1,
    progress=None,
) -> LayerDatabase:
    """Breadth-first construction of all classes with cost <= ``max_cost``.

    Stops early when a layer comes out empty (the database is then complete)
    or when ``mem_limit`` bytes of keys would be exceeded; in the latter case
    the returned database is valid up to its last layer and ``stopped`` says
    why.
    """
    mode = EquivMode.parse(mode)
    model = model or (CostModel.gate_count((CNOT,)) if linear else CostModel())
    ks = keyspace(n, linear)
    db = LayerDatabase(n, mode, model, [], linear)
    all_moves = moves_for(n, model, linear)
    zero = [m for m in all_moves if m.weight == 0]
    positive = [m for m in all_moves if m.weight > 0]
    wmax = max((m.weight for m in positive), default=1)
    itemsize = 8 if ks.dtype is not object else ks.nbytes + 40
    pool = ThreadPoolExecutor(threads) if threads and threads > 1 else None

    def saturate(found: np.ndarray, older: list[np.ndarray]) -> np.ndarray:
        frontier = found
        while zero and len(frontier):
            kids = _expand_parallel(ks, mode, frontier, zero, pool)
            fresh = ~_members(found, kids)
            for layer in older:
                fresh &= ~_members(layer, kids)
            frontier = kids[fresh]
            found = _unique(np.concatenate([found, frontier]))
        return found

    try:
        layer0 = saturate(ks.canonical(ks.array([ks.identity_key()]), mode), [])
        db.layers.append(layer0)
        if progress:
            progress(0, len(layer0))
        stored = len(layer0) * itemsize
        k = 0
        db.complete = not positive
        while positive and (max_cost is None or k < max_cost):
            k += 1
            parts = []
            for w in sorted({m.weight for m in positive}):
                if k - w < 0:
                    continue
                mv = [m for m in positive if m.weight == w]
                parts.append(_expand_parallel(ks, mode, db.layers[k - w], mv, pool))
            cand = _unique(np.concatenate(parts)) if parts else ks.empty()
            older = db.layers[max(0, k - 2 * wmax):k]
            keep = np.ones(len(cand), dtype=bool)
            for layer in older:
                keep &= ~_members(layer, cand)
            cand = saturate(cand[keep], older)
            if mem_limit is not None and stored + len(cand) * itemsize > mem_limit:
                db.stopped = f"memory limit reached while building layer {k}; complete through layer {k - 1}"
                log.warning(db.stopped)
                break
            if len(cand) == 0 and all(len(x) == 0 for x in db.layers[max(0, k - wmax + 1):]):
                db.complete = True
                break
            db.layers.append(cand)
            stored += len(cand) * itemsize
            if progress:
                progress(k, len(cand))
        # trim trailing empty layers left by weighted metrics
        while len(db.layers) > 1 and len(db.layers[-1]) == 0:
            db.layers.pop()
    finally:
        if pool is not None:
            pool.shutdown()
    return db


def exact_cost_table(db: LayerDatabase) -> dict[int, int]:
    """Map every group element key (exact encoding) to its cost.  Small n only."""
    ks = db.space
    out: dict[int, int] = {}
    for k, layer in enumerate(db.layers):
        if len(layer) == 0:
            continue
        for v in np.unique(ks.members(layer, db.mode).ravel()) if db.mode != EXACT else layer:
            out[int(v)] = k
    return out
