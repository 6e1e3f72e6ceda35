"""Stabilizer codes: parsing, two baseline encoders and optimal encoder search.

Convention: the k logical inputs sit on the first k wires and the n - k
ancillas, prepared in |0>, on the last ones.  An encoder is correct when the
Z-image rows of the ancilla wires span the stabilizer group.

Signs are ignored throughout; the encoders are correct up to a trailing
layer of Pauli gates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import CNOT, CZ, DEPTH, GATES, H, P, PDAG, SWAP, Circuit, CostModel, Gate, cx, h, s
from .synth import NotFound
from .tableau import apply_gate_row, from_circuit, symplectic_form

_PAULI_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


class StabilizerError(ValueError):
    pass


def rref(rows: Sequence[int]) -> tuple[int, ...]:
    """Fully reduced row echelon form of packed GF(2) rows, zero rows dropped.

    Pivots are the highest set bits; rows come out in descending order.
    """
    basis: list[int] = []
    for r in rows:
        for b in basis:
            if r & (1 << (b.bit_length() - 1)):
                r ^= b
        if r:
            top = 1 << (r.bit_length() - 1)
            basis = [b ^ r if b & top else b for b in basis]
            basis.append(r)
    return tuple(sorted(basis, reverse=True))


def rank(rows: Sequence[int]) -> int:
    return len(rref(rows))


def pauli_string(u: int, n: int) -> str:
    return "".join("IXZY"[((u >> q) & 1) | (((u >> (n + q)) & 1) << 1)] for q in range(n))


@dataclass(frozen=True)
class StabilizerGroup:
    n: int
    generators: tuple[int, ...]

    def __post_init__(self):
        _validate(self.n, self.generators)

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def k(self) -> int:
        return self.n - self.r

    def ancillas(self) -> range:
        return range(self.k, self.n)

    def target(self) -> "PartialTarget":
        return PartialTarget(self.n, self.generators)

    def __str__(self) -> str:
        return "\n".join(pauli_string(u, self.n) for u in self.generators)


def _validate(n: int, rows: Sequence[int]) -> None:
    if any(u >> (2 * n) for u in rows):
        raise StabilizerError(f"row wider than {2 * n} bits")
    if len(rows) > n:
        raise StabilizerError(f"{len(rows)} generators on {n} qubits: dependent rows")
    if rank(rows) != len(rows):
        raise StabilizerError("dependent rows: generators are not linearly independent")
    for i, u in enumerate(rows):
        for j in range(i + 1, len(rows)):
            if symplectic_form(u, rows[j], n):
                raise StabilizerError(f"anticommuting rows: generators {i} and {j} do not commute")


def parse_stabilizers(text: str | bytes) -> StabilizerGroup:
    """One Pauli string per line, e.g. ``XZZXI``; a leading sign is dropped."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    words = []
    signed = False
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        if ln[0] in "+-":
            signed = True
            ln = ln[1:].strip()
        word = ln.upper()
        if not word or set(word) - set(_PAULI_BITS):
            raise StabilizerError(f"not a Pauli string: {ln!r}")
        words.append(word)
    if not words:
        raise StabilizerError("no generators")
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise StabilizerError("unequal lengths: all generators must act on the same number of qubits")
    if signed:
        warnings.warn("generator signs are ignored; the encoder is correct up to a Pauli layer", stacklevel=2)
    rows = []
    for w in words:
        u = 0
        for q, ch in enumerate(w):
            x, z = _PAULI_BITS[ch]
            u |= (x << q) | (z << (n + q))
        rows.append(u)
    return StabilizerGroup(n, tuple(rows))


# --- verification --------------------------------------------------------------

def designated_rows(c: Circuit, r: int) -> list[int]:
    """Z-image rows of the last ``r`` wires of ``c``."""
    rows = from_circuit(c).rows()
    return [rows[c.n + q] for q in range(c.n - r, c.n)]


def verify_encoder(c: Circuit, sg: StabilizerGroup) -> bool:
    if c.n != sg.n:
        return False
    return rref(designated_rows(c, sg.r)) == rref(sg.generators)


# --- baseline encoders -----------------------------------------------------------

class _Reducer:
    """Gates applied to the stabilizer rows, recorded in order."""

    def __init__(self, sg: StabilizerGroup):
        self.n = sg.n
        self.rows = list(sg.generators)
        self.gates: list[Gate] = []

    def x(self, i: int, q: int) -> int:
        return (self.rows[i] >> q) & 1

    def z(self, i: int, q: int) -> int:
        return (self.rows[i] >> (self.n + q)) & 1

    def apply(self, g: Gate) -> None:
        self.gates.append(g)
        self.rows = [apply_gate_row(u, self.n, g) for u in self.rows]

    def encoder(self) -> Circuit:
        # rows @ M(gates) spans the ancilla Z rows, so the inverse maps them back
        return Circuit(self.n, tuple(self.gates)).inverse()


def encode_staged(sg: StabilizerGroup) -> Circuit:
    """Encoder built from homogeneous stages.

    The reduction runs CNOT, CZ, phase and Hadamard stages on the rows with
    an X part, turning them into Z on ancillas, then one more CNOT stage on
    the remaining Z-type rows.  CZ is emitted as H CX H.
    """
    red = _Reducer(sg)
    n = sg.n
    anc = list(sg.ancillas())
    xrows, zrows = _split_rows(sg.generators, (1 << n) - 1)
    red.rows = xrows + zrows
    rho = len(xrows)

    # CNOT stage: X block of row i becomes exactly X on anc[i]
    for i in range(rho):
        t = anc[i]
        for j in range(i):
            if red.x(i, anc[j]):
                red.rows[i] ^= red.rows[j]
        if not red.x(i, t):
            c = next(q for q in range(n) if red.x(i, q))
            red.apply(cx(c, t))
        for c in range(n):
            if c != t and red.x(i, c):
                red.apply(cx(t, c))
        for j in range(rho):
            if j != i and red.x(j, t):
                red.rows[j] ^= red.rows[i]

    # CZ stage: clear Z off the diagonal of the X-type rows
    outer = [(anc[i], q) for i in range(rho) for q in range(n) if q not in anc[:rho] and red.z(i, q)]
    inner = [(anc[i], anc[j]) for i in range(rho) for j in range(i + 1, rho) if red.z(i, anc[j])]
    targets = sorted({b for _, b in outer})
    for b in targets:
        red.apply(h(b))
    for a, b in outer:
        red.apply(cx(a, b))
    for b in targets:
        red.apply(h(b))
    for a, b in inner:
        red.apply(h(b))
        red.apply(cx(a, b))
        red.apply(h(b))
    # phase stage, then Hadamards turn X on the ancilla into Z
    for i in range(rho):
        if red.z(i, anc[i]):
            red.apply(s(anc[i]))
    for i in range(rho):
        red.apply(h(anc[i]))

    # Z-type rows: a CNOT stage maps them onto the remaining ancillas
    _clear_z_rows(red, list(range(rho, sg.r)), anc[rho:], done=anc[:rho])
    return red.encoder()


def _split_rows(gens: Sequence[int], xmask: int) -> tuple[list[int], list[int]]:
    """Basis of the group: rows with independent X parts, then rows with none."""
    xrows: list[int] = []
    zrows: list[int] = []
    for r in gens:
        for b in xrows:
            if r & xmask & (1 << ((b & xmask).bit_length() - 1)):
                r ^= b
        if r & xmask:
            xrows.append(r)
        else:
            zrows.append(r)
    return xrows, zrows


def _clear_z_rows(red: _Reducer, idx: list[int], free: list[int], done: list[int]) -> None:
    """CNOTs turning Z-only rows ``idx`` into Z on the wires ``free``."""
    n = red.n
    finished: list[tuple[int, int]] = [(i, a) for i, a in zip(range(len(done)), done)]
    for i, t in zip(idx, free):
        for j, a in finished:
            if red.z(i, a):
                red.rows[i] ^= red.rows[j]
        if not red.z(i, t):
            c = next(q for q in range(n) if red.z(i, q))
            red.apply(cx(t, c))
        for c in range(n):
            if c != t and red.z(i, c):
                red.apply(cx(c, t))
        for j in idx:
            if j != i and red.z(j, t):
                red.rows[j] ^= red.rows[i]
        finished.append((i, t))


def encode_unstaged(sg: StabilizerGroup, restore: bool = True) -> Circuit:
    """Encoder built one generator at a time.

    Each generator is rotated to Z-type by single-qubit gates on its support,
    its parity is collected onto one unused ancilla by CNOTs, and the other
    support qubits are rotated back.  ``restore=False`` skips the rotation
    back, which gives a smaller circuit.
    """
    red = _Reducer(sg)
    n = sg.n
    free = list(sg.ancillas())
    finished: list[tuple[int, int]] = []
    for i in range(sg.r):
        for j, a in finished:
            if red.z(i, a):
                red.rows[i] ^= red.rows[j]
        support = [q for q in range(n) if red.x(i, q) or red.z(i, q)]
        basis: list[tuple[int, list[Gate]]] = []
        for q in support:
            if red.x(i, q):
                change = [s(q), h(q)] if red.z(i, q) else [h(q)]
                for g in change:
                    red.apply(g)
                basis.append((q, change))
        piv = next((q for q in support if q in free), None)
        if piv is None:
            piv = free[0]
            red.apply(cx(piv, support[0]))
        free.remove(piv)
        for q in support:
            if q != piv:
                red.apply(cx(q, piv))
        if restore:
            # rotate the other support qubits back
            for q, change in reversed(basis):
                if q != piv:
                    for g in reversed(change):
                        red.apply(Gate(PDAG, g.qubits) if g.kind == P else g)
        finished.append((i, piv))
    return red.encoder()


# --- optimal search over partial tableaux -------------------------------------------

@dataclass(frozen=True)
class PartialTarget:
    """r rows that designated tableau rows must span, up to row operations.

    ``slots`` index tableau rows (0..2n-1); by default the Z rows of the
    last r wires.
    """

    n: int
    rows: tuple[int, ...]
    slots: tuple[int, ...] | None = None

    def __post_init__(self):
        _validate(self.n, self.rows)
        if self.slots is None:
            r = len(self.rows)
            object.__setattr__(self, "slots", tuple(self.n + q for q in range(self.n - r, self.n)))
        if len(self.slots) != len(self.rows) or len(set(self.slots)) != len(self.slots):
            raise StabilizerError("need one distinct slot per row")
        start = [1 << sl for sl in self.slots]
        for i, u in enumerate(start):
            for v in start[i + 1:]:
                if symplectic_form(u, v, self.n):
                    raise StabilizerError("slots hold anticommuting rows")

    @property
    def r(self) -> int:
        return len(self.rows)

    def start_rows(self) -> tuple[int, ...]:
        return tuple(1 << sl for sl in self.slots)

    def matched_by(self, c: Circuit) -> bool:
        rows = from_circuit(c).rows()
        return rref([rows[sl] for sl in self.slots]) == rref(self.rows)


def _bit(a: np.ndarray, i: int) -> np.ndarray:
    return (a >> np.uint64(i)) & np.uint64(1)


def _shl(a: np.ndarray, i: int) -> np.ndarray:
    return a << np.uint64(i)


def rows_apply(rows: np.ndarray, n: int, g: Gate) -> np.ndarray:
    """Vectorized :func:`apply_gate_row` on a uint64 array of packed rows."""
    u = rows
    k = g.qubits[0]
    if g.kind in (P, PDAG):
        return u ^ _shl(_bit(u, k), n + k)
    if g.kind == H:
        d = _bit(u, k) ^ _bit(u, n + k)
        return u ^ _shl(d, k) ^ _shl(d, n + k)
    j = g.qubits[1]
    if g.kind == CNOT:
        u = u ^ _shl(_bit(u, k), j)
        return u ^ _shl(_bit(u, n + j), n + k)
    if g.kind == CZ:
        return u ^ _shl(_bit(u, j), n + k) ^ _shl(_bit(u, k), n + j)
    if g.kind == SWAP:
        d = _bit(u, k) ^ _bit(u, j)
        u = u ^ _shl(d, k) ^ _shl(d, j)
        d = _bit(u, n + k) ^ _bit(u, n + j)
        return u ^ _shl(d, n + k) ^ _shl(d, n + j)
    raise ValueError(g.kind)


def rref_batch(rows: np.ndarray, nbits: int) -> np.ndarray:
    """Row-wise RREF of a (B, r) uint64 array of full-rank row sets, rows sorted descending."""
    R = rows.copy()
    b, r = R.shape
    ar = np.arange(b)
    piv = np.zeros((b, r), dtype=bool)
    for p in range(nbits - 1, -1, -1):
        has = _bit(R, p).astype(bool)
        cand = has & ~piv
        some = cand.any(axis=1)
        if not some.any():
            continue
        idx = cand.argmax(axis=1)
        prow = R[ar, idx]
        has[ar, idx] = False
        has &= some[:, None]
        R ^= np.where(has, prow[:, None], np.uint64(0))
        piv[ar[some], idx[some]] = True
    R.sort(axis=1)
    return R[:, ::-1]


class _Keys:
    """Packs canonical row sets (plus optional extra bits) into sortable keys."""

    def __init__(self, r: int, nbits: int, extra: int = 0):
        self.r, self.nbits, self.extra = r, nbits, extra
        self.wide = r * nbits + extra > 64

    def pack(self, R: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
        if self.wide:
            out = np.array([sum(int(v) << (self.nbits * i) for i, v in enumerate(row)) for row in R], dtype=object)
            if mask is not None:
                out = out * (1 << self.extra) + mask.astype(object)
            return out
        key = np.zeros(len(R), dtype=np.uint64)
        for i in range(self.r):
            key |= _shl(R[:, i], self.nbits * i)
        if mask is not None:
            key = _shl(key, self.extra) | mask.astype(np.uint64)
        return key


def _first_unique(keys: np.ndarray) -> np.ndarray:
    """Indices of the first occurrence of each distinct key, in key order."""
    if len(keys) == 0:
        return np.zeros(0, dtype=np.int64)
    if keys.dtype == object:
        seen: dict = {}
        for i, k in enumerate(keys.tolist()):
            seen.setdefault(k, i)
        return np.array([seen[k] for k in sorted(seen)], dtype=np.int64)
    _, idx = np.unique(keys, return_index=True)
    return idx


def _isin_sorted(sorted_keys: np.ndarray, keys: np.ndarray) -> np.ndarray:
    if len(sorted_keys) == 0 or len(keys) == 0:
        return np.zeros(len(keys), dtype=bool)
    idx = np.searchsorted(sorted_keys, keys)
    idx[idx == len(sorted_keys)] = 0
    return sorted_keys[idx] == keys


@dataclass
class _Stage:
    rows: np.ndarray  # (B, r) canonical rows
    parent: np.ndarray  # index into the previous stage
    action: np.ndarray  # index into the gate table, -1 for none


class _Side:
    """One direction of the search: levels of canonical row sets with back pointers."""

    def __init__(self, start: Sequence[int], n: int, r: int):
        self.n, self.r = n, r
        R = rref_batch(np.array([sorted(start)], dtype=np.uint64), 2 * n)
        self.keys = _Keys(r, 2 * n)
        root = _Stage(R, np.zeros(1, dtype=np.int64), np.full(1, -1, dtype=np.int64))
        self.levels: list[list[_Stage]] = [[root]]
        self.level_keys: list[np.ndarray] = [self.keys.pack(R)]
        self.visited = self.level_keys[0].copy()

    @property
    def frontier(self) -> _Stage:
        return self.levels[-1][-1]

    def size(self) -> int:
        return sum(len(k) for k in self.level_keys)

    def push(self, stages: list[_Stage]) -> np.ndarray:
        """Drop already visited states from the last stage and record the level."""
        last = stages[-1]
        keys = self.keys.pack(last.rows)
        first = _first_unique(keys)
        keys = keys[first]
        fresh = ~_isin_sorted(self.visited, keys)
        keep = first[fresh]
        stages[-1] = _Stage(last.rows[keep], last.parent[keep], last.action[keep])
        keys = keys[fresh]
        self.levels.append(stages)
        self.level_keys.append(keys)
        self.visited = np.union1d(self.visited, keys) if self.visited.dtype != object else np.array(
            sorted(set(self.visited.tolist()) | set(keys.tolist())), dtype=object)
        return keys

    def path(self, level: int, index: int, table: list[Gate]) -> list[list[Gate]]:
        """Gate layers from the root to state ``index`` of ``level``."""
        layers: list[list[Gate]] = []
        for lv in range(level, 0, -1):
            layer: list[Gate] = []
            for st in reversed(self.levels[lv]):
                a = int(st.action[index])
                if a >= 0:
                    layer.append(table[a])
                index = int(st.parent[index])
            layers.append(layer[::-1])
        return layers[::-1]


class _Expander:
    def __init__(self, n: int, r: int, model: CostModel, chunk: int):
        self.n, self.r, self.model, self.chunk = n, r, model, chunk
        gs = set(model.gate_set)
        self.one = [k for k in (H, P) if k in gs]
        if P not in gs and PDAG in gs:
            self.one.append(PDAG)
        self.two = [k for k in (CNOT, CZ, SWAP) if k in gs]
        self.table: list[Gate] = []
        self.index: dict[Gate, int] = {}
        for q in range(n):
            for kd in self.one:
                self._add(Gate(kd, (q,)))
        for a in range(n):
            for b in range(n):
                if a != b:
                    for kd in self.two:
                        if kd == CNOT or a < b:
                            self._add(Gate(kd, (a, b)))

    def _add(self, g: Gate) -> None:
        self.index[g] = len(self.table)
        self.table.append(g)

    def _canon(self, R: np.ndarray) -> np.ndarray:
        out = np.empty_like(R)
        for i in range(0, len(R), self.chunk):
            out[i:i + self.chunk] = rref_batch(R[i:i + self.chunk], 2 * self.n)
        return out

    def expand(self, front: _Stage) -> list[_Stage]:
        if self.model.metric == DEPTH:
            return self._expand_layers(front)
        R = front.rows
        b = len(R)
        rows, parent, action = [], [], []
        for gi, g in enumerate(self.table):
            rows.append(rows_apply(R, self.n, g))
            parent.append(np.arange(b))
            action.append(np.full(b, gi))
        R2 = self._canon(np.concatenate(rows)) if rows else R[:0]
        return [_Stage(R2, np.concatenate(parent), np.concatenate(action))]

    def _expand_layers(self, front: _Stage) -> list[_Stage]:
        # one stage per qubit q: choose what acts on q together with higher wires
        n = self.n
        R = front.rows
        mask = np.zeros(len(R), dtype=np.int64)
        stages: list[_Stage] = []
        keys = _Keys(self.r, 2 * n, n)
        for q in range(n):
            busy = ((mask >> q) & 1).astype(bool)
            idx = np.arange(len(R))
            rows, parent, action, masks = [R], [idx], [np.full(len(R), -1)], [mask]
            open_ = idx[~busy]
            Ro, mo = R[open_], mask[open_]
            for kd in self.one:
                g = Gate(kd, (q,))
                rows.append(rows_apply(Ro, n, g))
                parent.append(open_)
                action.append(np.full(len(open_), self.index[g]))
                masks.append(mo)
            for j in range(q + 1, n):
                ok = ((mo >> j) & 1) == 0
                sel = open_[ok]
                for kd in self.two:
                    for g in ([Gate(kd, (q, j)), Gate(kd, (j, q))] if kd == CNOT else [Gate(kd, (q, j))]):
                        rows.append(rows_apply(Ro[ok], n, g))
                        parent.append(sel)
                        action.append(np.full(len(sel), self.index[g]))
                        masks.append(mo[ok] | (1 << j))
            R2 = self._canon(np.concatenate(rows))
            m2 = np.concatenate(masks) >> (q + 1)
            par = np.concatenate(parent)
            act = np.concatenate(action)
            if q < n - 1:
                first = _first_unique(keys.pack(R2, m2))
                R2, m2, par, act = R2[first], m2[first], par[first], act[first]
            stages.append(_Stage(R2, par, act))
            R, mask = R2, m2 << (q + 1)
        return stages


def synth_partial(
    target: PartialTarget,
    model: CostModel | None = None,
    max_states: int = 20_000_000,
    max_cost: int | None = None,
    bidirectional: bool = True,
    chunk: int = 1 << 18,
    stats: dict | None = None,
) -> Circuit:
    """Cheapest circuit whose designated rows span the target rows.

    Breadth-first search over row spaces, keyed by reduced row echelon form.
    With ``bidirectional`` the target side is searched too; every move is an
    involution, so a state met from both sides splices into a full circuit.
    Unit-cost metrics only (gate count or depth).
    """
    model = model or CostModel()
    if model.metric not in (GATES, DEPTH):
        raise ValueError("partial synthesis supports the gate-count and depth metrics")
    stats = stats if stats is not None else {}
    n, r = target.n, target.r
    ex = _Expander(n, r, model, chunk)
    fwd = _Side(target.start_rows(), n, r)
    sides = [fwd]
    if bidirectional:
        sides.append(_Side(target.rows, n, r))
    goal = fwd.keys.pack(rref_batch(np.array([sorted(target.rows)], dtype=np.uint64), 2 * n))

    def finish(lf: int, i_f: int, lb: int | None, i_b: int | None) -> Circuit:
        layers = fwd.path(lf, i_f, ex.table)
        if lb is not None:
            back = sides[1].path(lb, i_b, ex.table)
            layers += back[::-1]
        gates = tuple(g for layer in layers for g in layer)
        stats["cost"] = lf + (lb or 0)
        stats["states"] = sum(sd.size() for sd in sides)
        return Circuit(n, gates)

    if _isin_sorted(np.sort(goal), fwd.level_keys[0]).any():
        stats["cost"] = 0
        return Circuit(n, ())
    while True:
        explored = sum(len(sd.levels) - 1 for sd in sides)
        if max_cost is not None and explored >= max_cost:
            e = NotFound(f"cost exceeds {max_cost}")
            e.bound = max_cost + 1
            raise e
        if sum(sd.size() for sd in sides) > max_states:
            e = NotFound(f"state budget exhausted; cost exceeds {explored}")
            e.bound = explored + 1
            raise e
        side = min(sides, key=lambda sd: len(sd.level_keys[-1]))
        if all(len(sd.level_keys[-1]) == 0 for sd in sides):
            raise NotFound("target row space is unreachable with this gate set")
        if len(side.level_keys[-1]) == 0:
            side = next(sd for sd in sides if len(sd.level_keys[-1]))
        keys = side.push(ex.expand(side.frontier))
        lvl = len(side.levels) - 1
        if not bidirectional:
            hit = np.flatnonzero(keys == goal[0])
            if len(hit):
                return finish(lvl, int(hit[0]), None, None)
            continue
        other = sides[1] if side is fwd else fwd
        for lo, okeys in enumerate(other.level_keys):
            order = np.argsort(okeys, kind="stable")
            hit = _isin_sorted(okeys[order], keys)
            if hit.any():
                i = int(np.argmax(hit))
                j = int(order[np.searchsorted(okeys[order], keys[i])])
                if side is fwd:
                    return finish(lvl, i, lo, j)
                return finish(lo, j, lvl, i)


def gl_orbit_via_linear_db(rows: Sequence[int], db) -> set[tuple[int, ...]]:
    """Every left multiple A @ rows for A in GL(r, 2), enumerated from a linear database."""
    r = len(rows)
    if not db.linear or db.n != r:
        raise ValueError(f"need a linear database on {r} wires")
    if not db.complete:
        raise ValueError("linear database is incomplete")
    ks = db.space
    out: set[tuple[int, ...]] = set()
    for layer in db.layers:
        for key in ks.members(layer, db.mode).ravel().tolist():
            a = ks.decode(key)
            out.add(tuple(_xor_rows(rows, a.cols, i) for i in range(r)))
    return out


def _xor_rows(rows: Sequence[int], cols: Sequence[int], i: int) -> int:
    # row i of A @ rows, with A given by packed columns
    acc = 0
    for j, c in enumerate(cols):
        if (c >> i) & 1:
            acc ^= rows[j]
    return acc


# --- example codes -------------------------------------------------------------------

def random_code(n: int, k: int, seed=None) -> StabilizerGroup:
    """Z-images of the last n - k wires of a uniformly random Clifford."""
    from .sample import random_clifford

    rows = random_clifford(n, seed).rows()
    return StabilizerGroup(n, tuple(rows[n + q] for q in range(k, n)))


def rotated_surface_code(d: int) -> StabilizerGroup:
    """[[d*d, 1, d]] rotated surface code; X checks on the top and bottom edges."""
    n = d * d
    rows = []
    for i in range(-1, d):
        for j in range(-1, d):
            qs = [a * d + b for a in (i, i + 1) for b in (j, j + 1) if 0 <= a < d and 0 <= b < d]
            xtype = (i + j) % 2 == 0
            if len(qs) == 2:
                edge_tb = i in (-1, d - 1)
                if edge_tb != xtype:
                    continue
            elif len(qs) != 4:
                continue
            shift = 0 if xtype else n
            rows.append(sum(1 << (q + shift) for q in qs))
    return StabilizerGroup(n, tuple(rows))
