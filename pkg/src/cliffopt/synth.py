"""Optimal circuits from a layer database, directly or by meet in the middle."""

from __future__ import annotations

from collections import deque

import numpy as np

from .canonical import EXACT, INDEPENDENT
from .circuit import Circuit, Gate
from .database import DatabaseError, LayerDatabase, Move, _members
from .tableau import (
    LinearMatrix,
    Tableau,
    apply_gate,
    linear_apply_cnot,
    linear_identity,
    identity,
)

MIM_CHUNK = 1 << 15


class NotFound(LookupError):
    pass


def _apply(obj, gates):
    if isinstance(obj, LinearMatrix):
        for g in gates:
            obj = linear_apply_cnot(obj, *g.qubits)
        return obj
    for g in gates:
        obj = apply_gate(obj, g)
    return obj


def _identity_like(obj):
    return linear_identity(obj.n) if isinstance(obj, LinearMatrix) else identity(obj.n)


def _permutation(obj) -> tuple[int, ...] | None:
    n = obj.n
    cols = obj.cols
    perm = [None] * n
    for p in range(n):
        c = cols[p]
        if c == 0 or c & (c - 1) or c >= (1 << n):
            return None
        perm[c.bit_length() - 1] = p
        if not isinstance(obj, LinearMatrix) and cols[n + p] != c << n:
            return None
    if None in perm:
        return None
    return tuple(perm)


def _ordered_moves(db: LayerDatabase) -> list[Move]:
    return sorted(db.moves, key=lambda m: [g.sort_key() for g in m.gates])


class _Searcher:
    def __init__(self, db: LayerDatabase):
        self.db = db
        self.ks = db.space
        moves = _ordered_moves(db)
        self.positive = [m for m in moves if m.weight > 0]
        self.zero = [m for m in moves if m.weight == 0]

    def costs(self, objs) -> np.ndarray:
        return self.db.lookup_keys(self.ks.array([self.ks.encode(o) for o in objs]))

    def _is_terminal(self, obj) -> tuple[int, ...] | None:
        if obj == _identity_like(obj):
            return tuple(range(obj.n))
        if self.db.mode == INDEPENDENT:
            return _permutation(obj)
        return None

    def _zero_closure(self, start):
        """Breadth-first walk of the free-move orbit of ``start`` with paths."""
        seen = {start: ()}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            yield cur, seen[cur]
            for m in self.zero:
                nxt = _apply(cur, m.gates)
                if nxt not in seen:
                    seen[nxt] = seen[cur] + (m,)
                    queue.append(nxt)

    def step(self, cur, cost: int):
        """Moves leading from ``cur`` to a strictly cheaper class, plus the result."""
        for base, path in (self._zero_closure(cur) if self.zero else [(cur, ())]):
            kids = [_apply(base, m.gates) for m in self.positive]
            if not kids:
                break
            kc = self.costs(kids)
            for m, kid, c in zip(self.positive, kids, kc):
                if c >= 0 and c == cost - m.weight:
                    return path + (m,), kid
        raise DatabaseError("no move lowers the cost; database is inconsistent")

    def finish(self, cur):
        for base, path in (self._zero_closure(cur) if self.zero else [(cur, ())]):
            perm = self._is_terminal(base)
            if perm is not None:
                return path, perm
        raise DatabaseError("cost-0 element is not in the identity class")


def reconstruct(db: LayerDatabase, t) -> Circuit:
    """Optimal circuit C with from_circuit(C) == t exactly.

    In independent mode the trailing wire permutation is returned as the
    circuit's ``relabel`` annotation (see :meth:`Circuit.with_swaps`).
    """
    s = _Searcher(db)
    cost = db.lookup(t)
    if cost is None:
        raise NotFound(f"cost exceeds database depth {db.max_cost}")
    cur = t
    used: list[Move] = []
    while cost > 0:
        path, cur = s.step(cur, cost)
        used.extend(path)
        cost -= sum(m.weight for m in path)
    path, perm = s.finish(cur)
    used.extend(path)
    # t * m1 * ... * mk = R, and every move is an involution: t = R * mk ... m1
    gates = tuple(g for m in reversed(used) for g in m.gates)
    lead = Circuit(t.n, (), perm)
    return lead.then(Circuit(t.n, gates))


def _unit_steps(db: LayerDatabase) -> bool:
    return all(m.weight <= 1 for m in db.moves)


def mim_search(db: LayerDatabase, t, stats: dict | None = None, max_cost: int | None = None) -> Circuit:
    """Optimal circuit for ``t`` with cost up to twice the database depth.

    Every optimal circuit of cost T splits into a prefix of cost T - d and a
    suffix of cost d for any d the cost function passes through.  Totals
    are tried in ascending order, so the first hit is optimal.  ``max_cost``
    caps the totals tried.
    """
    stats = stats if stats is not None else {}
    stats.setdefault("visited", 0)
    direct = db.lookup(t)
    if direct is not None:
        stats["cost"] = direct
        return reconstruct(db, t)
    c = db.max_cost
    ks = db.space
    side = "left" if db.mode == INDEPENDENT else "both"
    unit = _unit_steps(db)
    top = 2 * c if max_cost is None else min(2 * c, max_cost)
    for tally in range(c + 1, top + 1):
        lo = max(0, tally - c)
        splits = [lo] if unit else range(lo, min(c, tally) + 1)
        for d in splits:
            target = db.layers[tally - d]
            layer = db.layers[d]
            for start in range(0, len(layer), MIM_CHUNK):
                mem = ks.members(layer[start:start + MIM_CHUNK], db.mode, side).ravel()
                prod = ks.left_multiply(t, mem)
                hit = _members(target, db.canonical(prod))
                stats["visited"] += len(mem)
                if hit.any():
                    i = int(np.argmax(hit))
                    g = ks.decode(mem[i])
                    a = ks.decode(prod[i])
                    stats["cost"] = tally
                    # t = a * g^-1
                    return reconstruct(db, a).then(reconstruct(db, g).inverse())
    raise NotFound(f"cost exceeds {top}")


def optimal_cost(db: LayerDatabase, t, mim: bool = True, max_cost: int | None = None) -> int | None:
    """Optimal cost, or None when it exceeds what the database (and MiM) can certify."""
    c = db.lookup(t)
    if c is not None or not mim or db.complete:
        return c
    stats: dict = {}
    try:
        mim_search(db, t, stats, max_cost)
    except NotFound:
        return None
    return stats["cost"]


def synthesize(db: LayerDatabase, t, mim: bool = True) -> Circuit:
    if mim:
        return mim_search(db, t)
    return reconstruct(db, t)
