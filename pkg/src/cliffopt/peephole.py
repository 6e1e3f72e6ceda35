"""Peephole optimization of Clifford circuits against optimal-circuit databases.

For each pivot gate we grow qubit sets around it, gather every later gate
on those qubits that can be commuted back next to the pivot, and replace
the gathered block by an optimal circuit when that is strictly cheaper.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping

from .canonical import SIMULTANEOUS
from .circuit import CNOT, CZ, DEPTH, GATES, H, P, PDAG, SWAP, Circuit, CostModel, Gate, cost, depth
from .database import LayerDatabase, build
from .synth import NotFound, mim_search, optimal_cost, reconstruct
from .tableau import from_circuit

_DIAGONAL = frozenset({P, PDAG, CZ})


def commutes(a: Gate, b: Gate) -> bool:
    """Static, conservative commutation table (every entry holds exactly)."""
    qa, qb = set(a.qubits), set(b.qubits)
    if not qa & qb or a == b:
        return True
    if a.kind in _DIAGONAL and b.kind in _DIAGONAL:
        return True
    if a.kind == CNOT and b.kind == CNOT:
        (ca, ta), (cb, tb) = a.qubits, b.qubits
        return (ca == cb and ta != tb) or (ta == tb and ca != cb)
    if a.kind == CNOT:
        a, b = b, a
        qa, qb = qb, qa
    if b.kind == CNOT and a.kind in _DIAGONAL:
        # diagonal gate touching only the control
        return qa & qb == {b.qubits[0]}
    return False


@dataclass(frozen=True)
class PeepholeConfig:
    max_qubits: int = 4
    window: int | None = None
    model: CostModel = field(default_factory=CostModel)
    max_passes: int | None = None
    branching: int = 2
    mim: bool = True


@dataclass(frozen=True)
class Subcircuit:
    indices: tuple[int, ...]
    qubits: tuple[int, ...]
    circuit: Circuit


def _gather(gates, pivot: int, qset: frozenset, window: int | None, stats: dict):
    """Indices that can join the pivot block on ``qset`` and the outside qubits blocking growth."""
    included = [pivot]
    skipped: dict[int, list[Gate]] = {q: [] for q in qset}
    # per qubit: can a Z-type (diagonal / CNOT control) or X-type (CNOT target)
    # gate still move past everything skipped on it
    zok = dict.fromkeys(qset, True)
    xok = dict.fromkeys(qset, True)
    frontier: list[int] = []
    end = len(gates) if window is None else min(len(gates), pivot + 1 + window)
    for i in range(pivot + 1, end):
        g = gates[i]
        touched = [q for q in g.qubits if q in qset]
        if not touched:
            continue
        stats["scanned"] = stats.get("scanned", 0) + 1
        if len(touched) == len(g.qubits) and all(commutes(g, s) for q in touched for s in skipped[q]):
            included.append(i)
            continue
        for q in touched:
            skipped[q].append(g)
            if g.kind in (H, SWAP):
                zok[q] = xok[q] = False
            elif g.kind == CNOT and q == g.qubits[1]:
                zok[q] = False
            else:
                xok[q] = False
        for q in g.qubits:
            if q not in qset and q not in frontier:
                frontier.append(q)
        if not any(zok[q] or xok[q] for q in qset):
            break
    return included, frontier


def gather_subcircuits(c: Circuit, pivot: int, cfg: PeepholeConfig | None = None, stats: dict | None = None) -> list[Subcircuit]:
    """Blocks containing ``pivot`` on at most ``cfg.max_qubits`` qubits.

    Qubit sets grow greedily from the pivot's qubits, following the first
    ``cfg.branching`` outside qubits that stop the gathering.
    """
    cfg = cfg or PeepholeConfig()
    stats = stats if stats is not None else {}
    gates = c.gates
    if not 0 <= pivot < len(gates):
        raise IndexError(pivot)
    start = frozenset(gates[pivot].qubits)
    if len(start) > cfg.max_qubits:
        return []
    seen = {start}
    todo = [start]
    out: list[Subcircuit] = []
    while todo:
        qset = todo.pop(0)
        idx, frontier = _gather(gates, pivot, qset, cfg.window, stats)
        qubits = tuple(sorted(qset))
        local = {q: i for i, q in enumerate(qubits)}
        sub = Circuit(len(qubits), tuple(gates[i].remap(local) for i in idx))
        out.append(Subcircuit(tuple(idx), qubits, sub))
        if len(qset) < cfg.max_qubits:
            for q in frontier[: cfg.branching]:
                nxt = qset | {q}
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
    return out


def database_family(db: LayerDatabase, max_qubits: int | None = None) -> dict[int, LayerDatabase]:
    """Databases for every width up to ``db.n``; narrower ones are built on the spot."""
    if db.mode != SIMULTANEOUS:
        raise ValueError("peephole replacement needs a simultaneous-renaming database")
    top = db.n if max_qubits is None else min(db.n, max_qubits)
    fam = {db.n: db}
    for k in range(1, top):
        if k not in fam:
            fam[k] = build(k, SIMULTANEOUS, db.model)
    return fam


@dataclass
class PeepholeReport:
    input_gates: int
    input_depth: int
    output_gates: int = 0
    output_depth: int = 0
    passes: list[dict] = field(default_factory=list)
    scanned_subcircuits: int = 0
    replacements: int = 0
    skipped_not_found: int = 0
    wall_time: float = 0.0

    def as_json(self) -> dict:
        return {
            "schema": "cliffopt.peephole/1",
            "input": {"gates": self.input_gates, "depth": self.input_depth},
            "output": {"gates": self.output_gates, "depth": self.output_depth},
            "passes": self.passes,
            "scanned_subcircuits": self.scanned_subcircuits,
            "replacements": self.replacements,
            "skipped_not_found": self.skipped_not_found,
            "wall_time": self.wall_time,
        }


class _CostOracle:
    def __init__(self, dbs: Mapping[int, LayerDatabase], mim: bool):
        self.dbs = dbs
        self.mim = mim
        self.cache: dict = {}

    def best(self, t, budget: int):
        """(optimal cost, circuit) if something cheaper than ``budget`` exists, else None."""
        key = (t, budget)
        if key in self.cache:
            return self.cache[key]
        db = self.dbs.get(t.n)
        res = None
        if db is not None:
            c = db.lookup(t)
            if c is not None:
                res = (c, reconstruct(db, t)) if c < budget else None
            elif self.mim and not db.complete and budget - 1 > db.max_cost:
                try:
                    st: dict = {}
                    circ = mim_search(db, t, st, max_cost=budget - 1)
                    res = (st["cost"], circ)
                except NotFound:
                    res = None
            else:
                res = "missing" if not db.complete and budget - 1 > db.max_cost else None
        self.cache[key] = res
        return res


def _depth_key(n, gates):
    return depth(Circuit(n, tuple(gates))), len(gates)


def optimize(c: Circuit, dbs, cfg: PeepholeConfig | None = None) -> tuple[Circuit, PeepholeReport]:
    """Repeated left-to-right sweeps until no block can be improved."""
    cfg = cfg or PeepholeConfig()
    if isinstance(dbs, LayerDatabase):
        dbs = database_family(dbs, cfg.max_qubits)
    for db in dbs.values():
        if db.mode != SIMULTANEOUS:
            raise ValueError("peephole replacement needs a simultaneous-renaming database")
        if db.model.metric != cfg.model.metric:
            raise ValueError("database metric differs from the optimization metric")
    if c.relabel is not None:
        raise ValueError("circuit carries a relabeling; expand it with with_swaps() first")
    oracle = _CostOracle(dbs, cfg.mim)
    report = PeepholeReport(len(c), depth(c))
    t0 = time.perf_counter()
    gates = list(c.gates)
    n = c.n
    sweeps = 0
    while cfg.max_passes is None or sweeps < cfg.max_passes:
        sweeps += 1
        stats: dict = {}
        improved = 0
        i = 0
        while i < len(gates):
            cur = Circuit(n, tuple(gates))
            best = None
            for sub in gather_subcircuits(cur, i, cfg, stats):
                report.scanned_subcircuits += 1
                old = cost(sub.circuit, cfg.model)
                if old == 0:
                    continue
                found = oracle.best(from_circuit(sub.circuit), old)
                if found == "missing":
                    report.skipped_not_found += 1
                    continue
                if found is None:
                    continue
                new_cost, repl = found
                gain = old - new_cost
                if gain > 0 and (best is None or gain > best[0]):
                    best = (gain, sub, repl)
            if best is None:
                i += 1
                continue
            _, sub, repl = best
            taken = set(sub.indices)
            replacement = [g.remap(sub.qubits) for g in repl.gates]
            cand = gates[:i] + replacement + [g for j, g in enumerate(gates) if j >= i and j not in taken]
            if cfg.model.metric == DEPTH:
                # depth is not additive over blocks; demand global progress so sweeps terminate
                if _depth_key(n, cand) >= _depth_key(n, gates):
                    i += 1
                    continue
            gates = cand
            improved += 1
            report.replacements += 1
        report.passes.append(
            {"pass": sweeps, "gates": len(gates), "depth": depth(Circuit(n, tuple(gates))),
             "scanned_gates": stats.get("scanned", 0), "replacements": improved}
        )
        if not improved:
            break
    out = Circuit(n, tuple(gates))
    report.output_gates = len(out)
    report.output_depth = depth(out)
    report.wall_time = time.perf_counter() - t0
    return out, report
