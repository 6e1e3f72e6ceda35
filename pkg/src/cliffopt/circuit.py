"""Circuit IR over the H / P / CNOT family, cost models and the text format.

Text format::

    # comment
    qubits 3
    H 0
    S 1
    CX 0 2
    relabel 1 0 2

``relabel`` is optional and must be the last statement; it records an output
relabeling (qubit ``i`` ends up on wire ``p[i]``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

H = "H"
P = "P"
PDAG = "PDAG"
CNOT = "CNOT"
CZ = "CZ"
SWAP = "SWAP"

GATE_KINDS = (H, P, PDAG, CNOT, CZ, SWAP)
ONE_QUBIT = frozenset({H, P, PDAG})
TWO_QUBIT = frozenset({CNOT, CZ, SWAP})

# kind -> mnemonic used in the text format
MNEMONIC = {H: "H", P: "S", PDAG: "Sdg", CNOT: "CX", CZ: "CZ", SWAP: "SWAP"}
_FROM_MNEMONIC = {v.upper(): k for k, v in MNEMONIC.items()}
# a few common aliases accepted on input only
_FROM_MNEMONIC.update({"P": P, "PDAG": PDAG, "SDAG": PDAG, "CNOT": CNOT})

# fixed ordering used for deterministic tie-breaking
GATE_ORDER = {H: 0, P: 1, PDAG: 2, CNOT: 3, CZ: 4, SWAP: 5}


class CircuitError(ValueError):
    pass


class CircuitParseError(CircuitError):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message}, line {line}")
        self.line = line


@dataclass(frozen=True, order=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        arity = 1 if self.kind in ONE_QUBIT else 2
        if len(self.qubits) != arity:
            raise CircuitError(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitError(f"{self.kind} needs two distinct qubits, got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {self.qubits}")

    def sort_key(self) -> tuple:
        return (GATE_ORDER[self.kind], self.qubits)

    def remap(self, mapping: Sequence[int] | Mapping[int, int]) -> "Gate":
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits))

    def __str__(self) -> str:
        return " ".join([MNEMONIC[self.kind], *map(str, self.qubits)])


def h(q: int) -> Gate:
    return Gate(H, (q,))


def s(q: int) -> Gate:
    return Gate(P, (q,))


def sdg(q: int) -> Gate:
    return Gate(PDAG, (q,))


def cx(c: int, t: int) -> Gate:
    return Gate(CNOT, (c, t))


def cz(a: int, b: int) -> Gate:
    return Gate(CZ, (a, b))


def swap(a: int, b: int) -> Gate:
    return Gate(SWAP, (a, b))


def _check_perm(p: Sequence[int], n: int) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if sorted(p) != list(range(n)):
        raise CircuitError(f"relabeling {p} is not a permutation of 0..{n - 1}")
    return p


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()
    relabel: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise CircuitError("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.n:
                raise CircuitError(f"gate {g} acts outside {self.n} qubits")
        if self.relabel is not None:
            p = _check_perm(self.relabel, self.n)
            object.__setattr__(self, "relabel", None if p == tuple(range(self.n)) else p)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def inverse(self) -> "Circuit":
        """Reverse circuit; every gate here is self-inverse on the tableau."""
        gates = self.gates[::-1]
        if self.relabel is None:
            return Circuit(self.n, gates)
        # G;R inverted is R^-1;G^-1, i.e. G^-1 moved through R^-1, then R^-1
        inv = [0] * self.n
        for i, p in enumerate(self.relabel):
            inv[p] = i
        return Circuit(self.n, tuple(g.remap(self.relabel) for g in gates), tuple(inv))

    def then(self, other: "Circuit") -> "Circuit":
        """Sequential composition ``self`` followed by ``other``.

        A trailing relabeling of ``self`` is pushed through ``other``.
        """
        if other.n != self.n:
            raise CircuitError("qubit count mismatch")
        if self.relabel is None:
            return Circuit(self.n, self.gates + other.gates, other.relabel)
        r = self.relabel
        inv = [0] * self.n
        for i, p in enumerate(r):
            inv[p] = i
        # R;G == G';R where G' acts on r^-1(q) wherever G acts on q
        moved = tuple(g.remap(inv) for g in other.gates)
        if other.relabel is None:
            rel = r
        else:
            rel = tuple(other.relabel[r[i]] for i in range(self.n))
        return Circuit(self.n, self.gates + moved, rel)

    def remap(self, mapping: Sequence[int], n: int | None = None) -> "Circuit":
        """Rename qubit ``q`` to ``mapping[q]`` on a register of ``n`` qubits."""
        n = self.n if n is None else n
        if self.relabel is not None:
            raise CircuitError("cannot remap a circuit carrying a relabeling")
        return Circuit(n, tuple(g.remap(mapping) for g in self.gates))

    def with_swaps(self) -> "Circuit":
        """Replace the relabeling annotation by explicit SWAP gates."""
        if self.relabel is None:
            return self
        gates = list(self.gates)
        cur = list(range(self.n))  # cur[w] = logical qubit currently on wire w
        where = list(range(self.n))
        for q in range(self.n):
            target = self.relabel[q]
            w = where[q]
            if w != target:
                other = cur[target]
                gates.append(swap(w, target))
                cur[w], cur[target] = other, q
                where[other], where[q] = w, target
        return Circuit(self.n, tuple(gates))

    @property
    def qubits_used(self) -> set[int]:
        return {q for g in self.gates for q in g.qubits}


# --- cost ------------------------------------------------------------------

GATES = "gates"
DEPTH = "depth"
WEIGHTED = "weighted"

DEFAULT_GATE_SET = (H, P, CNOT)


@dataclass(frozen=True)
class CostModel:
    metric: str = GATES
    gate_set: tuple[str, ...] = DEFAULT_GATE_SET
    weights: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.metric not in (GATES, DEPTH, WEIGHTED):
            raise ValueError(f"unknown metric {self.metric!r}")
        gs = tuple(k for k in GATE_KINDS if k in set(self.gate_set))
        if not gs or len(gs) != len(set(self.gate_set)):
            raise ValueError(f"bad gate set {self.gate_set!r}")
        object.__setattr__(self, "gate_set", gs)
        w = dict(self.weights)
        if self.metric == WEIGHTED:
            if any(v < 0 for v in w.values()):
                raise ValueError("weights must be non-negative")
            if not any(w.get(k, 0) > 0 for k in gs):
                raise ValueError("weighted metric needs a positive weight in the gate set")
            missing = [k for k in gs if k not in w]
            if missing:
                raise ValueError(f"no weight for {missing}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def gate_count(cls, gate_set: Iterable[str] = DEFAULT_GATE_SET) -> "CostModel":
        return cls(GATES, tuple(gate_set))

    @classmethod
    def depth(cls, gate_set: Iterable[str] = DEFAULT_GATE_SET) -> "CostModel":
        return cls(DEPTH, tuple(gate_set))

    @classmethod
    def cz_count(cls) -> "CostModel":
        """Count controlled-Z gates only; single-qubit gates are free."""
        return cls(WEIGHTED, (H, P, PDAG, CZ), {H: 0, P: 0, PDAG: 0, CZ: 1})

    def weight(self, kind: str) -> int:
        if self.metric == WEIGHTED:
            try:
                return self.weights[kind]
            except KeyError:
                raise CircuitError(f"gate kind {kind} has no weight") from None
        return 1


def depth(c: Circuit) -> int:
    """ASAP depth: gates sharing a qubit occupy distinct time steps."""
    front = [0] * c.n
    for g in c.gates:
        t = max(front[q] for q in g.qubits) + 1
        for q in g.qubits:
            front[q] = t
    return max(front, default=0)


def cost(c: Circuit, model: CostModel | None = None) -> int:
    model = model or CostModel()
    if model.metric == DEPTH:
        return depth(c)
    if model.metric == WEIGHTED:
        return sum(model.weight(g.kind) for g in c.gates)
    return len(c.gates)


# --- text format -----------------------------------------------------------

def parse_circuit(text: str | bytes) -> Circuit:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = None
    gates: list[Gate] = []
    relabel = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if n is None:
            if tok[0].lower() != "qubits" or len(tok) != 2:
                raise CircuitParseError("malformed header, expected 'qubits <n>'", lineno)
            try:
                n = int(tok[1])
            except ValueError:
                raise CircuitParseError("malformed header, expected 'qubits <n>'", lineno) from None
            if n < 1:
                raise CircuitParseError("malformed header, qubit count must be positive", lineno)
            continue
        if relabel is not None:
            raise CircuitParseError("relabel must be the last statement", lineno)
        if tok[0].lower() == "relabel":
            try:
                relabel = _check_perm([int(x) for x in tok[1:]], n)
            except (ValueError, CircuitError):
                raise CircuitParseError("relabel is not a permutation", lineno) from None
            continue
        kind = _FROM_MNEMONIC.get(tok[0].upper())
        if kind is None:
            raise CircuitParseError(f"unknown mnemonic {tok[0]!r}", lineno)
        arity = 1 if kind in ONE_QUBIT else 2
        if len(tok) != arity + 1:
            raise CircuitParseError(f"{tok[0]} takes {arity} qubit index(es)", lineno)
        try:
            qs = tuple(int(x) for x in tok[1:])
        except ValueError:
            raise CircuitParseError("qubit index is not an integer", lineno) from None
        if any(q < 0 or q >= n for q in qs):
            raise CircuitParseError("index out of range", lineno)
        if arity == 2 and qs[0] == qs[1]:
            raise CircuitParseError("duplicate indices on a two-qubit gate", lineno)
        gates.append(Gate(kind, qs))
    if n is None:
        raise CircuitParseError("malformed header, missing 'qubits <n>'", 1)
    return Circuit(n, tuple(gates), relabel)


def emit_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n}"]
    lines.extend(str(g) for g in c.gates)
    if c.relabel is not None:
        lines.append("relabel " + " ".join(map(str, c.relabel)))
    return "\n".join(lines) + "\n"
