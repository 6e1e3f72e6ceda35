"""Optimal Clifford circuit synthesis via canonical-class databases."""

from .canonical import EXACT, INDEPENDENT, SIMULTANEOUS, EquivMode, canonicalize, group_order
from .circuit import Circuit, CostModel, Gate, cost, depth, emit_circuit, parse_circuit
from .database import LayerDatabase, build
from .peephole import PeepholeConfig, optimize
from .qecc import (
    PartialTarget,
    StabilizerGroup,
    encode_staged,
    encode_unstaged,
    parse_stabilizers,
    synth_partial,
    verify_encoder,
)
from .sample import estimate_distribution, random_clifford
from .synth import NotFound, mim_search, reconstruct, synthesize
from .tableau import Tableau, from_circuit, parse_tableau

__version__ = "0.1.0"

__all__ = [
    "EXACT", "SIMULTANEOUS", "INDEPENDENT", "EquivMode", "canonicalize", "group_order",
    "Circuit", "CostModel", "Gate", "cost", "depth", "emit_circuit", "parse_circuit",
    "LayerDatabase", "build", "PeepholeConfig", "optimize",
    "PartialTarget", "StabilizerGroup", "encode_staged", "encode_unstaged",
    "parse_stabilizers", "synth_partial", "verify_encoder",
    "estimate_distribution", "random_clifford",
    "NotFound", "mim_search", "reconstruct", "synthesize",
    "Tableau", "from_circuit", "parse_tableau",
]
