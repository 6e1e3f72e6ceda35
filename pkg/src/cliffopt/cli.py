"""Command-line interface.

Exit codes: 0 success, 1 unreadable or malformed input, 2 invalid flags,
3 database build stopped at the memory limit (partial file still written),
4 no circuit within the database or search budget, 5 verification failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from .canonical import EquivMode, canonicalize
from .circuit import (
    CNOT,
    DEPTH,
    GATES,
    MNEMONIC,
    WEIGHTED,
    CircuitError,
    CostModel,
    cost,
    depth,
    emit_circuit,
    parse_circuit,
)
from .database import DatabaseError, LayerDatabase, build
from .peephole import PeepholeConfig, optimize
from .qecc import (
    StabilizerError,
    StabilizerGroup,
    encode_staged,
    encode_unstaged,
    parse_stabilizers,
    synth_partial,
    verify_encoder,
)
from .sample import estimate_distribution
from .synth import NotFound, mim_search, reconstruct
from .tableau import TableauError, from_circuit, parse_tableau

EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_MEMORY = 3
EXIT_NOT_FOUND = 4
EXIT_VERIFY = 5

_KIND = {v.upper(): k for k, v in MNEMONIC.items()}
_KIND.update({k: k for k in MNEMONIC})


def _size(text: str) -> int:
    units = {"K": 1 << 10, "M": 1 << 20, "G": 1 << 30, "T": 1 << 40}
    t = text.strip().upper().rstrip("B")
    try:
        if t and t[-1] in units:
            return int(float(t[:-1]) * units[t[-1]])
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size {text!r}") from None


def _gate_list(text: str) -> tuple[str, ...]:
    out = []
    for tok in text.split(","):
        k = _KIND.get(tok.strip().upper())
        if k is None:
            raise argparse.ArgumentTypeError(f"unknown gate {tok!r}")
        out.append(k)
    return tuple(out)


def _weights(text: str) -> dict[str, int]:
    out = {}
    for item in text.split(","):
        name, _, val = item.partition("=")
        k = _KIND.get(name.strip().upper())
        if k is None or not val.strip().isdigit():
            raise argparse.ArgumentTypeError(f"bad weight {item!r}, expected GATE=INT")
        out[k] = int(val)
    return out


def _model(args, parser) -> CostModel:
    metric = args.metric
    try:
        if metric == "cz":
            if args.gates or args.weights:
                parser.error("--metric cz fixes the gate set and weights")
            return CostModel.cz_count()
        gates = args.gates or ((CNOT,) if getattr(args, "linear", False) else None)
        if metric == WEIGHTED:
            if not args.weights:
                parser.error("--metric weighted needs --weights")
            gs = gates or tuple(args.weights)
            return CostModel(WEIGHTED, gs, args.weights)
        if args.weights:
            parser.error("--weights only applies to --metric weighted")
        return CostModel(metric, gates) if gates else CostModel(metric)
    except ValueError as exc:
        parser.error(str(exc))


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_target(text: str):
    """A tableau file (header ``n <n>``) or a stabilizer list."""
    first = next((ln.split("#", 1)[0].strip() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), "")
    if first.startswith("n "):
        return parse_tableau(text)
    return parse_stabilizers(text)


# --- commands ---------------------------------------------------------------------

def cmd_build_db(args, parser) -> int:
    if args.qubits < 1:
        parser.error("--qubits must be positive")
    model = _model(args, parser)
    if args.linear and (model.metric != GATES or model.gate_set != (CNOT,)):
        parser.error("--linear databases use --metric gates with the CNOT gate set")
    t0 = time.perf_counter()

    def progress(k, size):
        if args.verbose:
            print(f"layer {k}: {size} classes ({time.perf_counter() - t0:.1f}s)", file=sys.stderr)

    db = build(
        args.qubits,
        args.mode,
        model,
        max_cost=args.max_cost,
        mem_limit=args.mem_limit,
        linear=args.linear,
        threads=args.threads,
        progress=progress,
    )
    if args.out:
        db.save(args.out)
    totals = db.orbit_totals()
    print(f"{'cost':>5} {'classes':>12} {'elements':>16}")
    for k, (c, t) in enumerate(zip(db.layer_sizes(), totals)):
        print(f"{k:>5} {c:>12} {t:>16}")
    print(f"{'total':>5} {len(db):>12} {sum(totals):>16}")
    print(f"group order {db.group_size()}, complete: {'yes' if db.complete else 'no'}")
    if db.stopped:
        print(f"stopped: {db.stopped}; partial database written", file=sys.stderr)
        return EXIT_MEMORY
    return 0


def cmd_synth(args, parser) -> int:
    target = _load_target(_read(args.target))
    if isinstance(target, StabilizerGroup):
        model = LayerDatabase.load(args.db).model if args.db else CostModel(args.metric)
        st: dict = {}
        c = synth_partial(target.target(), model, max_states=args.max_states, stats=st)
        ok = verify_encoder(c, target)
        _write(args.out, emit_circuit(c) + f"# cost {cost(c, model)} ({model.metric}), verified: {'yes' if ok else 'no'}\n")
        return 0 if ok else EXIT_VERIFY
    if not args.db:
        parser.error("a tableau target needs --db")
    db = LayerDatabase.load(args.db)
    if db.linear:
        parser.error("synth works on Clifford databases; this one is linear")
    st = {}
    c = mim_search(db, target, st) if args.mim else reconstruct(db, target)
    ok = from_circuit(c) == target
    out = c.with_swaps() if args.swaps else c
    _write(args.out, emit_circuit(out) + f"# cost {cost(c, db.model)} ({db.model.metric}), verified: {'yes' if ok else 'no'}\n")
    return 0 if ok else EXIT_VERIFY


def cmd_optimize(args, parser) -> int:
    circ = parse_circuit(_read(args.circuit))
    if circ.relabel is not None:
        circ = circ.with_swaps()
    db = LayerDatabase.load(args.db)
    if db.linear:
        parser.error("optimize needs a Clifford database")
    cfg = PeepholeConfig(
        max_qubits=args.max_qubits or db.n,
        window=args.window,
        model=db.model,
        max_passes=args.passes,
        mim=args.mim,
    )
    out, report = optimize(circ, db, cfg)
    if from_circuit(out) != from_circuit(circ):
        print("optimized circuit does not match the input", file=sys.stderr)
        return EXIT_VERIFY
    _write(args.out, emit_circuit(out))
    rep = report.as_json()
    if args.json:
        Path(args.json).write_text(json.dumps(rep, indent=2) + "\n")
    print(
        f"{'':>8} {'gates':>8} {'depth':>8}\n{'input':>8} {report.input_gates:>8} {report.input_depth:>8}\n"
        f"{'output':>8} {report.output_gates:>8} {report.output_depth:>8}\n"
        f"passes {len(report.passes)}, replacements {report.replacements}, {report.wall_time:.2f}s",
        file=sys.stderr,
    )
    return 0


def cmd_qecc(args, parser) -> int:
    sg = parse_stabilizers(_read(args.stabilizers))
    model = CostModel(args.metric)
    if args.algo == "staged":
        c = encode_staged(sg)
    elif args.algo == "unstaged":
        c = encode_unstaged(sg)
    else:
        c = synth_partial(sg.target(), model, max_states=args.max_states)
    ok = verify_encoder(c, sg)
    report = (
        f"# [[{sg.n},{sg.k}]] {args.algo} encoder: {len(c)} gates, depth {depth(c)}, "
        f"verified: {'yes' if ok else 'no'}\n"
    )
    _write(args.out, emit_circuit(c) + report)
    if args.out:
        sys.stderr.write(report[2:])
    return 0 if ok else EXIT_VERIFY


def cmd_sample(args, parser) -> int:
    if args.samples < 1:
        parser.error("--samples must be positive")
    if args.db:
        db = LayerDatabase.load(args.db)
        if db.linear or db.n != args.qubits:
            parser.error(f"--db must be a {args.qubits}-qubit Clifford database")
    else:
        if args.qubits > 3:
            parser.error("without --db only up to 3 qubits are built on the fly")
        db = build(args.qubits, args.mode, CostModel(args.metric))
    est = estimate_distribution(args.qubits, args.samples, db, seed=args.seed, alpha=args.alpha, mim=args.mim)
    if args.json:
        out = est.as_json()
        out["mode"] = db.mode.name.lower()
        out["qubits"] = args.qubits
        print(json.dumps(out, indent=2))
    else:
        print(f"{'cost':>5} {'proportion':>11}   (+/- {est.epsilon:.4f} at {est.confidence:.3f})")
        for k, p in est.proportions.items():
            print(f"{k:>5} {p:>11.5f}")
        if est.not_found:
            print(f"{'>max':>5} {est.not_found:>11.5f}")
    return 0


def cmd_verify(args, parser) -> int:
    circ = parse_circuit(_read(args.circuit))
    text = _read(args.target)
    first = next((ln.split("#", 1)[0].strip() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), "")
    if first.lower().startswith("qubits"):
        target = from_circuit(parse_circuit(text))
    else:
        target = _load_target(text)
    if isinstance(target, StabilizerGroup):
        ok = verify_encoder(circ, target)
    else:
        got = from_circuit(circ)
        if got.n != target.n:
            ok = False
        elif args.mode == "exact":
            ok = got == target
        else:
            ok = canonicalize(got, args.mode) == canonicalize(target, args.mode)
    print("equivalent" if ok else "NOT equivalent")
    return 0 if ok else EXIT_VERIFY


# --- parser -----------------------------------------------------------------------

def _add_model_flags(p, metrics=("gates", "depth", "cz", "weighted")):
    p.add_argument("--metric", choices=metrics, default="gates")
    p.add_argument("--gates", type=_gate_list, default=None, help="comma list, e.g. H,S,CX")
    p.add_argument("--weights", type=_weights, default=None, help="e.g. H=0,S=0,CX=1")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cliffopt", description="Optimal Clifford circuit synthesis")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    modes = [m.name.lower() for m in EquivMode]

    p = sub.add_parser("build-db", help="build a layer database")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--mode", choices=modes, default="simultaneous")
    _add_model_flags(p)
    p.add_argument("--linear", action="store_true", help="CNOT-only circuits (invertible matrices)")
    p.add_argument("--max-cost", type=int, default=None)
    p.add_argument("--mem-limit", type=_size, default=None, help="key storage cap, e.g. 2G")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_build_db)

    p = sub.add_parser("synth", help="optimal circuit for a tableau or stabilizer target")
    p.add_argument("--db", default=None)
    p.add_argument("--target", required=True)
    p.add_argument("--mim", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--metric", choices=(GATES, DEPTH), default=GATES, help="for stabilizer targets without --db")
    p.add_argument("--max-states", type=int, default=20_000_000)
    p.add_argument("--swaps", action="store_true", help="write a trailing relabeling as SWAP gates")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("optimize", help="peephole-optimize a circuit")
    p.add_argument("--db", required=True)
    p.add_argument("--circuit", required=True)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--max-qubits", type=int, default=None)
    p.add_argument("--passes", type=int, default=None)
    p.add_argument("--mim", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out", default=None)
    p.add_argument("--json", default=None, metavar="PATH", help="write the JSON report here")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("qecc", help="encoding circuit for a stabilizer code")
    p.add_argument("--stabilizers", required=True)
    p.add_argument("--algo", choices=("staged", "unstaged", "optimal"), default="optimal")
    p.add_argument("--metric", choices=(GATES, DEPTH), default=GATES)
    p.add_argument("--max-states", type=int, default=20_000_000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_qecc)

    p = sub.add_parser("sample", help="estimate the cost distribution of random Cliffords")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--db", default=None)
    p.add_argument("--mode", choices=modes, default="simultaneous")
    p.add_argument("--metric", choices=(GATES, DEPTH), default=GATES)
    p.add_argument("--alpha", type=float, default=0.001)
    p.add_argument("--mim", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="check a circuit against a target")
    p.add_argument("--circuit", required=True)
    p.add_argument("--target", required=True, help="tableau, circuit or stabilizer file")
    p.add_argument("--mode", choices=modes, default="exact")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    try:
        return args.func(args, sub)
    except NotFound as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except (OSError, CircuitError, TableauError, StabilizerError, DatabaseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
