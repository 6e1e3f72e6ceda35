import itertools
import warnings

import numpy as np
import pytest

from cliffopt.circuit import CNOT, H, P, Circuit, CostModel, cost, cx, depth, h, s
from cliffopt.qecc import (
    PartialTarget,
    StabilizerError,
    StabilizerGroup,
    designated_rows,
    encode_staged,
    encode_unstaged,
    gl_orbit_via_linear_db,
    parse_stabilizers,
    random_code,
    rank,
    rotated_surface_code,
    rows_apply,
    rref,
    rref_batch,
    synth_partial,
    verify_encoder,
)
from cliffopt.synth import NotFound
from cliffopt.tableau import apply_gate_row, symplectic_form

from conftest import all_gates, db_cached

FIVE = "XZZXI\nIXZZX\nXIXZZ\nZXIXZ\n"


def five():
    return parse_stabilizers(FIVE)


def test_parse_five_qubit_code():
    sg = five()
    assert (sg.n, sg.r, sg.k) == (5, 4, 1)
    assert str(sg).split() == FIVE.split()
    for u, v in itertools.combinations(sg.generators, 2):
        assert symplectic_form(u, v, 5) == 0


def test_parse_bell_and_bits():
    sg = parse_stabilizers("XX\nZZ")
    assert sg.generators == (0b0011, 0b1100)
    assert parse_stabilizers("Y").generators == (0b11,)


@pytest.mark.parametrize(
    "text, word",
    [("XI\nZI", "anticommuting rows"), ("XX\nXX", "dependent rows"), ("XX\nZZZ", "unequal lengths")],
)
def test_parse_errors(text, word):
    with pytest.raises(StabilizerError, match=word):
        parse_stabilizers(text)


def test_parse_rejects_junk_and_warns_on_signs():
    with pytest.raises(StabilizerError):
        parse_stabilizers("XQ")
    with pytest.raises(StabilizerError):
        parse_stabilizers("# nothing\n")
    with pytest.warns(UserWarning):
        sg = parse_stabilizers("-XX\n+ZZ")
    assert sg.generators == (0b0011, 0b1100)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        parse_stabilizers("XX\nZZ")


def test_rref_examples():
    assert rref([0b11, 0b01]) == (0b10, 0b01)
    assert rref([0b110, 0b011, 0b101]) == (0b101, 0b011)
    assert rank([0, 0]) == 0


def test_zz_staged_encoder():
    sg = parse_stabilizers("ZZ")
    c = encode_staged(sg)
    assert [g.kind for g in c.gates] == [CNOT]
    assert designated_rows(c, 1) == [0b1100]
    assert verify_encoder(c, sg)


@pytest.mark.parametrize("encode", [encode_staged, encode_unstaged, lambda sg: encode_unstaged(sg, restore=False)])
@pytest.mark.parametrize("text", ["ZZ", "XX\nZZ", FIVE])
def test_encoders_on_examples(encode, text):
    sg = parse_stabilizers(text)
    assert verify_encoder(encode(sg), sg)


def test_bell_encoder_rows():
    sg = parse_stabilizers("XX\nZZ")
    c = encode_staged(sg)
    assert rref(designated_rows(c, 2)) == rref([0b0011, 0b1100])


def _stage_runs(c):
    # fold H(b) CX(a,b) H(b) back into one CZ, then count runs of equal kinds
    gs, kinds, i = c.gates, [], 0
    while i < len(gs):
        g = gs[i]
        if (g.kind == H and i + 2 < len(gs) and gs[i + 1].kind == CNOT
                and gs[i + 1].qubits[1] == g.qubits[0] and gs[i + 2] == g):
            kinds.append("CZ")
            i += 3
        else:
            kinds.append(g.kind)
            i += 1
    return [k for j, k in enumerate(kinds) if j == 0 or kinds[j - 1] != k]


def test_staged_encoder_is_grouped_into_stages():
    # CNOT | H | P | outer CZ block as H CNOT H | CZ | CNOT
    for seed in range(20):
        sg = random_code(8, seed % 4, seed)
        assert len(_stage_runs(encode_staged(sg))) <= 8


def test_encoders_on_random_codes():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(0, n))
        sg = random_code(n, k, rng)
        for c in (encode_staged(sg), encode_unstaged(sg), encode_unstaged(sg, restore=False)):
            assert verify_encoder(c, sg)


def test_unstaged_and_staged_differ_on_large_codes():
    sg = random_code(26, 2, 5)
    a, b = encode_staged(sg), encode_unstaged(sg)
    assert verify_encoder(a, sg) and verify_encoder(b, sg)
    assert len(a) != len(b)


def test_verify_encoder_examples():
    assert verify_encoder(Circuit(2), StabilizerGroup(2, (0b1000,)))
    assert not verify_encoder(Circuit(2, (h(1),)), StabilizerGroup(2, (0b1000,)))
    assert not verify_encoder(Circuit(3), StabilizerGroup(2, (0b1000,)))


def test_surface_code():
    for d in (2, 3, 5):
        sg = rotated_surface_code(d)
        assert sg.n == d * d and sg.k == 1
    assert verify_encoder(encode_unstaged(rotated_surface_code(5)), rotated_surface_code(5))


def test_partial_target_validation():
    with pytest.raises(StabilizerError):
        PartialTarget(2, (0b0001, 0b0100))
    with pytest.raises(StabilizerError):
        PartialTarget(2, (0b1100,), slots=(0, 2))
    t = PartialTarget(3, (0b100000,))
    assert t.slots == (5,) and t.start_rows() == (0b100000,)
    assert t.matched_by(Circuit(3))


def test_synth_trivial_and_zz():
    assert len(synth_partial(PartialTarget(3, (1 << 5,)))) == 0
    st = {}
    c = synth_partial(parse_stabilizers("ZZ").target(), stats=st)
    assert len(c) == 1 and c.gates[0].kind == CNOT and st["cost"] == 1
    assert designated_rows(c, 1) == [0b1100]


def test_five_qubit_gate_optimal():
    sg = five()
    st = {}
    c = synth_partial(sg.target(), stats=st)
    assert verify_encoder(c, sg)
    assert len(c) <= 11 and st["cost"] == len(c)
    assert len(c) <= min(len(encode_staged(sg)), len(encode_unstaged(sg)))


def test_five_qubit_depth_optimal():
    sg = five()
    c = synth_partial(sg.target(), CostModel.depth())
    assert verify_encoder(c, sg)
    assert depth(c) <= 5
    assert depth(c) <= min(depth(encode_staged(sg)), depth(encode_unstaged(sg)))


def test_unsupported_metric_and_budget():
    with pytest.raises(ValueError):
        synth_partial(five().target(), CostModel.cz_count())
    with pytest.raises(NotFound) as e:
        synth_partial(five().target(), max_cost=3)
    assert e.value.bound == 4
    with pytest.raises(NotFound) as e:
        synth_partial(five().target(), max_states=1000)
    assert e.value.bound >= 1


def _random_invertible(r, rng):
    while True:
        a = rng.integers(0, 2, size=(r, r))
        rows = [int("".join(map(str, row)), 2) for row in a]
        if rank(rows) == r:
            return a


def test_row_space_invariance():
    rng = np.random.default_rng(3)
    for seed in range(6):
        sg = random_code(4, 1 + seed % 2, seed)
        base = len(synth_partial(sg.target()))
        a = _random_invertible(sg.r, rng)
        mixed = []
        for row in a:
            acc = 0
            for bit, u in zip(row, sg.generators):
                if bit:
                    acc ^= u
            mixed.append(acc)
        c = synth_partial(PartialTarget(4, tuple(mixed)))
        assert len(c) == base
        assert verify_encoder(c, sg)


def test_bidirectional_matches_unidirectional():
    for seed in range(8):
        sg = random_code(4, seed % 3, 40 + seed)
        for model in (CostModel(), CostModel.depth()):
            a = synth_partial(sg.target(), model)
            b = synth_partial(sg.target(), model, bidirectional=False)
            assert cost(a, model) == cost(b, model)
            assert verify_encoder(a, sg) and verify_encoder(b, sg)


def test_synth_cost_matches_brute_force_bfs():
    """Cost agrees with a plain BFS over explicit row-space sets."""
    n = 3
    gates = [g for g in all_gates(n, (H, P, CNOT))]
    for seed in range(10):
        sg = random_code(n, seed % 3, seed)
        start = frozenset(_span([1 << (n + q) for q in range(sg.k, n)]))
        goal = frozenset(_span(sg.generators))
        dist = {start: 0}
        front = [start]
        while goal not in dist:
            nxt = []
            for st in front:
                for g in gates:
                    u = frozenset(apply_gate_row(v, n, g) for v in st)
                    if u not in dist:
                        dist[u] = dist[st] + 1
                        nxt.append(u)
            front = nxt
        assert len(synth_partial(sg.target())) == dist[goal]


def _span(rows):
    out = {0}
    for u in rows:
        out |= {v ^ u for v in out}
    return out


def _level_sizes(n, r, key):
    gates = all_gates(n, (H, P, CNOT))
    start = tuple(1 << (n + q) for q in range(n - r, n))
    seen = {key(start)}
    front = [start]
    sizes = [1]
    while front:
        nxt = []
        for rows in front:
            for g in gates:
                u = tuple(apply_gate_row(v, n, g) for v in rows)
                k = key(u)
                if k not in seen:
                    seen.add(k)
                    nxt.append(u)
        if nxt:
            sizes.append(len(nxt))
        front = nxt
    return sizes


def _isotropic_count(n, k):
    num, den = 1, 1
    for i in range(k):
        num *= 4 ** (n - i) - 1
        den *= 2 ** (i + 1) - 1
    return num // den


@pytest.mark.parametrize("r", [1, 2, 3])
def test_rref_dedup_equals_gl_orbit_dedup(r):
    n = 3
    lin = db_cached(r, linear=True)
    by_rref = _level_sizes(n, r, rref)
    by_orbit = _level_sizes(n, r, lambda rows: frozenset(gl_orbit_via_linear_db(rows, lin)))
    assert by_rref == by_orbit
    assert sum(by_rref) == _isotropic_count(n, r)


def test_rref_batch_matches_scalar():
    rng = np.random.default_rng(8)
    for nbits in (6, 10, 20, 64):
        R = rng.integers(0, 1 << min(nbits, 62), size=(200, 4), dtype=np.uint64)
        if nbits == 64:
            R |= rng.integers(0, 2, size=R.shape, dtype=np.uint64) << np.uint64(63)
        out = rref_batch(R, nbits)
        for row, got in zip(R.tolist(), out.tolist()):
            want = list(rref(row))
            assert got == want + [0] * (4 - len(want))


def test_rows_apply_matches_scalar_rule():
    rng = np.random.default_rng(9)
    n = 5
    R = rng.integers(0, 1 << (2 * n), size=50, dtype=np.uint64)
    for g in all_gates(n):
        got = rows_apply(R, n, g).tolist()
        assert got == [apply_gate_row(int(u), n, g) for u in R.tolist()]


def test_gl_orbit_sizes():
    assert gl_orbit_via_linear_db((0b1000,), db_cached(1, linear=True)) == {(0b1000,)}
    orb = gl_orbit_via_linear_db((0b0011, 0b1100), db_cached(2, linear=True))
    assert len(orb) == 6
    assert {rref(m) for m in orb} == {rref((0b0011, 0b1100))}
    sg = five()
    orb = gl_orbit_via_linear_db(sg.generators, db_cached(4, linear=True))
    assert len(orb) == 20160
    assert len({rref(m) for m in orb}) == 1
    with pytest.raises(ValueError):
        gl_orbit_via_linear_db(sg.generators, db_cached(3, linear=True))
