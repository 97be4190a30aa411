"""Gates, circuits, simulation, cost model, and the REAL file dialect."""

import random

import pytest

from conftest import random_permutation
from revflow.embedding import Permutation, optimum_embed
from revflow.logicnet import ParseError, TruthTable
from revflow.revcirc import (
    DEFAULT_COST_MODEL,
    CostModel,
    MctGate,
    RevCircuit,
    cnot,
    cost_report,
    read_real,
    simulate,
    simulate_full,
    simulate_source_batch,
    toffoli,
    verify_circuit,
    write_real,
)
from revflow.synth_functional import tbs


def test_gate_validation():
    with pytest.raises(ValueError):
        MctGate(0, frozenset({0}))                      # target as control
    with pytest.raises(ValueError):
        MctGate(2, frozenset({1}), frozenset({1}))      # both polarities
    with pytest.raises(ValueError):
        MctGate(-1)


def test_gate_apply_and_self_inverse():
    g = MctGate(2, frozenset({0}), frozenset({1}))
    assert g.apply(0b001) == 0b101
    assert g.apply(0b011) == 0b011              # negative control blocks
    rng = random.Random(2)
    for _ in range(40):
        width = rng.randrange(2, 8)
        lines = list(range(width))
        rng.shuffle(lines)
        t = lines[0]
        n_ctl = rng.randrange(0, width - 1)
        pos = frozenset(lines[1 : 1 + n_ctl // 2 + 1]) - {t}
        neg = frozenset(lines[1 + len(pos) : 1 + n_ctl]) - pos - {t}
        g = MctGate(t, pos, neg)
        w = rng.randrange(1 << width)
        assert g.apply(g.apply(w)) == w


def test_circuit_metadata_validation():
    g = (cnot(0, 1),)
    with pytest.raises(ValueError):
        RevCircuit(2, g, ("a", "a"), (None, None), (0, 1))       # dup names
    with pytest.raises(ValueError):
        RevCircuit(2, g, ("a", "b"), (None, 2), (0, 1))          # bad constant
    with pytest.raises(ValueError):
        RevCircuit(2, g, ("a", "b"), (None, None), (1, 0))       # outputs out of order
    with pytest.raises(ValueError):
        RevCircuit(1, g, ("a",), (None,), (0,))                  # gate off the end


def test_simulate_agrees_with_full():
    rng = random.Random(13)
    for _ in range(10):
        width = rng.randrange(1, 7)
        gates = []
        for _ in range(rng.randrange(1, 12)):
            t = rng.randrange(width)
            others = [l for l in range(width) if l != t]
            rng.shuffle(others)
            k = rng.randrange(0, len(others) + 1)
            pos = frozenset(others[: k // 2])
            neg = frozenset(others[k // 2 : k])
            gates.append(MctGate(t, pos, neg))
        circ = RevCircuit.generic(width, gates)
        perm = simulate_full(circ)
        for w in range(1 << width):
            assert simulate(circ, w) == perm.images[w]


def test_simulate_full_is_bijective_by_construction():
    rng = random.Random(31)
    perm = Permutation(5, random_permutation(rng, 5))
    circ = tbs(perm)
    # Permutation's constructor would reject a non-bijective image list
    assert isinstance(simulate_full(circ), Permutation)


def test_simulate_full_width_guard():
    circ = RevCircuit.generic(30, [])
    with pytest.raises(ValueError):
        simulate_full(circ)


def test_verify_circuit_positive_and_negative():
    tt = TruthTable(2, 2, (1, 3, 0, 2))
    perm, emb = optimum_embed(tt)
    circ = tbs(perm, embedding=emb)
    assert verify_circuit(circ, tt)
    broken = RevCircuit(
        circ.width,
        circ.gates + (MctGate(circ.output_line(0)),),
        circ.line_names,
        circ.constants,
        circ.outputs,
    )
    assert not verify_circuit(broken, tt)


def test_source_batch_drives_constants():
    # one constant-1 line copied onto an output
    circ = RevCircuit(
        2,
        (cnot(1, 0),),
        ("y", "c"),
        (0, 1),
        (0, None),
    )
    planes = simulate_source_batch(circ)
    assert planes[0] == 1  # batch of one assignment, line holds 1


def test_default_cost_model_schedule():
    t = DEFAULT_COST_MODEL.t_of_controls
    assert t(0) == 0
    assert t(1) == 0
    assert t(2) == 7
    assert t(3) == 15
    assert t(4) == 23
    assert t(7) == 47


def test_cost_model_overrides_and_validation():
    m = CostModel.parse("2: 4\n3: 20\n# comment\n")
    assert m.t_of_controls(2) == 4
    assert m.t_of_controls(3) == 20
    assert m.t_of_controls(4) == 23
    with pytest.raises(ParseError):
        CostModel.parse("2 4\n")
    with pytest.raises(ParseError):
        CostModel.parse("2: -1\n")
    with pytest.raises(ParseError):
        CostModel.parse("2: 100\n3: 1\n")       # decreasing in controls


def test_cost_report_counts():
    circ = RevCircuit.generic(3, [MctGate(0), cnot(1, 0), toffoli(0, 1, 2), toffoli(1, 2, 0)])
    rep = cost_report(circ)
    assert rep.qubits == 3
    assert rep.gate_count == 4
    assert rep.t_count == 14
    assert rep.control_histogram == ((0, 1), (1, 1), (2, 2))
    d = rep.as_dict()
    assert d["t_count"] == 14 and d["control_histogram"]["2"] == 2


def test_real_roundtrip_exact(tmp_path):
    tt = TruthTable(3, 3, tuple((x * 3 + 1) % 8 for x in range(8)))
    perm, emb = optimum_embed(tt)
    circ = tbs(perm, embedding=emb)
    path = tmp_path / "c.real"
    write_real(circ, path)
    assert read_real(path) == circ


def test_real_negative_controls_roundtrip(tmp_path):
    circ = RevCircuit.generic(3, [MctGate(2, frozenset({0}), frozenset({1}))])
    path = tmp_path / "neg.real"
    write_real(circ, path)
    back = read_real(path)
    assert back.gates == circ.gates
    text = path.read_text()
    assert "-l1" in text


def test_real_parse_errors(tmp_path):
    cases = [
        ".numvars 2\n.variables a b\n.begin\nt1 a\n",          # no .end
        ".numvars 2\n.variables a a\n.begin\n.end\n",          # dup names
        ".numvars 2\n.variables a b\nt1 a\n.end\n",            # gate outside body
        ".numvars 2\n.variables a b\n.begin\nt2 a a\n.end\n",  # target as control
        ".numvars 2\n.variables a b\n.begin\nt2 c a\n.end\n",  # unknown line
        ".numvars 2\n.variables a b\n.begin\nq1 a\n.end\n",    # unknown gate kind
        ".numvars 2\n.constants --\n.variables a b\n.begin\n.end\n.numvars 2\n",
    ]
    for text in cases:
        p = tmp_path / "bad.real"
        p.write_text(text)
        with pytest.raises(ParseError):
            read_real(p)


def test_real_error_location(tmp_path):
    p = tmp_path / "bad.real"
    p.write_text(".numvars 2\n.variables a b\n.begin\nt2 a a\n.end\n")
    with pytest.raises(ParseError) as info:
        read_real(p)
    assert info.value.line == 4


def test_reversed_gates_inverts():
    rng = random.Random(41)
    perm = Permutation(4, random_permutation(rng, 4))
    circ = tbs(perm)
    inv = circ.reversed_gates()
    for w in range(16):
        assert simulate(inv, simulate(circ, w)) == w
