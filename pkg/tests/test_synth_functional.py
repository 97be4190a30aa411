"""Transformation-based synthesis against exhaustive simulation."""

import random

import pytest

from conftest import random_permutation
from revflow.arith import Design, DesignSpec, design_truth_table
from revflow.embedding import Permutation, bennett_embed, optimum_embed
from revflow.revcirc import simulate_full, verify_circuit
from revflow.synth_functional import tbs, tbs_invariant_check


def test_identity_needs_no_gates():
    perm = Permutation(3, tuple(range(8)))
    assert tbs(perm).gates == ()


def test_single_not():
    perm = Permutation(1, (1, 0))
    circ = tbs(perm)
    assert len(circ.gates) == 1
    assert circ.gates[0].num_controls == 0
    assert simulate_full(circ).images == (1, 0)


def test_swap_of_two_lines():
    # (x0, x1) -> (x1, x0)
    perm = Permutation(2, (0, 2, 1, 3))
    circ = tbs(perm)
    assert simulate_full(circ).images == perm.images


@pytest.mark.parametrize("width", [1, 2, 3, 4, 5, 6])
def test_random_permutations_exact(width):
    rng = random.Random(100 + width)
    for _ in range(6):
        perm = Permutation(width, random_permutation(rng, width))
        circ = tbs(perm)
        assert simulate_full(circ).images == perm.images


def test_trace_monotone_prefix_invariant():
    rng = random.Random(55)
    for _ in range(20):
        width = rng.randrange(1, 7)
        perm = Permutation(width, random_permutation(rng, width))
        trace = []
        tbs(perm, trace=trace)
        assert tbs_invariant_check(perm, trace)


def test_invariant_check_rejects_bad_trace():
    perm = Permutation(2, (0, 1, 3, 2))
    trace = []
    tbs(perm, trace=trace)
    assert tbs_invariant_check(perm, trace)
    broken = [tuple(snap) for snap in trace]
    broken[-1] = (1, 0, 2, 3)
    assert not tbs_invariant_check(perm, broken)
    assert not tbs_invariant_check(perm, trace[:-1])


def test_embedding_roles_stamped():
    tt = design_truth_table(DesignSpec(Design.INTDIV, 3))
    perm, emb = optimum_embed(tt)
    circ = tbs(perm, embedding=emb)
    assert circ.num_inputs == 3
    assert circ.num_outputs == 3
    assert circ.constants[:3] == (None, None, None)
    assert all(c == 0 for c in circ.constants[3:])
    for j, line in emb.output_lines.items():
        assert circ.outputs[line] == j
    assert verify_circuit(circ, tt)


@pytest.mark.parametrize("embed", [optimum_embed, bennett_embed])
def test_intdiv_both_embeddings(embed):
    tt = design_truth_table(DesignSpec(Design.INTDIV, 4))
    perm, emb = embed(tt)
    circ = tbs(perm, embedding=emb)
    assert simulate_full(circ).images == perm.images
    assert verify_circuit(circ, tt)
    assert verify_circuit(circ, tt, emb)
