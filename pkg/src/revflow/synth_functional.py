"""Truth-table driven synthesis of permutations into Toffoli cascades.

Rows are fixed in ascending order.  For each input word i whose current
image y differs from i, gates are appended output-side: first gates that set
the bits present in i but missing from y (controls on the ones of the
evolving y), then gates that clear the bits present in y but not in i
(controls on the ones of i).  Earlier rows stay fixed because their images
are smaller than i and can never satisfy those control sets.  The circuit
that computes the original permutation is the reversal of the emitted list.
"""

from __future__ import annotations

from .embedding import Embedding, Permutation
from .logicnet import _input_pattern
from .revcirc import MctGate, RevCircuit

__all__ = ["tbs", "tbs_invariant_check"]


def _bits(word: int):
    while word:
        low = word & -word
        yield low.bit_length() - 1
        word ^= low


def tbs(perm: Permutation, embedding: Embedding | None = None, trace: list | None = None) -> RevCircuit:
    """Synthesize an exact circuit for the permutation.

    When an embedding is given its line roles are stamped onto the result.
    Passing a list as trace collects the working permutation after every
    row, which tbs_invariant_check can audit.
    """
    r = perm.width
    size = 1 << r
    full = (1 << size) - 1
    planes = []
    for b in range(r):
        col = 0
        for x in range(size):
            col |= ((perm.images[x] >> b) & 1) << x
        planes.append(col)

    emitted: list[MctGate] = []

    def apply(ctrl_mask: int, target: int) -> None:
        fire = full
        for c in _bits(ctrl_mask):
            fire &= planes[c]
        planes[target] ^= fire

    def image_at(x: int) -> int:
        return sum(((planes[b] >> x) & 1) << b for b in range(r))

    for i in range(size):
        y = image_at(i)
        for b in _bits(i & ~y):
            gate = MctGate(b, frozenset(_bits(y)))
            emitted.append(gate)
            apply(y, b)
            y |= 1 << b
        controls = frozenset(_bits(i))
        for b in _bits(y & ~i):
            emitted.append(MctGate(b, controls))
            apply(i, b)
        if trace is not None:
            trace.append(tuple(image_at(x) for x in range(size)))

    circ = RevCircuit.generic(r, reversed(emitted))
    if embedding is not None:
        circ = circ.with_embedding(embedding)
    return circ


def tbs_invariant_check(perm: Permutation, trace: list) -> bool:
    """True iff each snapshot fixes every row up to and including its own."""
    size = 1 << perm.width
    if len(trace) != size:
        return False
    for i, snap in enumerate(trace):
        if len(snap) != size:
            return False
        for j in range(i + 1):
            if snap[j] != j:
                return False
    return trace[-1] == tuple(range(size))
