"""Hierarchical synthesis: compile a logic network node by node.

Each MAJ node costs exactly one Toffoli through the identity
a xor ((a xor b) and (a xor c)) = MAJ(a, b, c): the two factors are built
with CNOTs, consumed as Toffoli controls, and torn down again.  XOR nodes
are pure CNOTs.  Factors normally form in place on the operand lines; when
an operand is a primary input the factor is built on a scratch line instead
so inputs are never written, only read.

Cleanup is either bennett (reverse the whole compute phase after copying
the outputs out) or eager (uncompute every node as soon as its last reader
is done and recycle the line).  Both leave every ancilla at 0.
"""

from __future__ import annotations

from .logicnet import NodeKind, Xmg, lit_is_neg, lit_node
from .revcirc import MctGate, RevCircuit, cnot

__all__ = ["hier_synth", "reachable_gate_counts", "inplace_xor_opt"]

STRATEGIES = ("bennett", "eager")


def _reachable_gates(net: Xmg) -> set:
    """Gate nodes on some path from an output, found by walking fanins."""
    first_gate = 1 + net.num_inputs
    todo = [lit_node(e) for e in net.outputs]
    seen = set()
    while todo:
        node = todo.pop()
        if node < first_gate or node in seen:
            continue
        seen.add(node)
        todo.extend(lit_node(e) for e in net.fanins(node))
    return seen


def reachable_gate_counts(net: Xmg) -> tuple[int, int]:
    """(MAJ, XOR) node counts restricted to output-reachable gates."""
    reach = _reachable_gates(net)
    maj = sum(1 for v in reach if net.kind(v) is NodeKind.MAJ)
    return maj, len(reach) - maj


class _Compiler:
    def __init__(self, net: Xmg):
        self.net = net
        self.n = net.num_inputs
        self.m = net.num_outputs
        self.gates: list[MctGate] = []
        self.line_of: dict[int, int] = {}
        self.next_line = self.n + self.m
        self.free: list[int] = []
        self.scratch_pool: list[int] = []
        self.scratch_used = 0

    def alloc(self) -> int:
        if self.free:
            return self.free.pop()
        line = self.next_line
        self.next_line += 1
        return line

    def take_scratch(self) -> int:
        if self.scratch_pool:
            return self.scratch_pool.pop()
        line = self.next_line
        self.next_line += 1
        self.scratch_used += 1
        return line

    def line(self, node: int) -> int:
        if 1 <= node <= self.n:
            return node - 1
        return self.line_of[node]

    def emit_node(self, node: int) -> list[MctGate]:
        """Compute the node onto a fresh line; returns the gate sequence."""
        kind = self.net.kind(node)
        fanins = self.net.fanins(node)
        target = self.alloc()
        self.line_of[node] = target
        if kind is NodeKind.XOR:
            a, b = fanins  # stored phase-free, complement lives on the edge
            seq = [cnot(self.line(lit_node(a)), target),
                   cnot(self.line(lit_node(b)), target)]
        else:
            seq = self._emit_maj(fanins, target)
        self.gates.extend(seq)
        return seq

    def _emit_maj(self, fanins, target: int) -> list[MctGate]:
        ops = [(lit_node(e), lit_is_neg(e)) for e in fanins]

        # Role a is only ever read, so a constant there erases gates and an
        # input there needs no scratch protection.  A negated operand is
        # cheaper in b/c (free control polarity) than in a (extra NOT).
        def a_score(item):
            node, neg = item
            if node == 0:
                return 0
            base = 1 if node <= self.n else 3
            return base + (1 if neg else 0)

        a_item = min(ops, key=a_score)
        ops.remove(a_item)
        a_node, a_neg = a_item
        a_const = a_node == 0
        a_line = None if a_const else self.line(a_node)

        setup: list[MctGate] = []
        pos, neg_ctl = set(), set()
        released: list[int] = []
        for op_node, op_neg in ops:
            invert = a_neg ^ op_neg
            op_line = self.line(op_node)
            if a_const:
                ctl = op_line
            elif op_node <= self.n:
                s = self.take_scratch()
                released.append(s)
                setup.append(cnot(op_line, s))
                setup.append(cnot(a_line, s))
                ctl = s
            else:
                setup.append(cnot(a_line, op_line))
                ctl = op_line
            (neg_ctl if invert else pos).add(ctl)

        seq = list(setup)
        seq.append(MctGate(target, frozenset(pos), frozenset(neg_ctl)))
        if not a_const:
            seq.append(cnot(a_line, target))
        if a_neg:
            seq.append(MctGate(target))
        seq.extend(reversed(setup))
        self.scratch_pool.extend(reversed(released))
        return seq

    def emit_output_copy(self, j: int) -> None:
        edge = self.net.outputs[j]
        node, neg = lit_node(edge), lit_is_neg(edge)
        target = self.n + j
        if node != 0:
            self.gates.append(cnot(self.line(node), target))
        if neg:
            self.gates.append(MctGate(target))

    def finish(self, input_names, output_names) -> RevCircuit:
        width = self.next_line
        names = list(input_names) + list(output_names)
        names += [f"a{k}" for k in range(width - len(names))]
        seen: set = set()
        for i, name in enumerate(names):
            if name in seen:
                names[i] = f"{name}_{i}"
            seen.add(names[i])
        return RevCircuit(
            width=width,
            gates=tuple(self.gates),
            line_names=tuple(names),
            constants=(None,) * self.n + (0,) * (width - self.n),
            outputs=(None,) * self.n + tuple(range(self.m)) + (None,) * (width - self.n - self.m),
        )


def hier_synth(net: Xmg, strategy: str = "bennett") -> RevCircuit:
    """Compile the network to a garbage-free circuit.

    Lines are inputs, then one line per primary output, then ancillas (all
    constant 0).  Output j ends as the j-th output function; every other
    non-input line returns to 0 on every input.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    comp = _Compiler(net)
    reach = _reachable_gates(net)
    out_uses: dict[int, list[int]] = {}
    for j, edge in enumerate(net.outputs):
        out_uses.setdefault(lit_node(edge), []).append(j)

    if strategy == "bennett":
        compute: list[MctGate] = []
        for node, _kind, _fi in net.gates():
            if node in reach:
                compute.extend(comp.emit_node(node))
        for j in range(comp.m):
            comp.emit_output_copy(j)
        comp.gates.extend(reversed(compute))
        return comp.finish(net.input_names, net.output_names)

    # eager: a node's remaining reads are two per consumer gate (its compute
    # and its uncompute) plus one per output copy; at zero the node itself
    # is uncomputed and its line recycled
    first_gate = 1 + net.num_inputs
    rc = {v: len(out_uses.get(v, ())) for v in reach}
    for v in reach:
        for edge in net.fanins(v):
            u = lit_node(edge)
            if u >= first_gate:
                rc[u] += 2
    constr: dict[int, list[MctGate]] = {}

    def settle(seeds) -> None:
        stack = [v for v in seeds if rc[v] == 0]
        while stack:
            v = stack.pop()
            comp.gates.extend(reversed(constr[v]))
            comp.free.append(comp.line_of.pop(v))
            del rc[v]
            for edge in net.fanins(v):
                u = lit_node(edge)
                if u >= first_gate:
                    rc[u] -= 1
                    if rc[u] == 0:
                        stack.append(u)

    for j, edge in enumerate(net.outputs):
        if lit_node(edge) < first_gate:
            comp.emit_output_copy(j)
    for node, _kind, _fi in net.gates():
        if node not in reach:
            continue
        constr[node] = comp.emit_node(node)
        for j in out_uses.get(node, ()):
            comp.emit_output_copy(j)
            rc[node] -= 1
        touched = [node]
        for edge in net.fanins(node):
            u = lit_node(edge)
            if u >= first_gate:
                rc[u] -= 1
                touched.append(u)
        settle(touched)
    if rc or comp.line_of:
        raise AssertionError("eager cleanup left live nodes behind")
    return comp.finish(net.input_names, net.output_names)


def inplace_xor_opt(net: Xmg, circuit: RevCircuit) -> RevCircuit:
    """Fuse single-reader XOR operands onto their operand's line.

    When an XOR node's operand is a gate node read nowhere else, the XOR can
    target that operand's line directly, saving the fresh ancilla; cleanup
    stays a straight reversal.  Returns the given circuit unchanged when no
    node qualifies.
    """
    reach = _reachable_gates(net)
    first_gate = 1 + net.num_inputs
    uses: dict[int, int] = {v: 0 for v in reach}
    for v in reach:
        for edge in net.fanins(v):
            u = lit_node(edge)
            if u >= first_gate:
                uses[u] += 1
    for edge in net.outputs:
        u = lit_node(edge)
        if u >= first_gate:
            uses[u] += 1

    def fusable(node) -> int | None:
        if net.kind(node) is not NodeKind.XOR:
            return None
        for edge in net.fanins(node):
            u = lit_node(edge)
            if u >= first_gate and uses[u] == 1:
                return u
        return None

    if not any(fusable(v) is not None for v in reach):
        return circuit

    comp = _Compiler(net)
    compute: list[MctGate] = []
    for node, kind, fanins in net.gates():
        if node not in reach:
            continue
        absorb = fusable(node)
        if absorb is None:
            compute.extend(comp.emit_node(node))
            continue
        other = next(e for e in fanins if lit_node(e) != absorb)
        target = comp.line(absorb)
        comp.line_of[node] = target
        gate = cnot(comp.line(lit_node(other)), target)
        compute.append(gate)
        comp.gates.append(gate)
    for j in range(comp.m):
        comp.emit_output_copy(j)
    comp.gates.extend(reversed(compute))
    return comp.finish(net.input_names, net.output_names)
