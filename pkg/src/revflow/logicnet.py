"""Combinational logic representations: truth tables, ESOP cube lists, and
majority/xor networks, plus the text formats used to move them between tools."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

__all__ = [
    "DEFAULT_TT_LIMIT",
    "ParseError",
    "TableLimitError",
    "TruthTable",
    "Cube",
    "EsopForm",
    "esop_from_tt",
    "esop_minimize",
    "read_pla",
    "write_pla",
    "NodeKind",
    "Xmg",
    "lit",
    "lit_node",
    "lit_is_neg",
    "lit_not",
    "read_xmg",
    "write_xmg",
]

# Truth-table expansion guard: 2^n rows get expensive fast.  The CLI can raise
# this via the REVFLOW_TT_LIMIT environment variable.
DEFAULT_TT_LIMIT = 20


class ParseError(ValueError):
    """Malformed input file; carries the offending location when known."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        loc = ""
        if path is not None:
            loc = f"{path}:"
        if line is not None:
            loc += f"{line}:"
        super().__init__(f"{loc} {message}" if loc else message)
        self.path = path
        self.line = line


class TableLimitError(ValueError):
    """Raised when a truth-table expansion would exceed the configured input limit."""


def _check_limit(num_inputs: int, limit: int | None) -> None:
    cap = DEFAULT_TT_LIMIT if limit is None else limit
    if num_inputs > cap:
        raise TableLimitError(
            f"{num_inputs} inputs exceeds the truth-table limit of {cap}; "
            "raise the limit explicitly to proceed"
        )


@dataclass(frozen=True)
class TruthTable:
    """Complete multi-output truth table.

    rows[x] is the m-bit output word for input assignment x; bit i of x is
    input i, bit j of a row is output j.
    """

    num_inputs: int
    num_outputs: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.num_inputs < 0 or self.num_outputs < 0:
            raise ValueError("negative arity")
        if len(self.rows) != 1 << self.num_inputs:
            raise ValueError(
                f"expected {1 << self.num_inputs} rows, got {len(self.rows)}"
            )
        top = 1 << self.num_outputs
        for x, row in enumerate(self.rows):
            if not 0 <= row < top:
                raise ValueError(f"row {x} value {row} out of range for {self.num_outputs} outputs")

    @classmethod
    def from_function(
        cls,
        num_inputs: int,
        num_outputs: int,
        fn: Callable[[int], int],
        limit: int | None = None,
    ) -> "TruthTable":
        """Tabulate fn over all 2^num_inputs assignments."""
        _check_limit(num_inputs, limit)
        rows = tuple(fn(x) for x in range(1 << num_inputs))
        return cls(num_inputs, num_outputs, rows)

    def output_column(self, j: int) -> int:
        """Output j across all rows, packed into a 2^n-bit integer (bit x = row x)."""
        col = 0
        for x, row in enumerate(self.rows):
            col |= ((row >> j) & 1) << x
        return col


@dataclass(frozen=True)
class Cube:
    """Product term of an ESOP: a set of literals and the outputs it feeds.

    mask bit i set means input i appears as a literal; polarity bit i (always a
    subset of mask) gives that literal's phase, 1 for positive.  output_mask
    bit j set means the cube is XORed into output j.
    """

    mask: int
    polarity: int
    output_mask: int

    def __post_init__(self):
        if self.mask < 0 or self.polarity < 0:
            raise ValueError("negative literal masks")
        if self.polarity & ~self.mask:
            raise ValueError("polarity bits outside the literal mask")
        if self.output_mask <= 0:
            raise ValueError("cube must drive at least one output")

    @classmethod
    def from_literals(cls, literals: dict[int, bool], output_mask: int) -> "Cube":
        mask = 0
        polarity = 0
        for i, positive in literals.items():
            if i < 0:
                raise ValueError("negative input index")
            mask |= 1 << i
            if positive:
                polarity |= 1 << i
        return cls(mask, polarity, output_mask)

    @property
    def literals(self) -> dict[int, bool]:
        out: dict[int, bool] = {}
        m = self.mask
        i = 0
        while m:
            if m & 1:
                out[i] = bool((self.polarity >> i) & 1)
            m >>= 1
            i += 1
        return out

    def matches(self, x: int) -> bool:
        return (x & self.mask) == self.polarity


@dataclass(frozen=True)
class EsopForm:
    """Exclusive-or sum of products over num_inputs inputs and num_outputs outputs."""

    num_inputs: int
    num_outputs: int
    cubes: tuple[Cube, ...]

    def __post_init__(self):
        top_in = 1 << self.num_inputs
        top_out = 1 << self.num_outputs
        for k, c in enumerate(self.cubes):
            if c.mask >= top_in:
                raise ValueError(f"cube {k} uses inputs beyond {self.num_inputs}")
            if c.output_mask >= top_out:
                raise ValueError(f"cube {k} drives outputs beyond {self.num_outputs}")

    def evaluate(self, x: int) -> int:
        word = 0
        for c in self.cubes:
            if (x & c.mask) == c.polarity:
                word ^= c.output_mask
        return word

    def to_truth_table(self, limit: int | None = None) -> TruthTable:
        _check_limit(self.num_inputs, limit)
        rows = tuple(self.evaluate(x) for x in range(1 << self.num_inputs))
        return TruthTable(self.num_inputs, self.num_outputs, rows)


def esop_from_tt(tt: TruthTable) -> EsopForm:
    """Canonical positive-polarity Reed-Muller expansion of a truth table.

    The butterfly transform runs on whole output words, so all outputs are
    expanded in one pass; coefficient words become cube output masks.  Cubes
    carry only positive literals and are emitted in ascending monomial order.
    """
    n = tt.num_inputs
    coeff = list(tt.rows)
    for i in range(n):
        bit = 1 << i
        for x in range(1 << n):
            if x & bit:
                coeff[x] ^= coeff[x ^ bit]
    cubes = [
        Cube(mask=s, polarity=s, output_mask=w)
        for s, w in enumerate(coeff)
        if w
    ]
    return EsopForm(n, tt.num_outputs, tuple(cubes))


def _combine_identical(cubes: list[Cube]) -> tuple[list[Cube], bool]:
    # XOR-combine cubes with identical literal sets; drop cancelled ones.
    order: list[tuple[int, int]] = []
    acc: dict[tuple[int, int], int] = {}
    for c in cubes:
        key = (c.mask, c.polarity)
        if key in acc:
            acc[key] ^= c.output_mask
        else:
            acc[key] = c.output_mask
            order.append(key)
    out = [Cube(m, p, acc[(m, p)]) for (m, p) in order if acc[(m, p)]]
    return out, len(out) != len(cubes)


def _find_distance1_merge(cubes: list[Cube]) -> tuple[int, int, Cube] | None:
    # Two cubes whose literal maps differ in exactly one input position merge
    # into one: opposite phases drop the literal, literal-vs-absent flips it.
    index = {(c.mask, c.polarity): k for k, c in enumerate(cubes)}
    for k, c in enumerate(cubes):
        m = c.mask
        i = 0
        probe = m
        while probe:
            if probe & 1:
                bit = 1 << i
                # partner has the opposite phase at i
                other = index.get((m, c.polarity ^ bit))
                if other is not None and other > k and cubes[other].output_mask == c.output_mask:
                    merged = Cube(m & ~bit, c.polarity & ~bit, c.output_mask)
                    return k, other, merged
                # partner lacks the literal at i entirely
                other = index.get((m & ~bit, c.polarity & ~bit))
                if other is not None and cubes[other].output_mask == c.output_mask:
                    lo, hi = (other, k) if other < k else (k, other)
                    merged = Cube(m, c.polarity ^ bit, c.output_mask)
                    return lo, hi, merged
            probe >>= 1
            i += 1
    return None


def esop_minimize(esop: EsopForm) -> EsopForm:
    """Reduce a cube list by exact cancellation and distance-1 merging.

    Runs to a fixpoint: identical literal sets XOR-combine (cancelling when the
    combined output mask is empty), and cube pairs at literal distance one fuse
    into a single cube.  The result computes the same function with at most as
    many cubes.
    """
    cubes = list(esop.cubes)
    while True:
        cubes, changed = _combine_identical(cubes)
        found = _find_distance1_merge(cubes)
        if found is None:
            if not changed:
                break
            continue
        k, other, merged = found
        cubes[k] = merged
        del cubes[other]
    return EsopForm(esop.num_inputs, esop.num_outputs, tuple(cubes))


# ---------------------------------------------------------------------------
# PLA text format (ESOP dialect): .i/.o/.type headers, one cube per line as
# an input pattern over {0,1,-} and an output pattern over {0,1}, then .e.


def write_pla(esop: EsopForm, path: str | Path) -> None:
    lines = [
        f".i {esop.num_inputs}",
        f".o {esop.num_outputs}",
        ".type esop",
    ]
    for c in esop.cubes:
        ins = []
        for i in range(esop.num_inputs):
            bit = 1 << i
            if not c.mask & bit:
                ins.append("-")
            elif c.polarity & bit:
                ins.append("1")
            else:
                ins.append("0")
        outs = ["1" if c.output_mask >> j & 1 else "0" for j in range(esop.num_outputs)]
        lines.append("".join(ins) + " " + "".join(outs))
    lines.append(".e")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_pla(path: str | Path) -> EsopForm:
    name = str(path)
    num_inputs: int | None = None
    num_outputs: int | None = None
    cubes: list[Cube] = []
    ended = False
    typed = False
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        if ended:
            raise ParseError("content after .e", name, lineno)
        if text.startswith("."):
            fields = text.split()
            directive = fields[0]
            if directive == ".i" or directive == ".o":
                if len(fields) != 2 or not fields[1].isdigit():
                    raise ParseError(f"malformed {directive} header", name, lineno)
                if directive == ".i":
                    num_inputs = int(fields[1])
                else:
                    num_outputs = int(fields[1])
            elif directive == ".type":
                if fields[1:] != ["esop"]:
                    raise ParseError("only .type esop is supported", name, lineno)
                typed = True
            elif directive == ".e":
                ended = True
            else:
                raise ParseError(f"unknown directive {directive}", name, lineno)
            continue
        if num_inputs is None or num_outputs is None:
            raise ParseError("cube before .i/.o headers", name, lineno)
        if not typed:
            # a plain PLA sums cubes with OR; reading it as ESOP would be wrong
            raise ParseError("cube before .type esop declaration", name, lineno)
        fields = text.split()
        if len(fields) != 2:
            raise ParseError("cube line needs an input and an output pattern", name, lineno)
        ins, outs = fields
        if len(ins) != num_inputs:
            raise ParseError(f"input pattern has {len(ins)} columns, expected {num_inputs}", name, lineno)
        if len(outs) != num_outputs:
            raise ParseError(f"output pattern has {len(outs)} columns, expected {num_outputs}", name, lineno)
        mask = polarity = 0
        for i, ch in enumerate(ins):
            if ch == "-":
                continue
            if ch == "1":
                mask |= 1 << i
                polarity |= 1 << i
            elif ch == "0":
                mask |= 1 << i
            else:
                raise ParseError(f"bad input column character {ch!r}", name, lineno)
        output_mask = 0
        for j, ch in enumerate(outs):
            if ch == "1":
                output_mask |= 1 << j
            elif ch != "0":
                raise ParseError(f"bad output column character {ch!r}", name, lineno)
        if not output_mask:
            raise ParseError("cube drives no outputs", name, lineno)
        cubes.append(Cube(mask, polarity, output_mask))
    if num_inputs is None or num_outputs is None:
        raise ParseError("missing .i/.o headers", name)
    if not ended:
        raise ParseError("missing .e terminator", name)
    return EsopForm(num_inputs, num_outputs, tuple(cubes))


# ---------------------------------------------------------------------------
# Majority/xor networks.  Nodes are stored topologically; edges are integer
# literals 2*node+phase so a complemented edge costs nothing to represent.


class NodeKind(enum.Enum):
    CONST0 = "const0"
    INPUT = "input"
    MAJ = "maj"
    XOR = "xor"


def lit(node: int, neg: bool = False) -> int:
    return node << 1 | int(neg)


def lit_node(literal: int) -> int:
    return literal >> 1


def lit_is_neg(literal: int) -> bool:
    return bool(literal & 1)


def lit_not(literal: int) -> int:
    return literal ^ 1


class Xmg:
    """Logic network over 3-input majority and 2-input xor nodes.

    Node 0 is the constant 0; inputs follow, then gates in topological order
    (operands always reference earlier nodes).  AND and OR have no node kind
    of their own, they are majorities with a constant operand.  Construction
    folds trivial gates and hashes structurally, so equivalent add_* calls
    return the same literal.
    """

    def __init__(self):
        self._kinds: list[NodeKind] = [NodeKind.CONST0]
        self._fanins: list[tuple[int, ...]] = [()]
        self._strash: dict[tuple, int] = {}
        self.input_names: list[str] = []
        self.output_names: list[str] = []
        self._outputs: list[int] = []
        self._maj_count = 0
        self._xor_count = 0

    # -- construction ------------------------------------------------------

    @property
    def const0(self) -> int:
        return lit(0)

    @property
    def const1(self) -> int:
        return lit(0, True)

    def add_input(self, name: str | None = None) -> int:
        index = len(self._kinds)
        self._kinds.append(NodeKind.INPUT)
        self._fanins.append(())
        self.input_names.append(name if name is not None else f"x{len(self.input_names)}")
        return lit(index)

    def _check_lit(self, literal: int) -> None:
        if literal < 0 or lit_node(literal) >= len(self._kinds):
            raise ValueError(f"literal {literal} references an unknown node")

    def add_xor(self, a: int, b: int) -> int:
        self._check_lit(a)
        self._check_lit(b)
        neg = lit_is_neg(a) ^ lit_is_neg(b)
        a &= ~1
        b &= ~1
        if a == b:
            return lit(0, neg)
        if lit_node(a) == 0:
            return b | int(neg)  # a is const0 once phases are stripped
        if lit_node(b) == 0:
            return a | int(neg)
        if a > b:
            a, b = b, a
        key = (NodeKind.XOR, a, b)
        node = self._strash.get(key)
        if node is None:
            node = len(self._kinds)
            self._kinds.append(NodeKind.XOR)
            self._fanins.append((a, b))
            self._strash[key] = node
            self._xor_count += 1
        return lit(node, bool(neg))

    def add_maj(self, a: int, b: int, c: int) -> int:
        for x in (a, b, c):
            self._check_lit(x)
        # equal or complementary operand pairs collapse the gate
        if a == b:
            return a
        if a == lit_not(b):
            return c
        if a == c:
            return a
        if a == lit_not(c):
            return b
        if b == c:
            return b
        if b == lit_not(c):
            return a
        ops = [a, b, c]
        # majority is self-dual; keep at most one complemented operand
        if sum(lit_is_neg(x) for x in ops) >= 2:
            ops = [lit_not(x) for x in ops]
            out_neg = True
        else:
            out_neg = False
        ops.sort()
        key = (NodeKind.MAJ, *ops)
        node = self._strash.get(key)
        if node is None:
            node = len(self._kinds)
            self._kinds.append(NodeKind.MAJ)
            self._fanins.append(tuple(ops))
            self._strash[key] = node
            self._maj_count += 1
        return lit(node, out_neg)

    def add_and(self, a: int, b: int) -> int:
        return self.add_maj(a, b, self.const0)

    def add_or(self, a: int, b: int) -> int:
        return self.add_maj(a, b, self.const1)

    def add_output(self, literal: int, name: str | None = None) -> int:
        self._check_lit(literal)
        self._outputs.append(literal)
        self.output_names.append(name if name is not None else f"y{len(self.output_names)}")
        return len(self._outputs) - 1

    # -- introspection -----------------------------------------------------

    @property
    def num_inputs(self) -> int:
        return len(self.input_names)

    @property
    def num_outputs(self) -> int:
        return len(self._outputs)

    @property
    def num_nodes(self) -> int:
        return len(self._kinds)

    @property
    def maj_count(self) -> int:
        return self._maj_count

    @property
    def xor_count(self) -> int:
        return self._xor_count

    @property
    def outputs(self) -> tuple[int, ...]:
        return tuple(self._outputs)

    def kind(self, node: int) -> NodeKind:
        return self._kinds[node]

    def fanins(self, node: int) -> tuple[int, ...]:
        return self._fanins[node]

    def input_literal(self, i: int) -> int:
        return lit(1 + i)

    def gates(self) -> Iterator[tuple[int, NodeKind, tuple[int, ...]]]:
        """Gate nodes in topological order as (node, kind, fanins)."""
        for node in range(1 + self.num_inputs, len(self._kinds)):
            yield node, self._kinds[node], self._fanins[node]

    # -- evaluation --------------------------------------------------------

    def evaluate(self, x: int) -> int:
        """Output word for one input assignment (bit i of x is input i)."""
        values = [0] * len(self._kinds)
        for i in range(self.num_inputs):
            values[1 + i] = x >> i & 1
        for node, kind, fi in self.gates():
            if kind is NodeKind.XOR:
                a, b = fi
                values[node] = (values[a >> 1] ^ (a & 1)) ^ (values[b >> 1] ^ (b & 1))
            else:
                a, b, c = fi
                va = values[a >> 1] ^ (a & 1)
                vb = values[b >> 1] ^ (b & 1)
                vc = values[c >> 1] ^ (c & 1)
                values[node] = (va & vb) | (va & vc) | (vb & vc)
        word = 0
        for j, out in enumerate(self._outputs):
            word |= (values[out >> 1] ^ (out & 1)) << j
        return word

    def to_truth_table(self, limit: int | None = None) -> TruthTable:
        """Tabulate all assignments at once, one bit-parallel pass per node."""
        n = self.num_inputs
        _check_limit(n, limit)
        size = 1 << n
        ones = (1 << size) - 1
        values = [0] * len(self._kinds)
        for i in range(n):
            values[1 + i] = _input_pattern(i, n)

        def edge(literal: int) -> int:
            v = values[literal >> 1]
            return v ^ ones if literal & 1 else v

        for node, kind, fi in self.gates():
            if kind is NodeKind.XOR:
                values[node] = edge(fi[0]) ^ edge(fi[1])
            else:
                va, vb, vc = (edge(f) for f in fi)
                values[node] = (va & vb) | (va & vc) | (vb & vc)
        cols = [edge(out) for out in self._outputs]
        rows = []
        for x in range(size):
            word = 0
            for j, col in enumerate(cols):
                word |= (col >> x & 1) << j
            rows.append(word)
        return TruthTable(n, self.num_outputs, tuple(rows))


def _input_pattern(i: int, n: int) -> int:
    """Bit-parallel value of input i over all 2^n assignments in index order."""
    half = 1 << i
    period = ((1 << half) - 1) << half
    reps = 1 << (n - i - 1)
    span = 1 << (i + 1)
    return period * (((1 << (span * reps)) - 1) // ((1 << span) - 1))


# ---------------------------------------------------------------------------
# Minimal XMG text format: a header with arities, one line per gate, one line
# per output, all operands as integer literals (2*node+phase).  Node ids are
# implicit: 0 is the constant, 1..I the inputs, then gates in file order.


def write_xmg(net: Xmg, path: str | Path) -> None:
    lines = [f".xmg {net.num_inputs} {net.num_outputs} {net.num_nodes - 1 - net.num_inputs}"]
    for _, kind, fi in net.gates():
        word = "maj" if kind is NodeKind.MAJ else "xor"
        lines.append(word + " " + " ".join(str(f) for f in fi))
    for out in net.outputs:
        lines.append(f"out {out}")
    lines.append(".end")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_xmg(path: str | Path) -> Xmg:
    name = str(path)
    net = Xmg()
    header: tuple[int, int, int] | None = None
    # translate file node ids through folding: id -> literal in the new net
    by_id: list[int] = [0]
    gates_seen = 0
    outputs_seen = 0
    ended = False

    def translate(token: str, lineno: int) -> int:
        if not token.isdigit():
            raise ParseError(f"bad literal {token!r}", name, lineno)
        value = int(token)
        node = value >> 1
        if node >= len(by_id):
            raise ParseError(f"literal {value} references a later node", name, lineno)
        return by_id[node] ^ (value & 1)

    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        if ended:
            raise ParseError("content after .end", name, lineno)
        fields = text.split()
        if fields[0] == ".xmg":
            if header is not None:
                raise ParseError("duplicate header", name, lineno)
            if len(fields) != 4 or not all(f.isdigit() for f in fields[1:]):
                raise ParseError("malformed .xmg header", name, lineno)
            header = (int(fields[1]), int(fields[2]), int(fields[3]))
            for _ in range(header[0]):
                by_id.append(net.add_input())
            continue
        if header is None:
            raise ParseError("missing .xmg header", name, lineno)
        if fields[0] == ".end":
            ended = True
            continue
        if fields[0] in ("maj", "xor"):
            if outputs_seen:
                raise ParseError("gate after outputs", name, lineno)
            arity = 3 if fields[0] == "maj" else 2
            if len(fields) != 1 + arity:
                raise ParseError(f"{fields[0]} gate needs {arity} operands", name, lineno)
            ops = [translate(tok, lineno) for tok in fields[1:]]
            made = net.add_maj(*ops) if fields[0] == "maj" else net.add_xor(*ops)
            by_id.append(made)
            gates_seen += 1
        elif fields[0] == "out":
            if len(fields) != 2:
                raise ParseError("out line needs one literal", name, lineno)
            net.add_output(translate(fields[1], lineno))
            outputs_seen += 1
        else:
            raise ParseError(f"unknown line kind {fields[0]!r}", name, lineno)
    if header is None:
        raise ParseError("missing .xmg header", name)
    if not ended:
        raise ParseError("missing .end terminator", name)
    if gates_seen != header[2] or outputs_seen != header[1]:
        raise ParseError(
            f"header promises {header[2]} gates and {header[1]} outputs, "
            f"found {gates_seen} and {outputs_seen}",
            name,
        )
    return net
