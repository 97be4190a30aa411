"""Reversible circuits built from mixed-polarity multiple-controlled Toffolis.

A circuit is a fixed set of lines and an ordered gate cascade.  Line metadata
records which lines are primary inputs versus constants and which lines carry
function outputs at the end; everything else is garbage.  Simulation works on
whole input batches at once by keeping one big integer per line whose bit x is
the line's value under assignment x.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .embedding import Embedding, Permutation
from .logicnet import ParseError, TruthTable, _input_pattern

__all__ = [
    "MctGate",
    "cnot",
    "toffoli",
    "RevCircuit",
    "simulate",
    "simulate_source_batch",
    "simulate_full",
    "verify_circuit",
    "CostModel",
    "DEFAULT_COST_MODEL",
    "CostReport",
    "cost_report",
    "read_real",
    "write_real",
]

# Widths beyond this make full permutation extraction explode; callers that
# only need input-side behaviour should use simulate_source_batch instead.
FULL_SIM_MAX_WIDTH = 24


@dataclass(frozen=True)
class MctGate:
    """Flip the target iff all positive controls are 1 and negatives are 0."""

    target: int
    positive_controls: frozenset[int] = frozenset()
    negative_controls: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.target < 0:
            raise ValueError("negative target line")
        if any(c < 0 for c in self.positive_controls | self.negative_controls):
            raise ValueError("negative control line")
        if self.positive_controls & self.negative_controls:
            raise ValueError("a control cannot be both polarities")
        if self.target in self.positive_controls or self.target in self.negative_controls:
            raise ValueError("target used as its own control")

    @property
    def num_controls(self) -> int:
        return len(self.positive_controls) + len(self.negative_controls)

    @property
    def lines(self) -> frozenset:
        return self.positive_controls | self.negative_controls | {self.target}

    def apply(self, word: int) -> int:
        pos = sum(1 << c for c in self.positive_controls)
        neg = sum(1 << c for c in self.negative_controls)
        if word & pos == pos and word & neg == 0:
            word ^= 1 << self.target
        return word


def cnot(control: int, target: int) -> MctGate:
    return MctGate(target, frozenset((control,)))


def toffoli(c1: int, c2: int, target: int) -> MctGate:
    return MctGate(target, frozenset((c1, c2)))


@dataclass(frozen=True)
class RevCircuit:
    """Gate cascade with per-line roles.

    constants[i] is None for a primary input line and 0/1 for a constant.
    outputs[i] is None for a garbage line, else the source output index the
    line carries; the non-None entries must be 0..m-1 in ascending line order
    so that the output word reads off low-to-high without a permutation.
    """

    width: int
    gates: tuple[MctGate, ...]
    line_names: tuple[str, ...]
    constants: "tuple[int | None, ...]"
    outputs: "tuple[int | None, ...]"

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("circuit needs at least one line")
        for field in (self.line_names, self.constants, self.outputs):
            if len(field) != self.width:
                raise ValueError("line metadata length does not match width")
        if len(set(self.line_names)) != self.width:
            raise ValueError("line names must be unique")
        for name in self.line_names:
            if not name or any(ch.isspace() for ch in name) or name.startswith("-"):
                raise ValueError(f"bad line name {name!r}")
        for c in self.constants:
            if c not in (None, 0, 1):
                raise ValueError("constants must be 0, 1 or None")
        declared = [o for o in self.outputs if o is not None]
        if declared != list(range(len(declared))):
            raise ValueError("output indices must be 0..m-1 in line order")
        for gate in self.gates:
            if max(gate.lines) >= self.width:
                raise ValueError("gate uses a line beyond the circuit width")

    @classmethod
    def generic(cls, width: int, gates: Iterable[MctGate]) -> "RevCircuit":
        """All lines primary inputs, all lines outputs in place."""
        return cls(
            width=width,
            gates=tuple(gates),
            line_names=tuple(f"l{i}" for i in range(width)),
            constants=(None,) * width,
            outputs=tuple(range(width)),
        )

    def with_meta(self, *, line_names=None, constants=None, outputs=None) -> "RevCircuit":
        kw = {}
        if line_names is not None:
            kw["line_names"] = tuple(line_names)
        if constants is not None:
            kw["constants"] = tuple(constants)
        if outputs is not None:
            kw["outputs"] = tuple(outputs)
        return replace(self, **kw)

    def with_embedding(self, emb: Embedding, input_names: Sequence[str] | None = None) -> "RevCircuit":
        """Stamp line roles from an embedding (inputs on the low lines)."""
        if emb.width != self.width:
            raise ValueError("embedding width does not match circuit")
        n = emb.source_inputs
        names = list(input_names) if input_names is not None else [f"x{i}" for i in range(n)]
        if len(names) != n:
            raise ValueError("need one name per source input")
        consts: list = [None] * self.width
        for line, bit in emb.constant_inputs.items():
            consts[line] = bit
            names.append(f"c{line}")
        outs: list = [None] * self.width
        for j, line in emb.output_lines.items():
            outs[line] = j
        return self.with_meta(line_names=names, constants=consts, outputs=outs)

    @property
    def num_inputs(self) -> int:
        return sum(1 for c in self.constants if c is None)

    @property
    def num_outputs(self) -> int:
        return sum(1 for o in self.outputs if o is not None)

    def input_lines(self) -> list:
        return [i for i, c in enumerate(self.constants) if c is None]

    def output_line(self, j: int) -> int:
        for line, o in enumerate(self.outputs):
            if o == j:
                return line
        raise IndexError(f"no line carries output {j}")

    def reversed_gates(self) -> "RevCircuit":
        """The inverse cascade; every gate is its own inverse."""
        return replace(self, gates=tuple(reversed(self.gates)))


def simulate(circ: RevCircuit, word: int) -> int:
    """Run one r-bit word through the cascade."""
    if not 0 <= word < 1 << circ.width:
        raise ValueError("word out of range for circuit width")
    for gate in circ.gates:
        word = gate.apply(word)
    return word


def _run_planes(circ: RevCircuit, planes: list, batch: int) -> list:
    """Apply the cascade to per-line bit planes over `batch` assignments."""
    full = (1 << batch) - 1
    for gate in circ.gates:
        fire = full
        for c in gate.positive_controls:
            fire &= planes[c]
        for c in gate.negative_controls:
            fire &= ~planes[c]
        planes[gate.target] ^= fire & full
    return planes


def simulate_source_batch(circ: RevCircuit, num_inputs: int | None = None) -> list:
    """Final value of every line across all source-input assignments.

    Bit x of entry L is line L's final value when the primary inputs (taken
    in ascending line order) spell x and constant lines hold their values.
    """
    inputs = circ.input_lines()
    n = len(inputs) if num_inputs is None else num_inputs
    if n != len(inputs):
        raise ValueError("num_inputs does not match the circuit's input lines")
    batch = 1 << n
    full = (1 << batch) - 1
    planes = []
    seen = 0
    for line in range(circ.width):
        c = circ.constants[line]
        if c is None:
            planes.append(_input_pattern(seen, n))
            seen += 1
        else:
            planes.append(full if c else 0)
    return _run_planes(circ, planes, batch)


def simulate_full(circ: RevCircuit) -> Permutation:
    """The permutation the cascade performs on all r-bit words."""
    r = circ.width
    if r > FULL_SIM_MAX_WIDTH:
        raise ValueError(f"width {r} too large for full simulation")
    planes = [_input_pattern(i, r) for i in range(r)]
    _run_planes(circ, planes, 1 << r)
    images = [0] * (1 << r)
    for line, plane in enumerate(planes):
        while plane:
            low = plane & -plane
            images[low.bit_length() - 1] |= 1 << line
            plane ^= low
    return Permutation(r, tuple(images))


def _embedding_from_meta(circ: RevCircuit) -> Embedding:
    inputs = circ.input_lines()
    if inputs != list(range(len(inputs))):
        raise ValueError("derived embeddings need the inputs on the low lines")
    return Embedding(
        source_inputs=len(inputs),
        source_outputs=circ.num_outputs,
        width=circ.width,
        constant_inputs={i: c for i, c in enumerate(circ.constants) if c is not None},
        output_lines={o: i for i, o in enumerate(circ.outputs) if o is not None},
        garbage_lines=tuple(i for i, o in enumerate(circ.outputs) if o is None),
    )


def verify_circuit(circ: RevCircuit, tt: TruthTable, emb: Embedding | None = None) -> bool:
    """True iff the circuit computes the table on its output lines.

    Constants are driven from the embedding (or the circuit's own metadata
    when emb is None) and every source assignment is checked at once.
    """
    if emb is None:
        emb = _embedding_from_meta(circ)
    if emb.width != circ.width:
        raise ValueError("embedding width does not match circuit")
    if emb.source_inputs != tt.num_inputs or emb.source_outputs != tt.num_outputs:
        raise ValueError("embedding shape does not match the table")
    n = tt.num_inputs
    batch = 1 << n
    full = (1 << batch) - 1
    planes = []
    for line in range(circ.width):
        if line < n:
            planes.append(_input_pattern(line, n))
        else:
            planes.append(full if emb.constant_inputs[line] else 0)
    _run_planes(circ, planes, batch)
    for j, line in emb.output_lines.items():
        if planes[line] != tt.output_column(j):
            return False
    return True


# --- cost accounting ---------------------------------------------------


def _default_t_cost(controls: int) -> int:
    if controls <= 1:
        return 0
    if controls == 2:
        return 7
    return 8 * (controls - 2) + 7


@dataclass(frozen=True)
class CostModel:
    """T-gate cost per Toffoli as a function of its control count.

    Entries in overrides replace the built-in schedule at those control
    counts; everything else falls back to the default.
    """

    overrides: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for c, t in self.overrides:
            if c < 0 or t < 0:
                raise ValueError("cost entries must be non-negative")
            if c in seen:
                raise ValueError(f"duplicate cost entry for {c} controls")
            seen.add(c)
        limit = max((c for c, _ in self.overrides), default=0) + 2
        prev = self.t_of_controls(0)
        for c in range(1, limit + 1):
            cur = self.t_of_controls(c)
            if cur < prev:
                raise ValueError("cost must not decrease with more controls")
            prev = cur

    def t_of_controls(self, controls: int) -> int:
        for c, t in self.overrides:
            if c == controls:
                return t
        return _default_t_cost(controls)

    @classmethod
    def parse(cls, text: str, path: str = "<cost>") -> "CostModel":
        entries = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, sep, tail = line.partition(":")
            if not sep:
                raise ParseError("expected 'controls: t-cost'", path, lineno)
            try:
                entries.append((int(head.strip()), int(tail.strip())))
            except ValueError:
                raise ParseError(f"bad cost entry {line!r}", path, lineno) from None
        try:
            return cls(tuple(entries))
        except ValueError as exc:
            raise ParseError(str(exc), path, 0) from None

    @classmethod
    def from_file(cls, path) -> "CostModel":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read(), str(path))


DEFAULT_COST_MODEL = CostModel()


@dataclass(frozen=True)
class CostReport:
    qubits: int
    gate_count: int
    t_count: int
    control_histogram: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict:
        return {
            "qubits": self.qubits,
            "gate_count": self.gate_count,
            "t_count": self.t_count,
            "control_histogram": {str(c): k for c, k in self.control_histogram},
        }


def cost_report(circ: RevCircuit, model: CostModel = DEFAULT_COST_MODEL) -> CostReport:
    hist: dict[int, int] = {}
    t_total = 0
    for gate in circ.gates:
        c = gate.num_controls
        hist[c] = hist.get(c, 0) + 1
        t_total += model.t_of_controls(c)
    return CostReport(
        qubits=circ.width,
        gate_count=len(circ.gates),
        t_count=t_total,
        control_histogram=tuple(sorted(hist.items())),
    )


# --- circuit file format -----------------------------------------------


def write_real(circ: RevCircuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(".version 2.0\n")
        fh.write(f".numvars {circ.width}\n")
        fh.write(".variables " + " ".join(circ.line_names) + "\n")
        consts = "".join("-" if c is None else str(c) for c in circ.constants)
        fh.write(f".constants {consts}\n")
        garbage = "".join("1" if o is None else "-" for o in circ.outputs)
        fh.write(f".garbage {garbage}\n")
        fh.write(".begin\n")
        for gate in circ.gates:
            ordered = sorted(gate.positive_controls | gate.negative_controls)
            parts = []
            for line in ordered:
                name = circ.line_names[line]
                parts.append(f"-{name}" if line in gate.negative_controls else name)
            parts.append(circ.line_names[gate.target])
            fh.write(f"t{len(parts)} " + " ".join(parts) + "\n")
        fh.write(".end\n")


def read_real(path) -> RevCircuit:
    width = None
    names: list | None = None
    constants = None
    outputs = None
    gates: list[MctGate] = []
    in_body = False
    ended = False

    def fail(msg, lineno):
        raise ParseError(msg, str(path), lineno)

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ended:
                fail("content after .end", lineno)
            tokens = line.split()
            key = tokens[0]
            if key == ".version":
                continue
            if key == ".numvars":
                if len(tokens) != 2 or not tokens[1].isdigit():
                    fail("bad .numvars", lineno)
                width = int(tokens[1])
                continue
            if key == ".variables":
                if width is None:
                    fail(".variables before .numvars", lineno)
                names = tokens[1:]
                if len(names) != width or len(set(names)) != width:
                    fail(f"expected {width} distinct variable names", lineno)
                continue
            if key == ".constants":
                if width is None or len(tokens) != 2 or len(tokens[1]) != width:
                    fail("bad .constants", lineno)
                if set(tokens[1]) - set("01-"):
                    fail("constants must be 0, 1 or -", lineno)
                constants = tuple(None if ch == "-" else int(ch) for ch in tokens[1])
                continue
            if key == ".garbage":
                if width is None or len(tokens) != 2 or len(tokens[1]) != width:
                    fail("bad .garbage", lineno)
                if set(tokens[1]) - set("1-"):
                    fail("garbage must be 1 or -", lineno)
                nxt = 0
                outs = []
                for ch in tokens[1]:
                    if ch == "1":
                        outs.append(None)
                    else:
                        outs.append(nxt)
                        nxt += 1
                outputs = tuple(outs)
                continue
            if key == ".begin":
                if names is None:
                    fail(".begin before .variables", lineno)
                index = {name: i for i, name in enumerate(names)}
                in_body = True
                continue
            if key == ".end":
                if not in_body:
                    fail(".end before .begin", lineno)
                ended = True
                continue
            if key.startswith("."):
                fail(f"unknown directive {key}", lineno)
            if not in_body:
                fail("gate outside .begin/.end", lineno)
            if not (key[0] == "t" and key[1:].isdigit()):
                fail(f"unknown gate kind {key!r}", lineno)
            arity = int(key[1:])
            operands = tokens[1:]
            if arity < 1 or len(operands) != arity:
                fail(f"gate {key} expects {arity} operands", lineno)
            pos, neg = set(), set()
            for op in operands[:-1]:
                negated = op.startswith("-")
                name = op[1:] if negated else op
                if name not in index:
                    fail(f"unknown line {name!r}", lineno)
                (neg if negated else pos).add(index[name])
            if operands[-1] not in index:
                fail(f"unknown line {operands[-1]!r}", lineno)
            try:
                gates.append(MctGate(index[operands[-1]], frozenset(pos), frozenset(neg)))
            except ValueError as exc:
                fail(str(exc), lineno)

    if width is None or names is None:
        raise ParseError("missing .numvars/.variables", str(path), 0)
    if not ended:
        raise ParseError("missing .end", str(path), 0)
    if constants is None:
        constants = (None,) * width
    if outputs is None:
        outputs = tuple(range(width))
    try:
        return RevCircuit(width, tuple(gates), tuple(names), constants, outputs)
    except ValueError as exc:
        raise ParseError(str(exc), str(path), 0) from None
