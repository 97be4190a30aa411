"""Command-line pipeline: generate designs, synthesize, verify, report.

Each run of synth/stats prints one JSON record per result on stdout so
sweeps can be post-processed with standard tools.  Exit codes: 0 success,
1 verification mismatch, 2 operational error (bad arguments, unreadable
files, size limits).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from pathlib import Path

from .arith import Design, DesignSpec, design_truth_table, design_xmg
from .embedding import bennett_embed, optimum_embed
from .logicnet import (
    DEFAULT_TT_LIMIT,
    EsopForm,
    ParseError,
    TableLimitError,
    TruthTable,
    _check_limit,
    esop_from_tt,
    esop_minimize,
    read_pla,
    read_xmg,
    write_pla,
    write_xmg,
)
from .revcirc import (
    DEFAULT_COST_MODEL,
    CostModel,
    cost_report,
    read_real,
    simulate_source_batch,
    write_real,
)
from .synth_esop import esop_share_cubes, esop_synth
from .synth_functional import tbs
from .synth_hier import hier_synth, inplace_xor_opt

__all__ = ["main", "read_tt_file", "write_tt_file"]

_STAMP = re.compile(r"#\s*design=(\w+)\s+n=(\d+)")


class CliError(Exception):
    """Operational failure reported on stderr with exit code 2."""


def tt_limit() -> int:
    raw = os.environ.get("REVFLOW_TT_LIMIT")
    if raw is None:
        return DEFAULT_TT_LIMIT
    try:
        value = int(raw)
    except ValueError:
        raise CliError(f"REVFLOW_TT_LIMIT must be an integer, got {raw!r}") from None
    if value < 1:
        raise CliError("REVFLOW_TT_LIMIT must be positive")
    return value


# --- plain truth-table text: one binary output word per line -------------


def write_tt_file(tt: TruthTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in tt.rows:
            fh.write(format(row, f"0{max(tt.num_outputs, 1)}b") + "\n")


def read_tt_file(path, limit: int | None = None) -> TruthTable:
    words = []
    name = str(path)
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            if set(text) - set("01"):
                raise ParseError("rows must be binary words", name, lineno)
            words.append(text)
    if not words:
        raise ParseError("no rows", name, 0)
    n = (len(words) - 1).bit_length()
    if 1 << n != len(words):
        raise ParseError(f"{len(words)} rows is not a power of two", name, 0)
    m = len(words[0])
    if any(len(w) != m for w in words):
        raise ParseError("rows differ in width", name, 0)
    _check_limit(n, limit)
    return TruthTable(n, m, tuple(int(w, 2) for w in words))


# --- shared plumbing ------------------------------------------------------


def _parse_design(name: str) -> Design:
    return Design(name)


def _make_spec(design: str, n: int) -> DesignSpec:
    try:
        return DesignSpec(_parse_design(design), n)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _stamp_file(path, design: str, n: int) -> None:
    text = Path(path).read_text(encoding="utf-8")
    Path(path).write_text(f"# design={design} n={n}\n" + text, encoding="utf-8")


def _sniff_stamp(path) -> tuple[str | None, int | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            for _ in range(3):
                line = fh.readline()
                if not line:
                    break
                m = _STAMP.search(line)
                if m:
                    return m.group(1), int(m.group(2))
    except OSError:
        pass
    return None, None


def _load_esop(path: Path, limit: int) -> EsopForm:
    if path.suffix == ".pla":
        return read_pla(path)
    return esop_from_tt(read_tt_file(path, limit))


def _report(record: dict) -> None:
    print(json.dumps(record, sort_keys=True))


def _synth_circuit(method: str, path: Path, args, limit: int):
    """Run one synthesis flow on an input file; returns the circuit."""
    suffix = path.suffix
    if method == "hier":
        if suffix != ".xmg":
            raise CliError("method hier needs an .xmg input")
        net = read_xmg(path)
        circ = hier_synth(net, args.cleanup)
        if args.inplace_xor:
            circ = inplace_xor_opt(net, circ)
        return circ
    if suffix == ".xmg":
        raise CliError(f"method {method} needs a .pla or truth-table input")
    if method == "functional":
        if suffix == ".pla":
            table = read_pla(path).to_truth_table(limit)
        else:
            table = read_tt_file(path, limit)
        embed = optimum_embed if args.embedding == "optimum" else bennett_embed
        perm, emb = embed(table)
        return tbs(perm, embedding=emb)
    if method == "esop":
        esop = _load_esop(path, limit)
        if not args.no_minimize:
            esop = esop_minimize(esop)
        circ = esop_synth(esop)
        if args.share_cubes:
            circ = esop_share_cubes(esop, circ)
        return circ
    raise CliError(f"unknown method {method!r}")


# --- subcommands ----------------------------------------------------------


def cmd_gen(args) -> int:
    spec = _make_spec(args.design, args.bits)
    limit = tt_limit()
    out = Path(args.output)
    if args.format == "xmg":
        write_xmg(design_xmg(spec), out)
    elif args.format == "pla":
        write_pla(esop_from_tt(design_truth_table(spec, limit)), out)
    else:
        write_tt_file(design_truth_table(spec, limit), out)
    _stamp_file(out, args.design, args.bits)
    return 0


def cmd_synth(args) -> int:
    t0 = time.perf_counter()
    path = Path(args.input)
    circ = _synth_circuit(args.method, path, args, tt_limit())
    write_real(circ, args.output)
    design, n = _sniff_stamp(path)
    rep = cost_report(circ)
    record = rep.as_dict()
    record.update(
        design=design,
        n=n,
        method=args.method,
        gates=record.pop("gate_count"),
        runtime_s=round(time.perf_counter() - t0, 6),
    )
    _report(record)
    return 0


def cmd_verify(args) -> int:
    circ = read_real(args.circuit)
    spec = _make_spec(args.design, args.bits)
    table = design_truth_table(spec, tt_limit())
    if circ.num_inputs != table.num_inputs or circ.num_outputs != table.num_outputs:
        raise CliError(
            f"circuit has {circ.num_inputs} inputs / {circ.num_outputs} outputs, "
            f"design needs {table.num_inputs} / {table.num_outputs}"
        )
    planes = simulate_source_batch(circ)
    counterexample = None
    for j in range(table.num_outputs):
        diff = planes[circ.output_line(j)] ^ table.output_column(j)
        if diff:
            x = (diff & -diff).bit_length() - 1
            if counterexample is None or x < counterexample["x"]:
                counterexample = {
                    "x": x,
                    "output": j,
                    "got": planes[circ.output_line(j)] >> x & 1,
                    "want": table.output_column(j) >> x & 1,
                }
    _report(
        {
            "design": args.design,
            "n": args.bits,
            "verified": counterexample is None,
            "counterexample": counterexample,
        }
    )
    return 0 if counterexample is None else 1


def _parse_sweep(text: str) -> range:
    m = re.fullmatch(r"(\d+)\.\.(\d+)", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise CliError(f"bad sweep range {text!r}, expected A..B")
    return range(int(m.group(1)), int(m.group(2)) + 1)


def cmd_stats(args) -> int:
    if args.sweep is None:
        if args.circuit is None:
            raise CliError("stats needs a circuit file or --sweep")
        circ = read_real(args.circuit)
        model = CostModel.from_file(args.cost_model) if args.cost_model else DEFAULT_COST_MODEL
        _report(cost_report(circ, model).as_dict())
        return 0
    if args.circuit is not None:
        raise CliError("--sweep replaces the circuit argument")
    if args.design is None or args.method is None:
        raise CliError("--sweep needs --design and --method")
    limit = tt_limit()
    model = CostModel.from_file(args.cost_model) if args.cost_model else DEFAULT_COST_MODEL
    for n in _parse_sweep(args.sweep):
        t0 = time.perf_counter()
        spec = _make_spec(args.design, n)
        if args.method == "hier":
            net = design_xmg(spec)
            circ = hier_synth(net, args.cleanup)
        elif args.method == "functional":
            table = design_truth_table(spec, limit)
            embed = optimum_embed if args.embedding == "optimum" else bennett_embed
            perm, emb = embed(table)
            circ = tbs(perm, embedding=emb)
        else:
            esop = esop_minimize(esop_from_tt(design_truth_table(spec, limit)))
            circ = esop_synth(esop)
        rep = cost_report(circ, model)
        record = rep.as_dict()
        record.update(
            design=args.design,
            n=n,
            method=args.method,
            gates=record.pop("gate_count"),
            runtime_s=round(time.perf_counter() - t0, 6),
        )
        _report(record)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revflow",
        description="Reversible-logic synthesis flows for reciprocal designs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a reciprocal design file")
    gen.add_argument("--design", choices=[d.value for d in Design], required=True)
    gen.add_argument("-n", "--bits", type=int, required=True, help="output bit width")
    gen.add_argument("--format", choices=("xmg", "pla", "tt"), default="xmg")
    gen.add_argument("-o", "--output", required=True)
    gen.set_defaults(func=cmd_gen)

    synth = sub.add_parser("synth", help="compile a design file to a REAL circuit")
    synth.add_argument("input")
    synth.add_argument("--method", choices=("functional", "esop", "hier"), required=True)
    synth.add_argument("-o", "--output", required=True)
    synth.add_argument("--embedding", choices=("optimum", "bennett"), default="optimum",
                       help="embedding for the functional flow")
    synth.add_argument("--no-minimize", action="store_true",
                       help="esop flow: skip cube minimization")
    synth.add_argument("--share-cubes", action="store_true",
                       help="esop flow: fan multi-output cubes out with CNOTs")
    synth.add_argument("--cleanup", choices=("bennett", "eager"), default="bennett",
                       help="hier flow: ancilla cleanup strategy")
    synth.add_argument("--inplace-xor", action="store_true",
                       help="hier flow: fuse single-reader xor operands in place")
    synth.set_defaults(func=cmd_synth)

    verify = sub.add_parser("verify", help="check a REAL circuit against a design oracle")
    verify.add_argument("circuit")
    verify.add_argument("--design", choices=[d.value for d in Design], required=True)
    verify.add_argument("-n", "--bits", type=int, required=True)
    verify.set_defaults(func=cmd_verify)

    stats = sub.add_parser("stats", help="cost-report a circuit, or sweep a flow over n")
    stats.add_argument("circuit", nargs="?")
    stats.add_argument("--cost-model", help="file of 'controls: t-cost' overrides")
    stats.add_argument("--sweep", help="A..B: run gen+synth in memory for each n")
    stats.add_argument("--design", choices=[d.value for d in Design])
    stats.add_argument("--method", choices=("functional", "esop", "hier"))
    stats.add_argument("--cleanup", choices=("bennett", "eager"), default="bennett")
    stats.add_argument("--embedding", choices=("optimum", "bennett"), default="optimum")
    stats.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ParseError, TableLimitError) as exc:
        print(f"revflow: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"revflow: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"revflow: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
