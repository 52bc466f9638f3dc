"""``moncomp`` command line.

JSON goes to standard output, human-readable summaries to standard error
(suppressed by ``--json``). Exit codes: 0 success, 1 usage or parse error,
2 out of fuel or measure undefined, 3 property violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import complexity as cx
from . import diagram as dg
from . import grading
from .corpus import CorpusError, default_corpus_path, generate_corpus, load_corpus, write_corpus
from .machine.codec import encode_program, encode_trace
from .machine.interp import CostModel, cost_model, current_costs, run
from .machine.syntax import ProgramSyntaxError, parse_program
from .machine.tree import TreeSyntaxError, format_tree, parse_tree
from .suites import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_UNDEFINED, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fuel(text: str):
    if text in ("inf", "infinity"):
        return grading.INF_NAT
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"fuel must be a natural number or 'inf', got {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError("fuel must be non-negative")
    return grading.nat(n)


def _read_program(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read program: {exc}")
    try:
        return parse_program(text)
    except ProgramSyntaxError as exc:
        raise UsageError(f"{path}: {exc}")


def _read_tree(text: str):
    """A tree literal, or the contents of an existing ``.tree`` file."""
    if text.endswith(".tree") and Path(text).is_file():
        text = Path(text).read_text()
    try:
        return parse_tree(text)
    except TreeSyntaxError as exc:
        raise UsageError(f"bad tree literal: {exc}")


def _emit(args, payload, table: str | None = None) -> None:
    print(json.dumps(payload, indent=None if args.json else 1))
    if table and not args.json:
        print(table, file=sys.stderr)


def _corpus(args):
    path = Path(args.corpus) if args.corpus else default_corpus_path()
    try:
        return load_corpus(path)
    except (CorpusError, OSError, ProgramSyntaxError, TreeSyntaxError) as exc:
        raise UsageError(f"corpus {path}: {exc}")


# -- commands -----------------------------------------------------------------

def cmd_run(args) -> int:
    out = run(_read_program(args.program), _read_tree(args.input), args.fuel)
    _emit(args, out.to_json(with_trace=False),
          f"halted={out.halted} value={format_tree(out.value) if out.halted else '-'}"
          f" time={out.time if out.halted else '-'}")
    return EXIT_OK if out.halted else EXIT_UNDEFINED


def cmd_trace(args) -> int:
    out = run(_read_program(args.program), _read_tree(args.input), args.fuel)
    payload = out.to_json(with_trace=True)
    trace = out.trace if out.halted else out.partial
    payload["trace_code"] = format_tree(encode_trace(trace))
    _emit(args, payload, f"{len(trace.configs)} configurations, complete={trace.complete}")
    return EXIT_OK if out.halted else EXIT_UNDEFINED


def cmd_measure(args) -> int:
    m = cx.MEASURES[args.kind]
    code = encode_program(_read_program(args.program))
    g = cx.measure(m, code, _read_tree(args.input), args.cap)
    _emit(args, {"measure": m.name, "grade": None if g is None else g.to_json()},
          f"{m.name} = {'undefined within cap' if g is None else g.value}")
    return EXIT_OK if g is not None else EXIT_UNDEFINED


def cmd_mu(args) -> int:
    code = encode_program(_read_program(args.program))
    a = _read_tree(args.input)
    x = cx.mu_search_effective(code, a, args.cap)
    payload = {"found": x is not None, "trace_code": None if x is None else format_tree(x),
               "trace_size": None if x is None else x.size,
               "output": None if x is None else format_tree(cx.extract_output(x))}
    if args.naive_cap:
        y = cx.mu_search_naive(code, a, args.naive_cap)
        payload["naive"] = {"found": y is not None, "agrees": y is x}
        if y is not None and y is not x:
            _emit(args, payload, "blind search disagrees with the machine")
            return EXIT_VIOLATION
    _emit(args, payload, f"trace found: {x is not None}")
    return EXIT_OK if x is not None else EXIT_UNDEFINED


def cmd_nf_check(args) -> int:
    rows, bad = [], 0
    for e in _corpus(args):
        code = encode_program(e.program)
        full = run(e.program, e.input, e.fuel or args.cap)
        fuels = [0, args.cap] + ([full.time - 1, full.time, full.time + 1] if full.halted else [])
        for n in sorted({f for f in fuels if f >= 0}):
            got = cx.normal_form_eval(code, e.input, n)
            want = run(e.program, e.input, n)
            ok = (got is None) == (not want.halted) and (got is None or got is want.value)
            bad += not ok
            rows.append({"id": e.id, "fuel": n, "defined": got is not None, "ok": ok})
    _emit(args, {"checks": rows, "failures": bad}, f"{len(rows)} checks, {bad} failures")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_blum(args) -> int:
    m = cx.MEASURES[args.kind]
    reports = []
    for e in _corpus(args):
        code = encode_program(e.program)
        out = run(e.program, e.input, args.cap)
        if out.halted:
            v = out.time if m is cx.TIME else out.space
            bounds = sorted({max(0, v - 1), v, v + 1})
        else:
            bounds = [0, 10, 50]
        reports.append({"id": e.id, **cx.blum_report(m, code, e.input, args.cap, bounds).to_json()})
    bad = sum(not r["ok"] for r in reports)
    _emit(args, {"measure": m.name, "reports": reports, "failures": bad},
          f"{len(reports)} programs, {bad} failures")
    return EXIT_VIOLATION if bad else EXIT_OK


def _load_diagram(path: str):
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read diagram: {exc}")
    env = {}
    if "diagram" in data:
        env = {k: dg.finrel_from_json(v) for k, v in data.get("env", {}).items()}
        data = data["diagram"]
    try:
        return dg.diagram_from_json(data), env
    except (dg.DiagramError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad diagram: {exc}")


def cmd_diagram(args) -> int:
    d, env = _load_diagram(args.file)
    if args.action == "normalize":
        try:
            nf = dg.spider_normalize(d)
        except dg.UnsupportedFragment as exc:
            raise UsageError(str(exc))
        _emit(args, nf.to_json(), "\n".join(" ".join(b) for b in nf.to_json()["blocks"]))
    else:
        try:
            rel = dg.finrel_eval(d, args.carrier, env)
        except KeyError as exc:
            raise UsageError(f"no relation given for box {exc}")
        _emit(args, rel.to_json(), f"{len(rel.pairs)} related pairs")
    return EXIT_OK


def cmd_suite(args) -> int:
    mutation = {"none": current_costs(), "admin": CostModel(admin=1),
                "statement": CostModel(statement=2), "expr": CostModel(expr_node=2)}[args.mutant]
    with cost_model(mutation):
        results = run_suite(args.name, args.seed, args.cases)
    failures = sum(not r.ok for r in results)
    table = "\n".join(f"{'PASS' if r.ok else 'FAIL'} {r.name:32} {r.cases:7d} cases"
                      f" {r.failures:5d} failed  {r.seconds:6.2f}s  {r.law}" for r in results)
    _emit(args, {"suite": args.name, "seed": args.seed, "cases": args.cases, "mutant": args.mutant,
                 "laws": [r.to_json() for r in results], "failures": failures}, table)
    return EXIT_VIOLATION if failures else EXIT_OK


def cmd_corpus(args) -> int:
    entries = generate_corpus(args.seed, args.count)
    write_corpus(args.dir, entries)
    _emit(args, {"dir": args.dir, "entries": len(entries)}, f"wrote {len(entries)} entries to {args.dir}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON only, no summary on stderr")

    parser = argparse.ArgumentParser(prog="moncomp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def program_cmd(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("program", help="program file (.while), or - for stdin")
        p.add_argument("input", help="tree literal such as '(() . ())', or a .tree file")
        p.set_defaults(fn=fn)
        return p

    p = program_cmd("run", cmd_run, "run a program and print its outcome")
    p.add_argument("--fuel", type=_fuel, default=grading.nat(10**6))
    p = program_cmd("trace", cmd_trace, "run a program and print its full trace")
    p.add_argument("--fuel", type=_fuel, default=grading.nat(10**6))
    p = program_cmd("measure", cmd_measure, "time or space of a run, read off its trace")
    p.add_argument("--kind", choices=sorted(cx.MEASURES), default="time")
    p.add_argument("--cap", type=_fuel, default=grading.nat(10**6))
    p = program_cmd("mu", cmd_mu, "search for the trace of a run")
    p.add_argument("--cap", type=_fuel, default=grading.nat(10**6))
    p.add_argument("--naive-cap", type=int, default=0,
                   help="also enumerate up to this many candidate trees blindly")

    p = sub.add_parser("nf-check", parents=[common], help="normal form against direct runs on a corpus")
    p.add_argument("--corpus", help="corpus directory (default: $MONCOMP_CORPUS or the bundled one)")
    p.add_argument("--cap", type=int, default=20_000)
    p.set_defaults(fn=cmd_nf_check)

    p = sub.add_parser("blum", parents=[common], help="Blum conditions on a corpus")
    p.add_argument("--corpus")
    p.add_argument("--kind", choices=sorted(cx.MEASURES), default="time")
    p.add_argument("--cap", type=int, default=5_000)
    p.set_defaults(fn=cmd_blum)

    p = sub.add_parser("diagram", parents=[common], help="normalize or evaluate a diagram file")
    p.add_argument("action", choices=["normalize", "eval"])
    p.add_argument("file")
    p.add_argument("--carrier", type=int, default=2)
    p.set_defaults(fn=cmd_diagram)

    p = sub.add_parser("suite", parents=[common], help="run a seeded property suite")
    p.add_argument("name", choices=sorted(SUITES) + ["all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--mutant", choices=["none", "admin", "statement", "expr"], default="none",
                   help="run under a cost model with one charge off by one")
    p.set_defaults(fn=cmd_suite)

    p = sub.add_parser("corpus", parents=[common], help="generate a seeded corpus directory")
    p.add_argument("dir")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=240)
    p.set_defaults(fn=cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if getattr(args, "carrier", 1) < 1:
        print("moncomp: --carrier must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"moncomp: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
