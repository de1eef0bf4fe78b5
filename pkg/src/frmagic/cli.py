"""Command-line front end.

Exit status: 0 when the stage completed, 2 when a grounding limit or the
model cap was hit, 1 for usage, parse, safety and specification errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Iterable, List, Optional, TextIO

from . import __version__
from .analysis import (
    check_fr_safety,
    classify_edb_idb,
    component_graph,
    component_ordering,
    is_stratified,
    relevant_atoms,
)
from .errors import CapReached, FrMagicError, LimitExceeded
from .grounder import GroundingLimits, GroundProgram
from .magic import RewrittenProgram, dms_rewrite, seed_query
from .parser import parse_program, parse_query
from .pipeline import OutputFormat, PipelineConfig, Stage, ground_program, run_pipeline
from .solver import AnswerReport, EntailmentMode, stable_models
from .syntax import Program
from .tm import encode_machine, encode_query, parse_tm_spec

EXIT_OK, EXIT_ERROR, EXIT_LIMIT = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _query_text(args) -> Optional[str]:
    inline = getattr(args, "query", None)
    qfile = getattr(args, "query_file", None)
    if inline is not None and qfile is not None:
        raise UsageError("give the query inline or with --query-file, not both")
    if qfile is not None:
        return _read(qfile)
    return inline


def _limits(args) -> GroundingLimits:
    return GroundingLimits(args.max_ground_rules, args.max_iterations)


def format_model(m: Iterable) -> str:
    return "{" + ", ".join(sorted(str(a) for a in m)) + "}"


def _comp(c) -> str:
    return "{" + ", ".join(sorted(c)) + "}"


# ---------------------------------------------------------------------------
# renderers


def _emit_rewrite(out: TextIO, rw: RewrittenProgram, sections: bool) -> None:
    if not sections:
        out.write(str(rw.program))
        return
    for name, rules in rw.sections().items():
        out.write(f"% {name}\n")
        out.write(str(Program(rules)))


def _emit_ground(out: TextIO, g: GroundProgram, stats: bool, fmt: OutputFormat) -> None:
    out.write(str(g))
    if not stats:
        return
    for s in g.stats:
        if fmt is OutputFormat.RECORD:
            out.write(f"% component: {_comp(s.component)}\n% rules: {s.rules}\n% iterations: {s.iterations}\n")
        else:
            out.write(f"% {_comp(s.component)}: {s.rules} rule(s), {s.iterations} iteration(s)\n")


def _emit_models(out: TextIO, models, fmt: OutputFormat) -> None:
    if fmt is OutputFormat.RECORD:
        out.write(f"models: {len(models)}\n")
        for m in models:
            out.write(f"model: {format_model(m)}\n")
        return
    if not models:
        out.write("% no stable models\n")
    for m in models:
        out.write(format_model(m) + "\n")


def _emit_report(out: TextIO, r: AnswerReport, fmt: OutputFormat) -> None:
    verdict = "true" if r.answer else "false"
    witness = format_model(r.witness) if r.witness is not None else "none"
    if fmt is OutputFormat.RECORD:
        out.write(f"answer: {verdict}\nmode: {r.mode.value}\nmodels: {r.model_count}\nwitness: {witness}\n")
        return
    out.write(verdict + "\n")
    if r.model_count == 0:
        out.write("% no stable models\n")
    elif r.mode is EntailmentMode.BRAVE:
        label = "model containing the query" if r.answer else "a model"
        out.write(f"% {label}: {witness}\n")
    else:
        label = "a model" if r.answer else "counter-model"
        out.write(f"% {label}: {witness}\n")


def _emit_analysis(out: TextIO, p: Program, query, budget: int) -> None:
    split = classify_edb_idb(p)
    strat = is_stratified(p)
    cg = component_graph(p)
    out.write(f"stratified: {'yes' if strat else 'no'}\n")
    if not strat:
        out.write("cycle: " + ", ".join(f"{a} -{s}-> {b}" for a, b, s in strat.cycle) + "\n")
    out.write("edb: " + " ".join(sorted(split.edb_predicates)) + "\n")
    out.write("idb: " + " ".join(sorted(split.idb_predicates)) + "\n")
    out.write("components: " + " ".join(_comp(c) for c in sorted(cg.nodes, key=sorted)) + "\n")
    for src, dst, sign in sorted(cg.edges, key=lambda e: (sorted(e[0]), sorted(e[1]), e[2])):
        out.write(f"edge: {_comp(src)} -> {_comp(dst)} ({sign})\n")
    if strat:
        ordering = component_ordering(p)
        out.write("ordering: <" + ", ".join(_comp(c) for c in ordering) + ">\n")
    if query is not None:
        safety = check_fr_safety(p, query)
        out.write(f"fr-safe: {'yes' if safety else 'no'}\n")
        for v in safety.violations:
            out.write(f"violation: {v}\n")
        rel = relevant_atoms(p, query, budget)
        out.write(f"relevant: {len(rel.explored)} atom(s), {rel.status.value}\n")


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, out: TextIO) -> int:
    p = parse_program(_read(args.program))
    text = _query_text(args)
    q = parse_query(text) if text is not None else None
    _emit_analysis(out, p, q, args.budget)
    return EXIT_OK


def cmd_rewrite(args, out: TextIO) -> int:
    p = parse_program(_read(args.program), allow_magic=False)
    q = parse_query(_query_text(args))
    if args.seed:
        p, _ = seed_query(p, q)
    _emit_rewrite(out, dms_rewrite(p, q), args.sections)
    return EXIT_OK


def cmd_ground(args, out: TextIO) -> int:
    p = parse_program(_read(args.program))
    _, g = ground_program(p, _limits(args))
    _emit_ground(out, g, args.stats, OutputFormat(args.format))
    return EXIT_OK


def cmd_solve(args, out: TextIO) -> int:
    p = parse_program(_read(args.program))
    if all(r.ground for r in p.rules):
        g = GroundProgram.from_rules(p.rules)
    else:
        _, g = ground_program(p, _limits(args))
    fmt = OutputFormat(args.format)
    try:
        models = stable_models(g, cap=args.cap)
    except CapReached as exc:
        _emit_models(out, exc.models, fmt)
        raise
    _emit_models(out, models, fmt)
    return EXIT_OK


def cmd_query(args, out: TextIO) -> int:
    text = _query_text(args)
    if text is None:
        raise UsageError("a query is required (inline or --query-file)")
    p = parse_program(_read(args.program), allow_magic=False)
    q = parse_query(text)
    fmt = OutputFormat(args.format)
    config = PipelineConfig(EntailmentMode(args.mode), _limits(args), fmt, Stage(args.stop_after))
    res = run_pipeline(p, q, config)
    if res.stage is Stage.PARSE:
        out.write(str(p))
        out.write(f"{q}\n")
    elif res.stage is Stage.ANALYZE:
        _emit_analysis(out, p, q, args.budget)
    elif res.stage is Stage.REWRITE:
        _emit_rewrite(out, res.rewritten, False)
    elif res.stage is Stage.ORDER:
        out.write("ordering: <" + ", ".join(_comp(c) for c in res.ordering) + ">\n")
    elif res.stage is Stage.GROUND:
        _emit_ground(out, res.ground, False, fmt)
    elif res.stage is Stage.SOLVE:
        _emit_models(out, res.models, fmt)
    else:
        _emit_report(out, res.report, fmt)
    return EXIT_OK


def cmd_tm_compile(args, out: TextIO) -> int:
    m = parse_tm_spec(_read(args.spec))
    program = str(encode_machine(m))
    query = f"{encode_query(m, args.input)}\n"
    if args.program_out:
        Path(args.program_out).write_text(program)
    if args.query_out:
        Path(args.query_out).write_text(query)
    if not args.program_out:
        out.write(program)
    if not args.query_out:
        out.write(query)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=[m.value for m in EntailmentMode], default="cautious")
    common.add_argument("--max-ground-rules", type=int, default=GroundingLimits().max_ground_rules)
    common.add_argument("--max-iterations", type=int, default=GroundingLimits().max_iterations)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default="text")
    common.add_argument("--stop-after", choices=[s.value for s in Stage], default="answer")

    ap = argparse.ArgumentParser(prog="frmagic", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_query(sp, required):
        sp.add_argument("query", nargs=None if required else "?", default=None,
                        help="ground query such as 'p(a)?'")
        sp.add_argument("--query-file")

    sp = sub.add_parser("analyze", parents=[common], help="dependency structure and fr-safety")
    sp.add_argument("program")
    with_query(sp, False)
    sp.add_argument("--budget", type=int, default=10_000)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("rewrite", parents=[common], help="magic-set rewriting for a query")
    sp.add_argument("program")
    with_query(sp, False)
    sp.add_argument("--sections", action="store_true")
    sp.add_argument("--seed", action="store_true",
                    help="first add a fact carrying the query arguments when the query has new functors")
    sp.set_defaults(func=cmd_rewrite)

    sp = sub.add_parser("ground", parents=[common], help="intelligent instantiation")
    sp.add_argument("program")
    sp.add_argument("--stats", action="store_true")
    sp.set_defaults(func=cmd_ground)

    sp = sub.add_parser("solve", parents=[common], help="stable models")
    sp.add_argument("program")
    sp.add_argument("--cap", type=int, default=None)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("query", parents=[common], help="brave or cautious entailment")
    sp.add_argument("program")
    with_query(sp, False)
    sp.add_argument("--budget", type=int, default=10_000)
    sp.set_defaults(func=cmd_query)

    sp = sub.add_parser("tm-compile", parents=[common], help="Turing machine to program and query")
    sp.add_argument("spec")
    sp.add_argument("--input", default="", help="input string (one symbol per character)")
    sp.add_argument("--program-out")
    sp.add_argument("--query-out")
    sp.set_defaults(func=cmd_tm_compile)
    return ap


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        if args.command == "rewrite" and _query_text(args) is None:
            raise UsageError("a query is required (inline or --query-file)")
        return args.func(args, out)
    except (LimitExceeded, CapReached) as exc:
        err.write(f"frmagic: limit: {exc}\n")
        return EXIT_LIMIT
    except (FrMagicError, UsageError) as exc:
        err.write(f"frmagic: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
