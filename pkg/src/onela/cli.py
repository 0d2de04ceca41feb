"""Command-line interface.

Exit status: 0 on success, Accept or Equal; 1 on Reject, Counterexample or a
failed check; 2 on usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import gap_experiment, language_equiv_bounded
from .conversions import Counterexample, determinize, dfa_equiv, la_to_ownfa, minimize_dfa
from .core import InvalidAutomaton, LimitedAutomaton, OneWayDFA, OneWayNFA, classify, split_word, validate
from .execution import ExplorationLimitExceeded, decide_acceptance, trace_deterministic, LoopReport
from .formats import FormatError, export_dot, parse, printable, serialize
from .twoway import compile_twdfa
from .witnesses import (
    Certified,
    gen_jn_damla,
    gen_kn_omla,
    jn_fooling_set,
    jn_member,
    kn_member,
    verify_fooling_set,
)

OK, NO, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path):
    machine = parse(_read(path))
    if isinstance(machine, LimitedAutomaton):
        diags = validate(machine)
        if diags:
            raise InvalidAutomaton(diags)
    return machine


def _require_la(machine, what):
    if not isinstance(machine, LimitedAutomaton):
        raise UsageError(f"{what} needs an LA1 document")
    return machine


def _to_dfa(machine) -> OneWayDFA:
    if isinstance(machine, LimitedAutomaton):
        return determinize(la_to_ownfa(machine))
    if isinstance(machine, OneWayDFA):
        return machine
    return determinize(machine)


def _emit(args, text: str, report: dict) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args):
    machine = parse(_read(args.file))
    diags = validate(machine) if isinstance(machine, LimitedAutomaton) else []
    if diags:
        text = "\n".join(f"invalid: {d}" for d in diags)
        _emit(args, text, {"valid": False, "diagnostics": [str(d) for d in diags]})
        return ERROR
    _emit(args, "valid", {"valid": True, "diagnostics": []})
    return OK


def cmd_classify(args):
    machine = _require_la(_load(args.file), "classify")
    profile = classify(machine).as_dict()
    text = "\n".join(f"{k}: {'yes' if v else 'no'}" for k, v in profile.items())
    _emit(args, text, {"states": len(machine.states), **profile})
    return OK


def cmd_run(args):
    machine = _load(args.file)
    word = args.word
    if isinstance(machine, LimitedAutomaton):
        if args.trace and classify(machine).deterministic:
            result = trace_deterministic(machine, word)
            if isinstance(result, LoopReport):
                lines = [c.render() for c in result.trace.configurations]
                lines.append(f"Reject (loop: {result.reason})")
                _emit(args, "\n".join(lines), {"outcome": "Reject", "loop": result.reason})
                return NO
            accepted = result.accepted
            lines = [c.render() for c in result.configurations]
        else:
            verdict = decide_acceptance(machine, word, args.node_limit, certificate=args.trace)
            accepted = verdict.accepted
            lines = [c.render() for c in verdict.certificate.configurations] if verdict.certificate else []
    else:
        accepted = machine.accepts(split_word(word, machine.alphabet))
        lines = []
    outcome = "Accept" if accepted else "Reject"
    _emit(args, "\n".join(lines + [outcome]), {"outcome": outcome, "word": word,
                                               "trace": lines if args.trace else None})
    return OK if accepted else NO


def cmd_convert(args):
    machine = _load(args.file)
    if args.to == "nfa":
        result = la_to_ownfa(_require_la(machine, "--to nfa"))
    elif args.to == "dfa":
        result = _to_dfa(machine)
    elif args.to == "min-dfa":
        result = minimize_dfa(_to_dfa(machine))
    else:
        comp = compile_twdfa(_require_la(machine, "--to twdfa"))
        result = comp.machine
    result = printable(result)
    text = f"# {args.to}: {len(result.states)} states\n" + serialize(result)
    _emit(args, text, {"target": args.to, "states": len(result.states), "source_states": len(machine.states)})
    return OK


def cmd_equiv(args):
    a, b = _load(args.a), _load(args.b)
    if args.max_len is not None:
        verdict = language_equiv_bounded(a, b, args.max_len)
        mode = f"bounded, words up to length {args.max_len}"
    else:
        verdict = dfa_equiv(minimize_dfa(_to_dfa(a)), minimize_dfa(_to_dfa(b)))
        mode = "exact"
    if isinstance(verdict, Counterexample):
        _emit(args, f"Counterexample: {str(verdict) or '(empty word)'}",
              {"outcome": "Counterexample", "word": list(verdict.word), "mode": mode})
        return NO
    _emit(args, "Equal", {"outcome": "Equal", "mode": mode})
    return OK


def cmd_gen(args):
    machine = gen_kn_omla(args.n) if args.family == "kn" else gen_jn_damla(args.n)
    _emit(args, serialize(machine), {"family": args.family, "n": args.n, "states": len(machine.states)})
    return OK


def cmd_oracle(args):
    member = kn_member if args.family == "kn" else jn_member
    accepted = member(args.n, args.word)
    outcome = "Accept" if accepted else "Reject"
    _emit(args, outcome, {"family": args.family, "n": args.n, "word": args.word, "outcome": outcome})
    return OK if accepted else NO


def cmd_fooling(args):
    member = kn_member if args.family == "kn" else jn_member
    verdict = verify_fooling_set(lambda w: member(args.n, w), jn_fooling_set(args.n))
    if isinstance(verdict, Certified):
        _emit(args, f"Certified({verdict.size})", {"outcome": "Certified", "size": verdict.size})
        return OK
    _emit(args, f"Violation({verdict.i}, {verdict.j}): {verdict.reason}",
          {"outcome": "Violation", "i": verdict.i, "j": verdict.j, "reason": verdict.reason})
    return NO


def cmd_experiment(args):
    report = gap_experiment(args.family, range(1, args.max_n + 1), args.max_len)
    _emit(args, report.format_table(), report.to_dict(timings=args.timings))
    return OK if report.passed else NO


def cmd_export_dot(args):
    machine = parse(_read(args.file))
    text = export_dot(machine)
    _emit(args, text, {"kind": type(machine).__name__, "states": len(machine.states)})
    return OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="onela", description="1-limited automata toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text, file=True):
        p = sub.add_parser(name, help=help_text)
        if file:
            p.add_argument("file", nargs="?", default="-", help="automaton document (default: stdin)")
        p.add_argument("--out", help="also write a JSON report to this path")
        p.set_defaults(func=func)
        return p

    command("validate", cmd_validate, "check a document and its machine")
    command("classify", cmd_classify, "report determinism and marking disciplines")
    p = sub.add_parser("run", help="decide acceptance of a word")
    p.add_argument("file")
    p.add_argument("word")
    p.add_argument("--trace", action="store_true", help="print the computation")
    p.add_argument("--node-limit", type=int, default=2_000_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)
    p = command("convert", cmd_convert, "convert to a one-way or two-way machine")
    p.add_argument("--to", required=True, choices=["nfa", "dfa", "min-dfa", "twdfa"])
    p = sub.add_parser("equiv", help="compare the languages of two machines")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--max-len", type=int, help="compare by enumeration up to this length")
    p.add_argument("--out")
    p.set_defaults(func=cmd_equiv)
    p = command("gen", cmd_gen, "print a witness machine", file=False)
    p.add_argument("family", choices=["kn", "jn"])
    p.add_argument("--n", type=int, required=True)
    p = command("oracle", cmd_oracle, "membership in a witness language", file=False)
    p.add_argument("family", choices=["kn", "jn"])
    p.add_argument("word")
    p.add_argument("--n", type=int, required=True)
    p = command("fooling", cmd_fooling, "certify the fooling set lower bound", file=False)
    p.add_argument("--family", choices=["kn", "jn"], default="jn")
    p.add_argument("--n", type=int, required=True)
    p = command("experiment", cmd_experiment, "size-gap experiment", file=False)
    p.add_argument("--family", choices=["kn", "jn"], required=True)
    p.add_argument("--max-n", type=int, default=2)
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--timings", action="store_true", help="include runtimes in the JSON report")
    command("export-dot", cmd_export_dot, "Graphviz rendering of a machine")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except InvalidAutomaton as exc:
        print(f"invalid automaton: {exc}", file=sys.stderr)
    except (UsageError, ValueError, OSError, ExplorationLimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
