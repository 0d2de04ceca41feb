"""Plain-text automaton documents and Graphviz export.

Grammar (one declaration per line, ``#`` starts a comment)::

    LA1                      # or NFA, DFA
    states: q0 q1 q2
    input: a b
    work: a b a' b' |- -|    # LA1 only, optional; full tape alphabet in order
    initial: q0
    final: q2
    transitions:
    q0, a -> q1, a', +1      # LA1: state, scanned -> target, write, move
    q1, -| -> q2, +1         # end-markers: the write is implied
    q0, a -> q1              # NFA/DFA: state, letter -> target

Letters and work symbols are ASCII identifiers without primes; ``x'`` is the
marked copy of input letter ``x``.  State names may use any characters except
whitespace, commas, ``>`` and ``#``.
"""

from __future__ import annotations

import re

from .core import (
    LEFT_END,
    RIGHT_END,
    LimitedAutomaton,
    OneWayDFA,
    OneWayNFA,
    TapeSymbol,
)

KINDS = ("LA1", "NFA", "DFA")
SECTIONS = ("states", "input", "work", "initial", "final", "transitions")
_LETTER = re.compile(r"[A-Za-z0-9_]+\Z")
_STATE = re.compile(r"[^\s,#>]+\Z")
_LA_RULE = re.compile(
    r"\s*(?P<q>[^,\s]+)\s*,\s*(?P<sym>\S+)\s+->\s*(?P<p>[^,\s]+)\s*"
    r"(?:,\s*(?P<w>[^,\s]+)\s*)?,\s*(?P<d>\S+)\s*\Z"
)
_FA_RULE = re.compile(r"\s*(?P<q>[^,\s]+)\s*,\s*(?P<sym>\S+)\s+->\s*(?P<p>[^,\s]+)\s*\Z")


class FormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


def kind_of(machine) -> str:
    if isinstance(machine, LimitedAutomaton):
        return "LA1"
    if isinstance(machine, OneWayDFA):
        return "DFA"
    if isinstance(machine, OneWayNFA):
        return "NFA"
    raise TypeError(f"not an automaton: {type(machine).__name__}")


# ---------------------------------------------------------------------------
# serialize
# ---------------------------------------------------------------------------


def _check_names(machine):
    for q in machine.states:
        if not isinstance(q, str) or not _STATE.match(q):
            raise ValueError(f"state {q!r} cannot be written; relabel the machine first")
    letters = machine.input_alphabet if isinstance(machine, LimitedAutomaton) else machine.alphabet
    for a in letters:
        if not _LETTER.match(a):
            raise ValueError(f"letter {a!r} is not an ASCII identifier")


def printable(machine):
    """``machine`` itself if it can be serialised, otherwise a relabelled copy."""
    try:
        _check_names(machine)
        return machine
    except ValueError:
        pass
    names = {q: f"s{i}" for i, q in enumerate(machine.states)}
    if isinstance(machine, LimitedAutomaton):
        return LimitedAutomaton.from_rules(
            names.values(), machine.input_alphabet,
            [(names[q], sym, names[t.target], t.write, t.move) for q, sym, t in machine.rules()],
            names[machine.initial], [names[f] for f in machine.finals], machine.work_alphabet,
        )
    return machine.relabeled("s")


def _ordered(states, subset):
    return [q for q in states if q in subset]


def serialize(machine) -> str:
    _check_names(machine)
    kind = kind_of(machine)
    lines = [kind, "states: " + " ".join(machine.states)]
    if kind == "LA1":
        lines.append("input: " + " ".join(machine.input_alphabet))
        lines.append("work: " + " ".join(str(s) for s in machine.work_alphabet))
    else:
        lines.append("input: " + " ".join(machine.alphabet))
    lines.append(f"initial: {machine.initial}")
    lines.append("final: " + " ".join(_ordered(machine.states, machine.finals)))
    lines.append("transitions:")
    if kind == "LA1":
        for q, sym, t in machine.rules():
            move = "+1" if t.move == 1 else "-1"
            if sym.is_end_marker:
                lines.append(f"{q}, {sym} -> {t.target}, {move}")
            else:
                lines.append(f"{q}, {sym} -> {t.target}, {t.write}, {move}")
    else:
        index = {q: i for i, q in enumerate(machine.states)}
        for q in machine.states:
            for a in machine.alphabet:
                if kind == "DFA":
                    targets = [machine.transitions[(q, a)]] if (q, a) in machine.transitions else []
                else:
                    targets = sorted(machine.successors(q, a), key=index.__getitem__)
                lines.extend(f"{q}, {a} -> {p}" for p in targets)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parse
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.kind = None
        self.decl: dict = {}
        self.rules: list = []  # (line number, raw line)

    def tokens(self, lineno, raw, start):
        return [(m.group(), start + m.start() + 1) for m in re.finditer(r"\S+", raw[start:])]

    def run(self):
        in_rules = False
        for lineno, raw in enumerate(self.lines, 1):
            raw = raw.split("#", 1)[0].rstrip()
            if not raw.strip():
                continue
            if self.kind is None:
                word = raw.strip()
                if word not in KINDS:
                    raise FormatError(f"expected one of {', '.join(KINDS)}, got {word!r}", lineno,
                                      raw.index(word) + 1)
                self.kind = word
                continue
            if in_rules:
                self.rules.append((lineno, raw))
                continue
            head, sep, _ = raw.partition(":")
            name = head.strip()
            if not sep or name not in SECTIONS:
                raise FormatError(f"expected a declaration ({', '.join(SECTIONS)})", lineno,
                                  len(raw) - len(raw.lstrip()) + 1)
            if name in self.decl:
                raise FormatError(f"duplicate declaration of {name!r}", lineno, raw.index(name) + 1)
            if name == "work" and self.kind != "LA1":
                raise FormatError("work alphabet is only allowed for LA1", lineno, raw.index(name) + 1)
            if name == "transitions":
                self.decl[name] = (lineno, [])
                in_rules = True
                if raw[len(head) + 1:].strip():
                    raise FormatError("transitions start on the next line", lineno, len(head) + 2)
                continue
            self.decl[name] = (lineno, self.tokens(lineno, raw, len(head) + 1))
        if self.kind is None:
            raise FormatError("empty document", max(len(self.lines), 1))
        return self.build()

    def require(self, name):
        if name not in self.decl:
            raise FormatError(f"missing declaration {name!r}", len(self.lines) or 1)
        return self.decl[name]

    def build(self):
        lineno, toks = self.require("states")
        states = []
        for tok, col in toks:
            if not _STATE.match(tok):
                raise FormatError(f"bad state name {tok!r}", lineno, col)
            if tok in states:
                raise FormatError(f"duplicate state {tok!r}", lineno, col)
            states.append(tok)
        self.states = set(states)
        lineno, toks = self.require("input")
        letters = []
        for tok, col in toks:
            if not _LETTER.match(tok):
                raise FormatError(f"bad letter {tok!r}", lineno, col)
            if tok in letters:
                raise FormatError(f"duplicate letter {tok!r}", lineno, col)
            letters.append(tok)
        self.letters = letters

        lineno, toks = self.require("initial")
        if len(toks) != 1:
            raise FormatError("exactly one initial state expected", lineno, toks[1][1] if toks else 1)
        initial = self.state(*toks[0], lineno)
        lineno, toks = self.decl.get("final", (0, []))
        finals = set()
        for tok, col in toks:
            finals.add(self.state(tok, col, lineno))
        self.require("transitions")
        if self.kind == "LA1":
            return self.build_la(states, letters, initial, finals)
        return self.build_fa(states, letters, initial, finals)

    def state(self, tok, col, lineno):
        if tok not in self.states:
            raise FormatError(f"unknown state {tok!r}", lineno, col)
        return tok

    def symbol(self, tok, col, lineno, work=None):
        if tok == "|-":
            return LEFT_END
        if tok == "-|":
            return RIGHT_END
        if tok.endswith("'") and tok[:-1] in self.letters:
            return TapeSymbol.marked(tok[:-1])
        if tok in self.letters:
            return TapeSymbol.input(tok)
        if work is not None and TapeSymbol.work(tok) in work:
            return TapeSymbol.work(tok)
        raise FormatError(f"unknown symbol {tok!r}", lineno, col)

    def work_alphabet(self):
        if "work" not in self.decl:
            return None
        lineno, toks = self.decl["work"]
        out = []
        for tok, col in toks:
            if tok in ("|-", "-|") or tok in self.letters or (tok.endswith("'") and tok[:-1] in self.letters):
                sym = self.symbol(tok, col, lineno)
            elif _LETTER.match(tok):
                sym = TapeSymbol.work(tok)
            else:
                raise FormatError(f"unknown symbol {tok!r}", lineno, col)
            if sym in out:
                raise FormatError(f"duplicate symbol {tok!r}", lineno, col)
            out.append(sym)
        return out

    def build_la(self, states, letters, initial, finals):
        work = self.work_alphabet()
        known = set(work) if work is not None else None
        rules = []
        seen = set()
        for lineno, raw in self.rules:
            m = _LA_RULE.match(raw)
            if not m:
                raise FormatError("expected 'q, sym -> p, write, +1|-1'", lineno,
                                  len(raw) - len(raw.lstrip()) + 1)
            col = lambda g: m.start(g) + 1  # noqa: E731
            q = self.state(m["q"], col("q"), lineno)
            scanned = self.symbol(m["sym"], col("sym"), lineno, known)
            p = self.state(m["p"], col("p"), lineno)
            if m["d"] not in ("+1", "-1"):
                raise FormatError(f"malformed direction {m['d']!r}; use +1 or -1", lineno, col("d"))
            move = 1 if m["d"] == "+1" else -1
            if scanned.is_end_marker:
                if m["w"] is not None:
                    raise FormatError("transitions on end-markers take no write symbol", lineno, col("w"))
                write = scanned
            else:
                if m["w"] is None:
                    raise FormatError("missing write symbol", lineno, col("d"))
                write = self.symbol(m["w"], col("w"), lineno, known)
                if write.is_end_marker:
                    raise FormatError(f"end-marker {m['w']} cannot be written", lineno, col("w"))
            for sym, g in ((scanned, "sym"), (write, "w")):
                if known is not None and sym not in known:
                    raise FormatError(f"symbol {sym} is not in the work alphabet", lineno, col(g))
            key = (q, scanned, p, write, move)
            if key in seen:
                raise FormatError("duplicate transition", lineno, col("q"))
            seen.add(key)
            rules.append(key)
        return LimitedAutomaton.from_rules(states, letters, rules, initial, finals, work)

    def build_fa(self, states, letters, initial, finals):
        delta: dict = {}
        for lineno, raw in self.rules:
            m = _FA_RULE.match(raw)
            if not m:
                raise FormatError("expected 'q, letter -> p'", lineno, len(raw) - len(raw.lstrip()) + 1)
            q = self.state(m["q"], m.start("q") + 1, lineno)
            if m["sym"] not in letters:
                raise FormatError(f"unknown symbol {m['sym']!r}", lineno, m.start("sym") + 1)
            p = self.state(m["p"], m.start("p") + 1, lineno)
            targets = delta.setdefault((q, m["sym"]), [])
            if p in targets or (self.kind == "DFA" and targets):
                raise FormatError(f"duplicate transition for ({q}, {m['sym']})", lineno, m.start("q") + 1)
            targets.append(p)
        if self.kind == "DFA":
            return OneWayDFA(states, letters, {k: v[0] for k, v in delta.items()}, initial, finals)
        return OneWayNFA(states, letters, delta, initial, finals)


def parse(text: str):
    """Parse an automaton document into a LimitedAutomaton, OneWayNFA or OneWayDFA."""
    return _Parser(text).run()


# ---------------------------------------------------------------------------
# Graphviz
# ---------------------------------------------------------------------------


def _quote(name) -> str:
    return '"' + str(name).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(machine) -> str:
    kind = kind_of(machine)
    out = [f"digraph {_quote(kind)} {{", "  rankdir=LR;", "  node [shape=circle];",
           "  __start [shape=point, label=\"\"];"]
    for q in machine.states:
        shape = "doublecircle" if q in machine.finals else "circle"
        out.append(f"  {_quote(q)} [shape={shape}];")
    out.append(f"  __start -> {_quote(machine.initial)};")
    if kind == "LA1":
        for q, sym, t in machine.rules():
            move = "+1" if t.move == 1 else "-1"
            label = f"{sym}, {move}" if sym.is_end_marker else f"{sym} / {t.write}, {move}"
            out.append(f"  {_quote(q)} -> {_quote(t.target)} [label={_quote(label)}];")
    else:
        for q in machine.states:
            for a in machine.alphabet:
                if kind == "DFA":
                    targets = [machine.transitions[(q, a)]] if (q, a) in machine.transitions else []
                else:
                    targets = machine.successors(q, a)
                for p in targets:
                    out.append(f"  {_quote(q)} -> {_quote(p)} [label={_quote(a)}];")
    out.append("}")
    return "\n".join(out) + "\n"
