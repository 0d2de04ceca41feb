"""Data model: tape symbols, 1-limited automata, one-way finite automata.

A 1-limited automaton (1-LA) is a single-tape nondeterministic machine that
may rewrite a cell only on its first visit.  Two-way finite automata are the
write-free special case and use the same class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

State = Hashable

INPUT = "input"
MARKED = "marked"
WORK = "work"
LEFT = "left"
RIGHT = "right"


class TapeSymbol(NamedTuple):
    """A tape symbol: an input letter, its marked copy, a work letter or an end-marker."""

    kind: str
    letter: str | None = None

    @classmethod
    def input(cls, letter: str) -> TapeSymbol:
        return cls(INPUT, letter)

    @classmethod
    def marked(cls, letter: str) -> TapeSymbol:
        return cls(MARKED, letter)

    @classmethod
    def work(cls, letter: str) -> TapeSymbol:
        return cls(WORK, letter)

    @property
    def is_end_marker(self) -> bool:
        return self.kind in (LEFT, RIGHT)

    def mark(self) -> TapeSymbol:
        if self.kind != INPUT:
            raise ValueError(f"only input letters can be marked, got {self}")
        return TapeSymbol(MARKED, self.letter)

    def __str__(self) -> str:
        if self.kind == LEFT:
            return "|-"
        if self.kind == RIGHT:
            return "-|"
        if self.kind == MARKED:
            return f"{self.letter}'"
        return str(self.letter)


LEFT_END = TapeSymbol(LEFT)
RIGHT_END = TapeSymbol(RIGHT)


class Transition(NamedTuple):
    target: State
    write: TapeSymbol
    move: int


class InvalidAutomaton(ValueError):
    """Raised when an operation requires a well-formed machine."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Diagnostic:
    code: str
    detail: str

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


def _freeze_delta(transitions) -> dict:
    frozen = {}
    for key, moves in transitions.items():
        moves = frozenset(Transition(*m) for m in moves)
        if moves:
            frozen[key] = moves
    return frozen


@dataclass(frozen=True)
class LimitedAutomaton:
    """A 1-limited automaton ``(Q, Sigma, Gamma, delta, q_I, F)``.

    ``transitions`` maps ``(state, TapeSymbol)`` to a frozenset of
    :class:`Transition`.  Instances are never mutated after construction.
    """

    states: tuple
    input_alphabet: tuple
    work_alphabet: tuple
    transitions: Mapping
    initial: State
    finals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "input_alphabet", tuple(self.input_alphabet))
        object.__setattr__(self, "work_alphabet", tuple(self.work_alphabet))
        object.__setattr__(self, "transitions", _freeze_delta(self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))

    @classmethod
    def from_rules(
        cls,
        states: Iterable[State],
        input_alphabet: Iterable[str],
        rules: Iterable[tuple],
        initial: State,
        finals: Iterable[State],
        work_alphabet: Iterable[TapeSymbol] | None = None,
    ) -> LimitedAutomaton:
        """Build a machine from ``(q, scanned, p, write, move)`` rules.

        ``write`` may be ``None`` on end-markers, meaning "the scanned end-marker".
        When ``work_alphabet`` is omitted it is Sigma, the end-markers and every
        symbol mentioned by a rule.
        """
        input_alphabet = tuple(input_alphabet)
        delta: dict = {}
        seen: list = []
        for q, scanned, p, write, move in rules:
            if write is None and scanned.is_end_marker:
                write = scanned
            delta.setdefault((q, scanned), set()).add(Transition(p, write, move))
            seen.extend((scanned, write))
        if work_alphabet is None:
            work = [TapeSymbol.input(a) for a in input_alphabet] + [LEFT_END, RIGHT_END]
            for sym in seen:
                if sym not in work:
                    work.append(sym)
            work_alphabet = work
        return cls(tuple(states), input_alphabet, tuple(work_alphabet), delta, initial, frozenset(finals))

    def delta(self, state: State, symbol: TapeSymbol) -> frozenset:
        return self.transitions.get((state, symbol), frozenset())

    def rules(self):
        """Yield ``(q, scanned, Transition)`` in a reproducible order."""
        index = {q: i for i, q in enumerate(self.states)}
        sym_index = {s: i for i, s in enumerate(self.work_alphabet)}
        for (q, sym) in sorted(
            self.transitions,
            key=lambda k: (index.get(k[0], len(index)), sym_index.get(k[1], len(sym_index)), str(k[1])),
        ):
            for t in sorted(
                self.transitions[(q, sym)],
                key=lambda t: (index.get(t.target, len(index)), str(t.write), t.move),
            ):
                yield q, sym, t

    @property
    def size(self) -> int:
        return len(self.states)

    def letters(self) -> list[TapeSymbol]:
        return [TapeSymbol.input(a) for a in self.input_alphabet]


@dataclass(frozen=True)
class VariantProfile:
    deterministic: bool
    structurally_once_marking: bool
    structurally_always_marking: bool
    sweeping: bool
    write_free: bool

    def as_dict(self) -> dict:
        return {
            "deterministic": self.deterministic,
            "once_marking": self.structurally_once_marking,
            "always_marking": self.structurally_always_marking,
            "sweeping": self.sweeping,
            "write_free": self.write_free,
        }


def validate(la: LimitedAutomaton) -> list[Diagnostic]:
    """Check the structural invariants of ``la``; an empty list means well-formed."""
    out: list[Diagnostic] = []
    states = set(la.states)
    sigma = set(la.input_alphabet)
    gamma = set(la.work_alphabet)
    if la.initial not in states:
        out.append(Diagnostic("unknown initial state", repr(la.initial)))
    for f in sorted(la.finals - states, key=repr):
        out.append(Diagnostic("unknown final state", repr(f)))
    for a in la.input_alphabet:
        if TapeSymbol.input(a) not in gamma:
            out.append(Diagnostic("input letter missing from work alphabet", a))
    for marker in (LEFT_END, RIGHT_END):
        if marker not in gamma:
            out.append(Diagnostic("end-marker missing from work alphabet", str(marker)))
    for sym in la.work_alphabet:
        if sym.kind == MARKED and sym.letter not in sigma:
            out.append(Diagnostic("marked letter without input base", str(sym)))
        if sym.kind == INPUT and sym.letter not in sigma:
            out.append(Diagnostic("input letter outside input alphabet", str(sym)))
    for (q, scanned), moves in la.transitions.items():
        for t in moves:
            where = f"({q}, {scanned}) -> ({t.target}, {t.write}, {t.move:+d})"
            if q not in states:
                out.append(Diagnostic("unknown state", where))
            if t.target not in states:
                out.append(Diagnostic("unknown target state", where))
            if scanned not in gamma:
                out.append(Diagnostic("symbol not in work alphabet", where))
            if t.write not in gamma:
                out.append(Diagnostic("written symbol not in work alphabet", where))
            if t.move not in (-1, 1):
                out.append(Diagnostic("bad direction", where))
            if scanned.is_end_marker:
                if t.write != scanned:
                    out.append(Diagnostic("end-marker modified", where))
            elif t.write.is_end_marker:
                out.append(Diagnostic("end-marker written", where))
    return out


def _require_valid(la: LimitedAutomaton) -> None:
    diags = validate(la)
    if diags:
        raise InvalidAutomaton(diags)


def _uses_only_marking_alphabet(la: LimitedAutomaton) -> bool:
    for (_, scanned), moves in la.transitions.items():
        if scanned.kind == WORK:
            return False
        if any(t.write.kind == WORK for t in moves):
            return False
    return True


def is_marking_step(scanned: TapeSymbol, t: Transition) -> bool:
    return scanned.kind == INPUT and t.write == TapeSymbol.marked(scanned.letter)


def post_marking_states(la: LimitedAutomaton) -> frozenset:
    """Smallest set containing every marking target and closed under transitions."""
    post = {t.target for (q, sym), moves in la.transitions.items() for t in moves if is_marking_step(sym, t)}
    succ: dict = {}
    for (q, _), moves in la.transitions.items():
        succ.setdefault(q, set()).update(t.target for t in moves)
    stack = list(post)
    while stack:
        q = stack.pop()
        for r in succ.get(q, ()):
            if r not in post:
                post.add(r)
                stack.append(r)
    return frozenset(post)


def _once_marking(la: LimitedAutomaton) -> bool:
    if not _uses_only_marking_alphabet(la):
        return False
    marking = False
    for (_, scanned), moves in la.transitions.items():
        for t in moves:
            if t.write == scanned:
                continue
            if not is_marking_step(scanned, t):
                return False
            marking = True
    if not marking:
        return False
    # Q_post is forced: it must hold every marking target and be closed.
    post = post_marking_states(la)
    for (q, scanned), moves in la.transitions.items():
        if q in post and any(is_marking_step(scanned, t) for t in moves):
            return False
    return True


def _always_marking(la: LimitedAutomaton) -> bool:
    if not _uses_only_marking_alphabet(la):
        return False
    for (_, scanned), moves in la.transitions.items():
        for t in moves:
            if scanned.kind == INPUT:
                if t.write != TapeSymbol.marked(scanned.letter):
                    return False
            elif t.write != scanned:
                return False
    return True


def _sweeping(la: LimitedAutomaton) -> bool:
    # Each state gets the set of directions it can be entered with or leave with
    # on an inner cell; reversals are allowed only on end-marker transitions.
    dirs: dict = {q: set() for q in la.states}
    dirs.setdefault(la.initial, set()).add(1)
    for (q, scanned), moves in la.transitions.items():
        for t in moves:
            if scanned == LEFT_END:
                if t.move == 1:
                    dirs.setdefault(t.target, set()).add(1)
            elif scanned == RIGHT_END:
                if t.move == -1:
                    dirs.setdefault(t.target, set()).add(-1)
            else:
                dirs.setdefault(q, set()).add(t.move)
                dirs.setdefault(t.target, set()).add(t.move)
    return all(len(d) <= 1 for d in dirs.values())


def classify(la: LimitedAutomaton) -> VariantProfile:
    """Compute the structural variant flags of a well-formed machine."""
    _require_valid(la)
    deterministic = all(len(m) <= 1 for m in la.transitions.values())
    write_free = all(t.write == sym for (_, sym), m in la.transitions.items() for t in m)
    return VariantProfile(
        deterministic=deterministic,
        structurally_once_marking=_once_marking(la),
        structurally_always_marking=_always_marking(la),
        sweeping=_sweeping(la),
        write_free=write_free,
    )


@dataclass(frozen=True)
class OneWayNFA:
    states: tuple
    alphabet: tuple
    transitions: Mapping  # (state, letter) -> frozenset of states
    initial: State
    finals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(
            self, "transitions", {k: frozenset(v) for k, v in self.transitions.items() if v}
        )
        object.__setattr__(self, "finals", frozenset(self.finals))

    def successors(self, state: State, letter: str) -> frozenset:
        return self.transitions.get((state, letter), frozenset())

    def accepts(self, word: Sequence[str]) -> bool:
        current = {self.initial}
        for a in word:
            current = {r for q in current for r in self.successors(q, a)}
            if not current:
                return False
        return bool(current & self.finals)

    def is_deterministic(self) -> bool:
        return all(len(v) <= 1 for v in self.transitions.values())

    @property
    def size(self) -> int:
        return len(self.states)

    def relabeled(self, prefix: str = "s") -> OneWayNFA:
        names = {q: f"{prefix}{i}" for i, q in enumerate(self.states)}
        return OneWayNFA(
            tuple(names.values()),
            self.alphabet,
            {(names[q], a): {names[r] for r in v} for (q, a), v in self.transitions.items()},
            names[self.initial],
            {names[f] for f in self.finals},
        )


@dataclass(frozen=True)
class OneWayDFA:
    """A one-way DFA; ``transitions`` may be partial (missing = reject)."""

    states: tuple
    alphabet: tuple
    transitions: Mapping  # (state, letter) -> state
    initial: State
    finals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "transitions", dict(self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))

    def step(self, state: State, letter: str):
        return self.transitions.get((state, letter))

    def run(self, word: Sequence[str]):
        q = self.initial
        for a in word:
            q = self.transitions.get((q, a))
            if q is None:
                return None
        return q

    def accepts(self, word: Sequence[str]) -> bool:
        q = self.run(word)
        return q is not None and q in self.finals

    def is_complete(self) -> bool:
        return all((q, a) in self.transitions for q in self.states for a in self.alphabet)

    def completed(self, sink: State = "sink") -> OneWayDFA:
        if self.is_complete():
            return self
        while sink in self.states:
            sink = f"{sink}_"
        delta = dict(self.transitions)
        for q in (*self.states, sink):
            for a in self.alphabet:
                delta.setdefault((q, a), sink)
        return OneWayDFA((*self.states, sink), self.alphabet, delta, self.initial, self.finals)

    @property
    def size(self) -> int:
        return len(self.states)

    def as_nfa(self) -> OneWayNFA:
        return OneWayNFA(
            self.states,
            self.alphabet,
            {k: {v} for k, v in self.transitions.items()},
            self.initial,
            self.finals,
        )

    def relabeled(self, prefix: str = "s") -> OneWayDFA:
        names = {q: f"{prefix}{i}" for i, q in enumerate(self.states)}
        return OneWayDFA(
            tuple(names.values()),
            self.alphabet,
            {(names[q], a): names[r] for (q, a), r in self.transitions.items()},
            names[self.initial],
            {names[f] for f in self.finals},
        )


def split_word(word: str | Sequence[str], alphabet: Sequence[str]) -> tuple:
    """Turn ``word`` into a tuple of letters.

    Strings are split into characters when every letter is a single character,
    otherwise on whitespace or commas.
    """
    if not isinstance(word, str):
        return tuple(word)
    if all(len(a) == 1 for a in alphabet):
        return tuple(word)
    return tuple(w for w in word.replace(",", " ").split() if w)
