"""Configuration-graph semantics for 1-limited automata.

Configurations are ``(state, head, tape, visited)``; acceptance is reachability
of a configuration past the right end-marker in a final state.  Every cell is
rewritten at most once, so the reachable graph is finite and plain memoised
search decides acceptance without step budgets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .core import (
    INPUT,
    LEFT_END,
    RIGHT_END,
    InvalidAutomaton,
    LimitedAutomaton,
    TapeSymbol,
    classify,
    split_word,
    validate,
)

DEFAULT_NODE_LIMIT = 2_000_000


class ExplorationLimitExceeded(RuntimeError):
    """The configuration graph grew past the node limit; the outcome is unknown."""


@dataclass(frozen=True)
class Configuration:
    state: object
    head: int
    tape: tuple
    fresh: tuple  # fresh[i] is True while cell i has not been visited

    @property
    def length(self) -> int:
        return len(self.tape) - 2

    @property
    def terminal(self) -> bool:
        return self.head == len(self.tape)

    def render(self) -> str:
        cells = []
        for i, sym in enumerate(self.tape):
            text = str(sym)
            cells.append(f"[{text}]" if i == self.head else text)
        if self.terminal:
            cells.append("[]")
        return f"{self.state}: " + " ".join(cells)


@dataclass(frozen=True)
class Trace:
    configurations: tuple
    accepted: bool = False

    def __len__(self) -> int:
        return len(self.configurations)

    @property
    def last(self) -> Configuration:
        return self.configurations[-1]

    def render(self) -> str:
        return "\n".join(c.render() for c in self.configurations)


@dataclass(frozen=True)
class RunVerdict:
    accepted: bool
    certificate: Trace | None
    explored: int

    @property
    def outcome(self) -> str:
        return "Accept" if self.accepted else "Reject"


@dataclass(frozen=True)
class LoopReport:
    reason: str  # "repeat" or "budget"
    trace: Trace


@dataclass(frozen=True)
class DisciplineReport:
    discipline: str
    holds: bool
    explored: int
    violation: str | None = None
    witness: Trace | None = None


def _tape_for(la: LimitedAutomaton, word) -> tuple:
    letters = split_word(word, la.input_alphabet)
    sigma = set(la.input_alphabet)
    for a in letters:
        if a not in sigma:
            raise ValueError(f"letter {a!r} is not in the input alphabet {la.input_alphabet}")
    return (LEFT_END, *(TapeSymbol.input(a) for a in letters), RIGHT_END)


# Internal keys are (state, head, tape, lo, hi): cells lo..hi have been visited.
# The visited cells always form an interval because the head moves one cell at a time.


def _to_config(key) -> Configuration:
    state, head, tape, lo, hi = key
    fresh = tuple(not (lo <= i <= hi) for i in range(len(tape)))
    return Configuration(state, head, tape, fresh)


def _from_config(c: Configuration) -> tuple:
    visited = [i for i, f in enumerate(c.fresh) if not f]
    if visited:
        return (c.state, c.head, c.tape, visited[0], visited[-1])
    return (c.state, c.head, c.tape, 1, 0)


def initial_configuration(la: LimitedAutomaton, word) -> Configuration:
    """Head on cell 1 (which is the right end-marker for the empty word), state q_I."""
    tape = _tape_for(la, word)
    return Configuration(la.initial, 1, tape, (True,) * len(tape))


def _successor_keys(la: LimitedAutomaton, key):
    state, head, tape, lo, hi = key
    scanned = tape[head]
    frozen = lo <= head <= hi
    out = []
    for t in la.transitions.get((state, scanned), ()):
        if frozen and t.write != scanned:
            continue
        new_head = head + t.move
        if new_head < 0:
            continue
        if t.write != scanned:
            new_tape = tape[:head] + (t.write,) + tape[head + 1:]
        else:
            new_tape = tape
        out.append((t.target, new_head, new_tape, min(lo, head), max(hi, head)))
    return out


def step_successors(la: LimitedAutomaton, c: Configuration) -> set:
    """All configurations reachable from ``c`` in one legal move."""
    if c.terminal:
        return set()
    return {_to_config(k) for k in _successor_keys(la, _from_config(c))}


def _trace_from(parents: dict, key, accepted: bool) -> Trace:
    chain = []
    while key is not None:
        chain.append(key)
        key = parents[key]
    chain.reverse()
    return Trace(tuple(_to_config(k) for k in chain), accepted)


def _is_write_free(la: LimitedAutomaton) -> bool:
    return all(t.write == sym for (_, sym), m in la.transitions.items() for t in m)


def _decide_write_free(la, tape, node_limit):
    # Tape never changes, so (state, head) identifies a configuration.
    end = len(tape)
    delta = la.transitions
    finals = la.finals
    start = (la.initial, 1)
    parents = {start: None}
    queue = deque([start])
    while queue:
        state, head = queue.popleft()
        for t in delta.get((state, tape[head]), ()):
            nh = head + t.move
            if nh < 0:
                continue
            nxt = (t.target, nh)
            if nxt in parents:
                continue
            parents[nxt] = (state, head)
            if nh == end:
                if t.target in finals:
                    return nxt, parents
                continue
            if len(parents) > node_limit:
                raise ExplorationLimitExceeded(f"more than {node_limit} configurations")
            queue.append(nxt)
    return None, parents


def decide_acceptance(la: LimitedAutomaton, word, node_limit: int = DEFAULT_NODE_LIMIT,
                      certificate: bool = True) -> RunVerdict:
    """Decide whether some computation of ``la`` accepts ``word``.

    Breadth-first search over full configurations; the returned certificate is
    a shortest accepting computation.
    """
    tape = _tape_for(la, word)
    end = len(tape)
    if _is_write_free(la):
        hit, parents = _decide_write_free(la, tape, node_limit)
        if hit is None:
            return RunVerdict(False, None, len(parents))
        trace = None
        if certificate:
            chain = []
            node = hit
            while node is not None:
                chain.append(node)
                node = parents[node]
            chain.reverse()
            keys = []
            for i, (state, head) in enumerate(chain):
                hi = max(h for _, h in chain[:i]) if i else 0
                lo = min(h for _, h in chain[:i]) if i else 1
                keys.append((state, head, tape, lo, hi))
            trace = Trace(tuple(_to_config(k) for k in keys), True)
        return RunVerdict(True, trace, len(parents))

    start = (la.initial, 1, tape, 1, 0)
    parents = {start: None}
    queue = deque([start])
    while queue:
        key = queue.popleft()
        for nxt in _successor_keys(la, key):
            if nxt in parents:
                continue
            parents[nxt] = key
            if nxt[1] == end:
                if nxt[0] in la.finals:
                    trace = _trace_from(parents, nxt, True) if certificate else None
                    return RunVerdict(True, trace, len(parents))
                continue
            if len(parents) > node_limit:
                raise ExplorationLimitExceeded(f"more than {node_limit} configurations")
            queue.append(nxt)
    return RunVerdict(False, None, len(parents))


def accepts(la: LimitedAutomaton, word, node_limit: int = DEFAULT_NODE_LIMIT) -> bool:
    return decide_acceptance(la, word, node_limit, certificate=False).accepted


def trace_deterministic(la: LimitedAutomaton, word, max_steps: int = 100_000):
    """Follow the unique computation of a deterministic machine.

    Returns a :class:`Trace` when the machine halts (``accepted`` tells how), or a
    :class:`LoopReport` when a configuration repeats or ``max_steps`` runs out.
    """
    if any(len(m) > 1 for m in la.transitions.values()):
        raise ValueError("trace_deterministic needs a deterministic machine")
    key = (la.initial, 1, _tape_for(la, word), 1, 0)
    end = len(key[2])
    seen = {key}
    chain = [key]
    steps = 0
    while True:
        if key[1] == end:
            return Trace(tuple(map(_to_config, chain)), key[0] in la.finals)
        succ = _successor_keys(la, key)
        if not succ:
            return Trace(tuple(map(_to_config, chain)), False)
        if steps >= max_steps:
            return LoopReport("budget", Trace(tuple(map(_to_config, chain))))
        key = succ[0]
        steps += 1
        chain.append(key)
        if key in seen:
            return LoopReport("repeat", Trace(tuple(map(_to_config, chain))))
        seen.add(key)


def _once_violation(key, original) -> str | None:
    tape = key[2]
    marked = 0
    for i in range(1, len(tape) - 1):
        sym, orig = tape[i], original[i]
        if sym == orig:
            continue
        if orig.kind == INPUT and sym == orig.mark():
            marked += 1
        else:
            return f"cell {i} rewritten from {orig} to {sym}, which is not a marking"
    if marked > 1:
        return f"{marked} cells marked in one computation"
    return None


def verify_marking_discipline(la: LimitedAutomaton, word, discipline: str | None = None,
                              node_limit: int = DEFAULT_NODE_LIMIT) -> DisciplineReport:
    """Explore every computation on ``word`` and check the marking discipline.

    ``discipline`` is ``"once"`` or ``"always"``; when omitted it is taken from the
    structural classification of ``la``.
    """
    diags = validate(la)
    if diags:
        raise InvalidAutomaton(diags)
    if discipline is None:
        profile = classify(la)
        if profile.structurally_always_marking:
            discipline = "always"
        elif profile.structurally_once_marking:
            discipline = "once"
        else:
            raise ValueError("machine is neither once-marking nor always-marking; pass discipline")
    if discipline not in ("once", "always"):
        raise ValueError(f"unknown discipline {discipline!r}")

    original = _tape_for(la, word)
    end = len(original)
    start = (la.initial, 1, original, 1, 0)
    parents = {start: None}
    queue = deque([start])

    def fail(key, message):
        return DisciplineReport(discipline, False, len(parents), message, _trace_from(parents, key, False))

    while queue:
        key = queue.popleft()
        state, head, tape, lo, hi = key
        for nxt in _successor_keys(la, key):
            if discipline == "always" and not (lo <= head <= hi) and original[head].kind == INPUT:
                if nxt[2][head] != original[head].mark():
                    if nxt not in parents:
                        parents[nxt] = key
                    return fail(nxt, f"first visit to cell {head} wrote {nxt[2][head]} instead of "
                                     f"{original[head].mark()}")
            if nxt in parents:
                continue
            parents[nxt] = key
            if discipline == "once":
                message = _once_violation(nxt, original)
                if message:
                    return fail(nxt, message)
                if nxt[1] == end and nxt[0] in la.finals and nxt[2] == original:
                    return fail(nxt, "accepting computation marks no cell")
            if nxt[1] == end:
                continue
            if len(parents) > node_limit:
                raise ExplorationLimitExceeded(f"more than {node_limit} configurations")
            queue.append(nxt)
    return DisciplineReport(discipline, True, len(parents))


def is_legal_trace(la: LimitedAutomaton, trace: Trace) -> bool:
    """Check that consecutive configurations are joined by single legal moves."""
    confs = trace.configurations
    return all(b in step_successors(la, a) for a, b in zip(confs, confs[1:]))


def enumerate_words(alphabet: Sequence[str], max_len: int):
    """All words of length at most ``max_len``, shortest first, then lexicographic."""
    letters = sorted(alphabet)
    for n in range(max_len + 1):
        for w in product(letters, repeat=n):
            yield w
