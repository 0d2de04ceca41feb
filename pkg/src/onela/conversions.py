"""Transition-table conversions from 1-LAs to one-way automata, plus DFA plumbing.

A transition table summarises a frozen tape segment ``|- z``: it holds the pairs
``(p, r)`` such that entering the rightmost cell of the segment in state ``p``
can lead to leaving it to the right in state ``r``.  A one-way machine that
carries the table of the prefix read so far, together with the state in which
the simulated machine first reaches the current cell, simulates the 1-LA.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import chain

from .core import (
    LEFT_END,
    RIGHT_END,
    InvalidAutomaton,
    LimitedAutomaton,
    OneWayDFA,
    OneWayNFA,
    TapeSymbol,
    classify,
    validate,
)


@dataclass(frozen=True)
class TransitionTable:
    relation: frozenset

    def __iter__(self):
        return iter(self.relation)

    def __contains__(self, pair) -> bool:
        return pair in self.relation

    def __len__(self) -> int:
        return len(self.relation)

    def image(self, p) -> set:
        return {r for (q, r) in self.relation if q == p}

    def pairs(self, states=None) -> list:
        """Pairs sorted by state order (``states``) or by their text."""
        if states is None:
            return sorted(self.relation, key=lambda pr: (str(pr[0]), str(pr[1])))
        index = {q: i for i, q in enumerate(states)}
        return sorted(self.relation, key=lambda pr: (index[pr[0]], index[pr[1]]))

    def __str__(self) -> str:
        return "{" + ", ".join(f"({p},{q})" for p, q in self.pairs()) + "}"


@dataclass(frozen=True)
class FrontierState:
    table: TransitionTable
    arrival: object

    def __str__(self) -> str:
        return f"<{self.table};{self.arrival}>"


@dataclass(frozen=True)
class Equal:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Counterexample:
    word: tuple

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        if all(len(a) == 1 for a in self.word):
            return "".join(self.word)
        return " ".join(self.word)


def _require_valid(la):
    diags = validate(la)
    if diags:
        raise InvalidAutomaton(diags)


def base_table(la: LimitedAutomaton) -> TransitionTable:
    """Table of the segment holding only the left end-marker."""
    return TransitionTable(frozenset(
        (p, t.target)
        for p in la.states
        for t in la.delta(p, LEFT_END)
        if t.move == 1
    ))


def extend_table(la: LimitedAutomaton, table: TransitionTable, symbol: TapeSymbol) -> TransitionTable:
    """Table of the segment ``table`` followed by one frozen cell holding ``symbol``."""
    if symbol.is_end_marker:
        raise ValueError("cannot extend a segment with an end-marker")
    exits = set()
    bounces = set()  # (p, q''): step left from the new cell in p, come back in q''
    for p in la.states:
        for t in la.delta(p, symbol):
            if t.write != symbol:
                continue
            if t.move == 1:
                exits.add((p, t.target))
            else:
                bounces.update((p, r) for r in table.image(t.target))
    relation = set(exits)
    while True:
        grown = {(p, r) for (p, q) in bounces for (q2, r) in relation if q2 == q}
        if grown <= relation:
            return TransitionTable(frozenset(relation))
        relation |= grown


class _TableCache:
    def __init__(self, la):
        self.la = la
        self._extend = {}
        self._accept = {}

    def extend(self, table, symbol):
        key = (table, symbol)
        hit = self._extend.get(key)
        if hit is None:
            hit = self._extend[key] = extend_table(self.la, table, symbol)
        return hit

    def accepting(self, table, q):
        key = (table, q)
        hit = self._accept.get(key)
        if hit is None:
            hit = self._accept[key] = accept_closure(self.la, table, q)
        return hit

    def step(self, table, q, letter):
        """Successor frontier states after the first visit to a cell holding ``letter``."""
        out = set()
        scanned = TapeSymbol.input(letter)
        for t in self.la.delta(q, scanned):
            new_table = self.extend(table, t.write)
            if t.move == 1:
                out.add(FrontierState(new_table, t.target))
            else:
                returns = table.image(t.target)
                for q2 in returns:
                    for r in new_table.image(q2):
                        out.add(FrontierState(new_table, r))
        return out


def accept_closure(la: LimitedAutomaton, table: TransitionTable, q) -> bool:
    """Can the machine, standing on the right end-marker in ``q``, exit right in a final state?"""
    reached = {q}
    todo = [q]
    while todo:
        p = todo.pop()
        for t in la.delta(p, RIGHT_END):
            if t.move == 1:
                if t.target in la.finals:
                    return True
                continue
            for r in table.image(t.target):
                if r not in reached:
                    reached.add(r)
                    todo.append(r)
    return False


def la_to_ownfa(la: LimitedAutomaton) -> OneWayNFA:
    """One-way NFA over reachable frontier states (table of the frozen prefix, arrival state)."""
    _require_valid(la)
    cache = _TableCache(la)
    start = FrontierState(base_table(la), la.initial)
    order = [start]
    seen = {start}
    delta = {}
    queue = deque([start])
    while queue:
        fs = queue.popleft()
        for a in la.input_alphabet:
            succ = cache.step(fs.table, fs.arrival, a)
            if succ:
                delta[(fs, a)] = succ
            for nxt in sorted(succ, key=str):
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                    queue.append(nxt)
    finals = {fs for fs in order if cache.accepting(fs.table, fs.arrival)}
    return OneWayNFA(tuple(order), la.input_alphabet, delta, start, finals)


SINK = "sink"


def amla_to_owdfa(la: LimitedAutomaton) -> OneWayDFA:
    """Complete one-way DFA for an always-marking machine.

    States pair the (input-determined) table with the set of arrival states;
    every pair with an empty set collapses into a single sink.
    """
    if not classify(la).structurally_always_marking:
        raise ValueError("amla_to_owdfa needs a structurally always-marking machine")
    cache = _TableCache(la)
    start = (base_table(la), frozenset([la.initial]))
    order = [start]
    seen = {start}
    delta = {}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == SINK:
            for a in la.input_alphabet:
                delta[(SINK, a)] = SINK
            continue
        table, current = node
        for a in la.input_alphabet:
            new_table = cache.extend(table, TapeSymbol.marked(a))
            arrivals = set()
            for q in current:
                for fs in cache.step(table, q, a):
                    assert fs.table == new_table
                    arrivals.add(fs.arrival)
            nxt = (new_table, frozenset(arrivals)) if arrivals else SINK
            delta[(node, a)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    finals = {
        node for node in order
        if node != SINK and any(cache.accepting(node[0], q) for q in node[1])
    }
    return OneWayDFA(tuple(order), la.input_alphabet, delta, start, finals)


def determinize(nfa: OneWayNFA) -> OneWayDFA:
    """Reachable subset construction; the empty subset, when reached, is the sink."""
    start = frozenset([nfa.initial])
    order = [start]
    seen = {start}
    delta = {}
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        for a in nfa.alphabet:
            nxt = frozenset(chain.from_iterable(nfa.successors(q, a) for q in subset))
            delta[(subset, a)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    finals = {s for s in order if s & nfa.finals}
    return OneWayDFA(tuple(order), nfa.alphabet, delta, start, finals)


def minimize_dfa(dfa: OneWayDFA) -> OneWayDFA:
    """The minimal complete DFA, states numbered 0.. in breadth-first order."""
    dfa = dfa.completed()
    letters = sorted(dfa.alphabet)
    reach = [dfa.initial]
    seen = {dfa.initial}
    for q in reach:
        for a in letters:
            r = dfa.transitions[(q, a)]
            if r not in seen:
                seen.add(r)
                reach.append(r)
    block = {q: int(q in dfa.finals) for q in reach}
    count = len(set(block.values()))
    while True:
        signatures = {}
        new_block = {}
        for q in reach:
            sig = (block[q], *(block[dfa.transitions[(q, a)]] for a in letters))
            new_block[q] = signatures.setdefault(sig, len(signatures))
        block = new_block
        if len(signatures) == count:
            break
        count = len(signatures)
    # Renumber blocks by breadth-first discovery from the initial block.
    number = {block[dfa.initial]: 0}
    queue = deque([dfa.initial])
    rep = {0: dfa.initial}
    while queue:
        q = queue.popleft()
        for a in letters:
            r = dfa.transitions[(q, a)]
            if block[r] not in number:
                number[block[r]] = len(number)
                rep[number[block[r]]] = r
                queue.append(r)
    delta = {
        (i, a): number[block[dfa.transitions[(rep[i], a)]]]
        for i in range(len(number)) for a in dfa.alphabet
    }
    finals = {i for i in range(len(number)) if rep[i] in dfa.finals}
    return OneWayDFA(tuple(range(len(number))), dfa.alphabet, delta, 0, finals)


def dfa_equiv(d1: OneWayDFA, d2: OneWayDFA):
    """``Equal()`` or the shortest, lexicographically least distinguishing word."""
    if set(d1.alphabet) != set(d2.alphabet):
        raise ValueError(f"alphabets differ: {d1.alphabet} vs {d2.alphabet}")
    letters = sorted(d1.alphabet)
    start = (d1.initial, d2.initial)
    parents = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        p, q = pair
        if (p is not None and p in d1.finals) != (q is not None and q in d2.finals):
            word = []
            node = pair
            while parents[node] is not None:
                node, a = parents[node]
                word.append(a)
            return Counterexample(tuple(reversed(word)))
        for a in letters:
            nxt = (
                d1.step(p, a) if p is not None else None,
                d2.step(q, a) if q is not None else None,
            )
            if nxt not in parents:
                parents[nxt] = (pair, a)
                queue.append(nxt)
    return Equal()


def twofa_to_owdfa(la: LimitedAutomaton) -> OneWayDFA:
    """One-way DFA for a write-free (two-way finite) machine."""
    if not classify(la).write_free:
        raise ValueError("twofa_to_owdfa needs a write-free machine")
    return determinize(la_to_ownfa(la))


def truncate_dfa(dfa: OneWayDFA, max_len: int) -> OneWayDFA:
    """DFA for the words of ``dfa`` of length at most ``max_len``."""
    start = (dfa.initial, 0)
    order = [start]
    seen = {start}
    delta = {}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        q, n = node
        if n == max_len or q is None:
            continue
        for a in dfa.alphabet:
            nxt = (dfa.step(q, a), n + 1)
            if nxt[0] is None:
                continue
            delta[(node, a)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    finals = {(q, n) for (q, n) in order if q in dfa.finals}
    return OneWayDFA(tuple(order), dfa.alphabet, delta, start, finals)


def sample_dfa(accepts, alphabet, max_len: int) -> OneWayDFA:
    """Prefix-tree DFA accepting exactly the words up to ``max_len`` that ``accepts`` approves."""
    letters = sorted(alphabet)
    start = ()
    order = [start]
    delta = {}
    for w in order:
        if len(w) == max_len:
            continue
        for a in letters:
            nxt = w + (a,)
            delta[(w, a)] = nxt
            order.append(nxt)
    finals = {w for w in order if accepts(w)}
    return OneWayDFA(tuple(order), tuple(alphabet), delta, start, finals)
