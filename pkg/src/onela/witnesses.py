"""Witness languages K_n and J_n over {a, b}.

K_n holds the words ``x_1 ... x_k x`` made of k >= 1 blocks of length n plus a
final block ``x`` that equals some earlier block.  J_n is its reversal: the
first block must reappear among the later ones.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product

from .core import LEFT_END, RIGHT_END, LimitedAutomaton, OneWayDFA, TapeSymbol

ALPHABET = ("a", "b")
REFERENCE_DFA_CAP = 3
FOOLING_CAP = 12


def _blocks(n: int, w) -> list | None:
    w = "".join(w)
    if n < 1:
        raise ValueError("block length must be positive")
    if len(w) % n or len(w) < 2 * n:
        return None
    return [w[i:i + n] for i in range(0, len(w), n)]


def kn_member(n: int, w) -> bool:
    blocks = _blocks(n, w)
    return blocks is not None and blocks[-1] in blocks[:-1]


def jn_member(n: int, w) -> bool:
    blocks = _blocks(n, w)
    return blocks is not None and blocks[0] in blocks[1:]


# ---------------------------------------------------------------------------
# Sweeping once-marking machine for K_n
#
# First sweep (rightward, nondeterministic):
#   P{c}      c = symbols read mod n, nothing marked yet
#   M         just marked the last cell of a block
#   R{c}      after the mark, c = symbols read since the mark mod n
# At -| in R0 the length is a multiple of n and at least one full block follows
# the marked one.  Then n deterministic iterations i = 0..n-1, each a leftward
# sweep with a counter mod n that is 0 exactly on the (n-i)-th cell of every
# block, followed by a rightward sweep:
#   L0_{c}    looking for the (n-i)-th symbol of the last block
#   L1_{c}{y} carrying that symbol y, mark not reached yet
#   L2_{c}{y} mark passed, looking for the (n-i)-th symbol of the chosen block
#   L3_{c}    comparison succeeded, going to |-; there c == i
#   S{i}      rightward sweep remembering i
#   acc       accepting exit state
# Total 9n + 2 states.
# ---------------------------------------------------------------------------


def gen_kn_omla(n: int) -> LimitedAutomaton:
    if n < 1:
        raise ValueError("n must be >= 1")
    letters = [TapeSymbol.input(x) for x in ALPHABET]
    states = (
        [f"P{c}" for c in range(n)]
        + ["M"]
        + [f"R{c}" for c in range(n)]
        + [f"L0_{c}" for c in range(n)]
        + [f"L1_{c}{y}" for c in range(n) for y in ALPHABET]
        + [f"L2_{c}{y}" for c in range(n) for y in ALPHABET]
        + [f"L3_{c}" for c in range(n)]
        + [f"S{i}" for i in range(n)]
        + ["acc"]
    )
    rules = []
    for c in range(n):
        nc = (c + 1) % n
        for x in letters:
            rules.append((f"P{c}", x, f"P{nc}", x, 1))
            if nc == 0:
                rules.append((f"P{c}", x, "M", x.mark(), 1))
            rules.append((f"R{c}", x, f"R{nc}", x, 1))
    for x in letters:
        rules.append(("M", x, "R0" if n == 1 else "R1", x, 1))
    rules.append(("R0", RIGHT_END, "L0_0", None, -1))

    for c in range(n):
        down = (c - 1) % n
        for x in letters:
            y = x.letter
            if c == 0:
                rules.append((f"L0_{c}", x, f"L1_{down}{y}", x, -1))
            else:
                rules.append((f"L0_{c}", x, f"L0_{down}", x, -1))
            for carried in ALPHABET:
                rules.append((f"L1_{c}{carried}", x, f"L1_{down}{carried}", x, -1))
                if c == 0:
                    if carried == y:
                        rules.append((f"L2_{c}{carried}", x, f"L3_{down}", x, -1))
                else:
                    rules.append((f"L2_{c}{carried}", x, f"L2_{down}{carried}", x, -1))
            rules.append((f"L3_{c}", x, f"L3_{down}", x, -1))
            m = x.mark()
            if c == 0:
                rules.append((f"L1_{c}{y}", m, f"L3_{down}", m, -1))
            else:
                for carried in ALPHABET:
                    rules.append((f"L1_{c}{carried}", m, f"L2_{down}{carried}", m, -1))
            rules.append((f"L3_{c}", m, f"L3_{down}", m, -1))
        rules.append((f"L3_{c}", LEFT_END, f"S{c}", None, 1))

    for i in range(n):
        for x in letters:
            rules.append((f"S{i}", x, f"S{i}", x, 1))
            rules.append((f"S{i}", x.mark(), f"S{i}", x.mark(), 1))
        if i < n - 1:
            rules.append((f"S{i}", RIGHT_END, f"L0_{i + 1}", None, -1))
        else:
            rules.append((f"S{i}", RIGHT_END, "acc", None, 1))
    work = letters + [x.mark() for x in letters] + [LEFT_END, RIGHT_END]
    return LimitedAutomaton.from_rules(states, ALPHABET, rules, "P0", {"acc"}, work)


# ---------------------------------------------------------------------------
# Deterministic always-marking machine for J_n
#
#   A{c}      marking the first block, c = cells marked so far
#   F         moving right to the next unmarked cell; there mark it and fetch
#   W{r}{x}   carrying x leftwards to |-, r = steps taken mod n; at |- r gives
#             (t + 1) mod n where t is the in-block index of the fetched cell
#   G{k}{x}   walking right k more cells into block one, then compare
#   H{c}      match: back to |-, c = steps mod n; at |- c is the next index
#   K         mismatch: back to |-
#   X{c}      skip to the first cell of the next block, marking what it passes
#   Z         block fully matched: go right to the unmarked rest
#   C{c}      marking the rest, c = cells mod n; accept at -| when c = 0
#   acc       accepting exit state
# Total 8n + 4 states.
# ---------------------------------------------------------------------------


def gen_jn_damla(n: int) -> LimitedAutomaton:
    if n < 1:
        raise ValueError("n must be >= 1")
    letters = [TapeSymbol.input(x) for x in ALPHABET]
    marks = [x.mark() for x in letters]
    states = (
        [f"A{c}" for c in range(n)]
        + ["F"]
        + [f"W{r}{x}" for r in range(n) for x in ALPHABET]
        + [f"G{k}{x}" for k in range(n) for x in ALPHABET]
        + [f"H{c}" for c in range(n)]
        + ["K"]
        + [f"X{c}" for c in range(n)]
        + ["Z"]
        + [f"C{c}" for c in range(n)]
        + ["acc"]
    )
    rules = []
    for c in range(n):
        for x in letters:
            rules.append((f"A{c}", x, f"A{c + 1}" if c + 1 < n else "F", x.mark(), 1))
    for x, m in zip(letters, marks):
        rules.append(("F", m, "F", m, 1))
        rules.append(("F", x, f"W{1 % n}{x.letter}", m, -1))
    for r in range(n):
        for y in ALPHABET:
            for m in marks:
                rules.append((f"W{r}{y}", m, f"W{(r + 1) % n}{y}", m, -1))
            rules.append((f"W{r}{y}", LEFT_END, f"G{(r - 1) % n}{y}", None, 1))
    for k in range(n):
        for y in ALPHABET:
            for m in marks:
                if k > 0:
                    rules.append((f"G{k}{y}", m, f"G{k - 1}{y}", m, 1))
                elif m.letter == y:
                    rules.append((f"G{k}{y}", m, f"H{1 % n}", m, -1))
                else:
                    rules.append((f"G{k}{y}", m, "K", m, -1))
    for c in range(n):
        for m in marks:
            rules.append((f"H{c}", m, f"H{(c + 1) % n}", m, -1))
        rules.append((f"H{c}", LEFT_END, "Z" if c == 0 else "F", None, 1))
    for m in marks:
        rules.append(("K", m, "K", m, -1))
    rules.append(("K", LEFT_END, "X0", None, 1))
    for c in range(n):
        nc = (c + 1) % n
        for x, m in zip(letters, marks):
            rules.append((f"X{c}", m, f"X{nc}", m, 1))
            if c == 0:
                rules.append((f"X{c}", x, f"W{1 % n}{x.letter}", m, -1))
            else:
                rules.append((f"X{c}", x, f"X{nc}", m, 1))
    for x, m in zip(letters, marks):
        rules.append(("Z", m, "Z", m, 1))
        rules.append(("Z", x, f"C{1 % n}", m, 1))
    rules.append(("Z", RIGHT_END, "acc", None, 1))
    for c in range(n):
        for x, m in zip(letters, marks):
            rules.append((f"C{c}", x, f"C{(c + 1) % n}", m, 1))
    rules.append(("C0", RIGHT_END, "acc", None, 1))
    work = letters + marks + [LEFT_END, RIGHT_END]
    return LimitedAutomaton.from_rules(states, ALPHABET, rules, "A0", {"acc"}, work)


# ---------------------------------------------------------------------------
# Reference DFAs built straight from the language definitions
# ---------------------------------------------------------------------------


def _explore(start, step, accepting, letters) -> OneWayDFA:
    order = [start]
    seen = {start}
    delta = {}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for a in letters:
            r = step(q, a)
            delta[(q, a)] = r
            if r not in seen:
                seen.add(r)
                order.append(r)
                queue.append(r)
    return OneWayDFA(tuple(order), letters, delta, start, {q for q in order if accepting(q)})


def kn_reference_dfa(n: int, cap: int = REFERENCE_DFA_CAP) -> OneWayDFA:
    """States ``(blocks seen, partial block, last completed block was seen before)``."""
    if n < 1 or n > cap:
        raise ValueError(f"n must be in 1..{cap}")

    def step(state, a):
        seen, partial, hit = state
        partial += a
        if len(partial) < n:
            return (seen, partial, False)
        return (seen | {partial}, "", partial in seen)

    return _explore((frozenset(), "", False), step, lambda s: s[1] == "" and s[2], ALPHABET)


def jn_reference_dfa(n: int, cap: int = REFERENCE_DFA_CAP) -> OneWayDFA:
    """States ``(first block or its prefix, partial later block, matched)``."""
    if n < 1 or n > cap:
        raise ValueError(f"n must be in 1..{cap}")

    def step(state, a):
        first, partial, matched = state
        if len(first) < n:
            return (first + a, "", False)
        partial += a
        if len(partial) < n:
            return (first, partial, matched)
        return (first, "", matched or partial == first)

    def accepting(state):
        first, partial, matched = state
        return len(first) == n and partial == "" and matched

    return _explore(("", "", False), step, accepting, ALPHABET)


# ---------------------------------------------------------------------------
# Fooling sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FoolingPair:
    u: str
    v: str


@dataclass(frozen=True)
class Certified:
    size: int


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    reason: str


def jn_fooling_set(n: int, cap: int = FOOLING_CAP) -> list[FoolingPair]:
    """The pairs ``(x, x)`` for every block ``x`` in {a, b}^n."""
    if n < 1 or n > cap:
        raise ValueError(f"n must be in 1..{cap}")
    return [FoolingPair("".join(x), "".join(x)) for x in product(ALPHABET, repeat=n)]


def verify_fooling_set(member, pairs) -> Certified | Violation:
    """Certify that every NFA for ``member`` needs at least ``len(pairs)`` states."""
    pairs = list(pairs)
    for i, pair in enumerate(pairs):
        if not member(pair.u + pair.v):
            return Violation(i, i, f"{pair.u + pair.v!r} is not in the language")
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            cross1 = pairs[i].u + pairs[j].v
            cross2 = pairs[j].u + pairs[i].v
            if member(cross1) and member(cross2):
                return Violation(i, j, f"both {cross1!r} and {cross2!r} are in the language")
    return Certified(len(pairs))
