"""Deterministic once-marking 1-LA -> write-free two-way DFA.

The compiled machine carries three components: the simulated state, the mark
record ``(s, sigma)`` and, during a verification, one state of a depth-first
walk over the predecessor tree of the configuration ``(s, j)``.

Modes:

* ``before``   simulate directly.  When the marking transition is reached on
  cell ``j``, first check that ``j`` is visited for the first time (a frozen
  cell cannot be marked and the source machine halts there).
* ``check``    the first-visit test: walk the predecessor tree of ``(s, j)``
  skipping every other node on cell ``j``.  ``j`` is fresh iff ``(q_I, 1)`` is
  found.  Whether a node sits on cell ``j`` is decided by a nested ``inner``
  search, the same test that ``after`` uses.
* ``fire``     the check succeeded: rerun from the initial configuration back
  to ``(s, j)`` and take the marking transition.
* ``after``    simulate directly; on a cell holding ``sigma`` check whether it is
  the marked cell before choosing the transition on ``sigma`` or its mark.
* ``search``   walk the predecessor tree of ``(s, j)``.  The tree edges are
  single head moves, the parent of a node is its unique forward step, and the
  siblings of a node all sit on the same cell, so the walk needs one simulated
  state plus a constant tag.  Reaching ``(q_I, 1)`` proves that ``j`` is the
  marked cell; exhausting the tree leaves the head back on ``j``.
* ``rollback`` after a successful search, rerun the machine from the initial
  configuration until the marking transition is about to fire, which puts the
  head back on ``j``.
* ``inner`` / ``inner-rollback`` the same two steps nested inside ``check``;
  they carry the node of the outer walk instead of a simulated state.

Children of a node are visited side by side: first those on the cell to its
right (they reached the node with a left move), then those on its left, and on
each side by ascending state index.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .core import (
    INPUT,
    LEFT_END,
    RIGHT_END,
    LimitedAutomaton,
    TapeSymbol,
    classify,
    is_marking_step,
    split_word,
)

SIDES = (-1, 1)  # direction of the child's move into the node

BEFORE = "before"
AFTER = "after"
SEARCH = "search"
ROLLBACK = "rollback"
CHECK = "check"
FIRE = "fire"
INNER = "inner"
INNER_ROLLBACK = "inner-rollback"

# walk mode -> the rollback mode entered when the walk finds (q_I, 1)
_ROLLBACK_OF = {SEARCH: ROLLBACK, CHECK: FIRE, INNER: INNER_ROLLBACK}
_PREFIX = {SEARCH: "S", ROLLBACK: "R", CHECK: "C", FIRE: "F", INNER: "I", INNER_ROLLBACK: "J"}

# search tags
PEEK = "peek"            # moved left from a q_I node to look for |-
PEEK_BACK = "back"       # returned from the peek, node not initial
FIRST_CHILD = "child"    # moved onto a side cell to find the first child
SIDE_DONE = "side"       # returned to the node after finishing one side


class MarkRecord(NamedTuple):
    state: object   # the state before marking
    letter: str     # the marked input letter


class ComposedState(NamedTuple):
    mode: str
    sim: object                  # simulated state; for inner walks the outer node
    record: MarkRecord | None = None
    tag: str | None = None       # search tag
    node: object = None          # walk: node state; rollback: replayed state
    side: int = 0

    def name(self) -> str:
        if self.mode == BEFORE:
            return f"B[{self.sim}]"
        rec = f"{self.record.state}.{self.record.letter}"
        if self.mode == AFTER:
            return f"A[{self.sim};{rec}]"
        head = _PREFIX[self.mode]
        ctx = "" if self.sim is None else f"{self.sim};"
        if self.tag is None:
            return f"{head}[{ctx}{rec};{self.node}]"
        side = {-1: "-", 1: "+", 0: ""}[self.side]
        return f"{head}[{ctx}{rec};{self.tag}{side};{self.node}]"


@dataclass(frozen=True)
class TwoWayCompilation:
    machine: LimitedAutomaton
    composed: dict  # state name -> ComposedState
    source_states: int

    @property
    def size(self) -> int:
        return len(self.machine.states)

    def mode_counts(self) -> dict:
        counts: dict = {}
        for c in self.composed.values():
            counts[c.mode] = counts.get(c.mode, 0) + 1
        return counts


def state_bound(n: int, letters: int) -> int:
    """Upper bound on the compiled state count for ``n`` states and ``letters`` input letters.

    With r = n*letters records and w = 2 + 4n walk states per node context:
    before n, after n*r, search n*r*w, rollback n*r*n, check r*w, fire r*n,
    inner n*r*w, inner-rollback n*r*n.
    """
    r = n * letters
    w = 2 + 4 * n
    return n + n * r + n * r * w + n * r * n + r * w + r * n + n * r * w + n * r * n


def bound_constant(letters: int) -> int:
    """C with ``state_bound(n, letters) <= C * n**3`` for every n >= 1."""
    # state_bound = n + letters * (10n^3 + 10n^2 + 2n)
    return 1 + 22 * letters


class _Oracle:
    """Lookups on a deterministic machine shared by the compiler and the direct search."""

    def __init__(self, la: LimitedAutomaton):
        self.la = la
        self.index = {q: i for i, q in enumerate(la.states)}
        self.delta = {k: next(iter(v)) for k, v in la.transitions.items()}
        # children[(p, d, Y)] = states p' with delta(p', Y) = (p, Y, d), ascending
        self.children: dict = {}
        self.has_children: set = set()
        for (q, scanned), t in sorted(self.delta.items(), key=lambda kv: self.index[kv[0][0]]):
            if t.write == scanned:
                self.children.setdefault((t.target, t.move, scanned), []).append(q)
                self.has_children.add((t.target, t.move))

    def step(self, q, scanned):
        return self.delta.get((q, scanned))

    def plain_step(self, q, scanned):
        t = self.delta.get((q, scanned))
        if t is None or t.write != scanned:
            return None
        return t

    def first_child(self, p, d, scanned):
        kids = self.children.get((p, d, scanned))
        return kids[0] if kids else None

    def next_sibling(self, p, scanned):
        t = self.plain_step(p, scanned)
        if t is None:
            return None
        kids = self.children[(t.target, t.move, scanned)]
        pos = kids.index(p)
        return kids[pos + 1] if pos + 1 < len(kids) else None

    def effect(self, q, cell: TapeSymbol):
        """Move of ``q`` on a frozen cell holding ``cell``; None if the branch halts."""
        t = self.delta.get((q, cell))
        if t is None or t.write != cell:
            return None
        return (t.target, t.move)


def _side_exists(scanned: TapeSymbol, d: int) -> bool:
    # A child reaching the node with move d sits on cell i - d.
    if scanned == LEFT_END and d == 1:
        return False
    if scanned == RIGHT_END and d == -1:
        return False
    return True


def _move_allowed(scanned: TapeSymbol, d: int) -> bool:
    return not (scanned == LEFT_END and d == -1) and not (scanned == RIGHT_END and d == 1)


def backward_predecessors(la: LimitedAutomaton, q, left: TapeSymbol | None, right: TapeSymbol | None):
    """Symbol-preserving predecessors ``(p, d)`` of state ``q`` on a cell with the given neighbours.

    ``d`` is the move from the predecessor's cell into the cell of ``q``; the
    predecessor with ``d = -1`` reads ``right``, the one with ``d = +1`` reads
    ``left``.  A missing neighbour is ``None``.  Ordered as the search visits them.
    """
    oracle = _Oracle(la)
    out = []
    for d in SIDES:
        letter = right if d == -1 else left
        if letter is None:
            continue
        out.extend((p, d) for p in oracle.children.get((q, d, letter), ()))
    return out


def _walk(o: _Oracle, tape, s, target, j, skip=None) -> bool:
    """Depth-first walk of the predecessor tree of ``(s, j)`` looking for ``(q_I, 1)``.

    Keeps only the current node (state, cell) and a constant tag, exactly as
    the compiled search does.  Nodes for which ``skip(p, i)`` holds are treated
    as leaves that do not contain the initial configuration.
    """
    p, i = s, j
    action, side_from = "node", 0
    while True:
        if action == "node":
            if skip is not None and (p, i) != (s, j) and skip(p, i):
                action = "exhausted"
                continue
            if p == o.la.initial and i == 1:
                return True
            action, side_from = "children", 0
        if action == "children":
            for k in range(side_from, len(SIDES)):
                d = SIDES[k]
                if not _side_exists(tape[i], d) or (p, d) not in o.has_children:
                    continue
                child = o.first_child(p, d, tape[i - d])
                if child is not None:
                    p, i = child, i - d
                    action = "node"
                    break
            else:
                action = "exhausted"
            continue
        # exhausted: every child of (p, i) has been walked
        if p == s and tape[i] == target:
            return False
        sibling = o.next_sibling(p, tape[i])
        if sibling is not None:
            p, action = sibling, "node"
            continue
        t = o.plain_step(p, tape[i])
        p, i = t.target, i + t.move
        action, side_from = "children", SIDES.index(t.move) + 1


def _prepare(la, word, record, j):
    s, sigma = record
    letters = split_word(word, la.input_alphabet)
    tape = (LEFT_END, *(TapeSymbol.input(a) for a in letters), RIGHT_END)
    if not 1 <= j <= len(letters) or tape[j] != TapeSymbol.input(sigma):
        raise ValueError("cell j must hold the marked letter")
    o = _Oracle(la)
    target = TapeSymbol.input(sigma)
    if o.step(s, target) is None or o.plain_step(s, target) is not None:
        # Otherwise (s, j) may lie on a cycle and the walk would not terminate.
        raise ValueError(f"({s}, {sigma}) is not a marking step")
    return o, tape, s, target


def sipser_search(la: LimitedAutomaton, word, record: MarkRecord, j: int) -> bool:
    """Does the marking-free run from the initial configuration reach ``(record.state, j)``?"""
    o, tape, s, target = _prepare(la, word, record, j)
    return _walk(o, tape, s, target, j)


def first_visit_search(la: LimitedAutomaton, word, record: MarkRecord, j: int) -> bool:
    """Does the marking-free run reach ``(record.state, j)`` on its first visit to cell ``j``?

    Walks the predecessor tree of ``(s, j)`` and skips every other node on cell
    ``j``; a node on a cell holding ``sigma`` is on cell ``j`` exactly when
    :func:`sipser_search` succeeds from that cell, because ``(s, j)`` is the
    only configuration on a ``sigma`` cell in state ``s`` that the run can reach.
    """
    o, tape, s, target = _prepare(la, word, record, j)
    if not _walk(o, tape, s, target, j):
        raise ValueError(f"the marking-free run does not reach ({s}, {j})")

    def on_cell_j(p, i):
        return tape[i] == target and _walk(o, tape, s, target, i)

    return _walk(o, tape, s, target, j, skip=on_cell_j)


class _Compiler:
    def __init__(self, la: LimitedAutomaton):
        self.la = la
        self.o = _Oracle(la)
        self.symbols = [LEFT_END, *la.letters(), RIGHT_END]

    # Each handler returns (next real state, move) or None when the run halts.
    # Helpers named _at_* act without moving the head and may chain.
    # Walk handlers take (mode, ctx): ctx is the simulated state in search, the
    # outer node in inner, and None in check.

    def act(self, st: ComposedState, x: TapeSymbol):
        if st.mode == BEFORE:
            return self._before(st.sim, x)
        if st.mode == AFTER:
            return self._after(st.sim, st.record, x)
        if st.mode in (ROLLBACK, FIRE, INNER_ROLLBACK):
            return self._rollback(st, x)
        mode, ctx, rec = st.mode, st.sim, st.record
        if st.tag == PEEK:
            if x == LEFT_END:
                return ComposedState(_ROLLBACK_OF[mode], ctx, rec, node=self.la.initial), 1
            return ComposedState(mode, ctx, rec, PEEK_BACK, st.node), 1
        if st.tag == PEEK_BACK:
            return self._at_children(mode, ctx, rec, st.node, x, 0)
        if st.tag == FIRST_CHILD:
            child = self.o.first_child(st.node, st.side, x)
            if child is not None:
                return self._at_node(mode, ctx, rec, child, x)
            return ComposedState(mode, ctx, rec, SIDE_DONE, st.node, st.side), st.side
        if st.tag == SIDE_DONE:
            return self._at_children(mode, ctx, rec, st.node, x, SIDES.index(st.side) + 1)
        raise AssertionError(st)

    def _before(self, q, x):
        t = self.o.step(q, x)
        if t is None or not _move_allowed_or_exit(x, t.move):
            return None
        if t.write == x:
            return ComposedState(BEFORE, t.target), t.move
        if is_marking_step(x, t):
            return self._at_node(CHECK, None, MarkRecord(q, x.letter), q, x)
        return None

    def _after(self, q, rec, x):
        if x.kind == INPUT and x.letter == rec.letter:
            plain = self.o.effect(q, x)
            marked = self.o.effect(q, x.mark())
            if plain == marked:
                return self._apply(rec, plain)
            return self._at_node(SEARCH, q, rec, rec.state, x)
        return self._apply(rec, self.o.effect(q, x))

    def _apply(self, rec, effect):
        if effect is None:
            return None
        target, move = effect
        return ComposedState(AFTER, target, rec), move

    def _rollback(self, st, x):
        rec = st.record
        if st.node == rec.state and x == TapeSymbol.input(rec.letter):
            if st.mode == ROLLBACK:
                return self._apply(rec, self.o.effect(st.sim, x.mark()))
            if st.mode == INNER_ROLLBACK:
                # the outer node sits on cell j: skip its subtree
                return self._at_exhausted(CHECK, None, rec, st.sim, x)
            t = self.o.step(rec.state, x)
            return ComposedState(AFTER, t.target, rec), t.move
        t = self.o.plain_step(st.node, x)
        if t is None or not _move_allowed(x, t.move):
            return None
        return ComposedState(st.mode, st.sim, rec, node=t.target), t.move

    def _at_node(self, mode, ctx, rec, p, x, checked=False):
        if mode == CHECK and not checked and p != rec.state and x == TapeSymbol.input(rec.letter):
            return self._at_node(INNER, p, rec, rec.state, x)
        if p == self.la.initial and x != LEFT_END:
            return ComposedState(mode, ctx, rec, PEEK, p), -1
        return self._at_children(mode, ctx, rec, p, x, 0)

    def _at_children(self, mode, ctx, rec, p, x, start):
        for k in range(start, len(SIDES)):
            d = SIDES[k]
            if _side_exists(x, d) and (p, d) in self.o.has_children:
                return ComposedState(mode, ctx, rec, FIRST_CHILD, p, d), -d
        return self._at_exhausted(mode, ctx, rec, p, x)

    def _at_exhausted(self, mode, ctx, rec, p, x):
        if p == rec.state and x == TapeSymbol.input(rec.letter):
            if mode == SEARCH:
                return self._apply(rec, self.o.effect(ctx, x))
            if mode == INNER:
                # the outer node is on another cell: walk it normally
                return self._at_node(CHECK, None, rec, ctx, x, checked=True)
            return None  # cell j was visited before: the source machine halts
        sibling = self.o.next_sibling(p, x)
        if sibling is not None:
            return self._at_node(mode, ctx, rec, sibling, x)
        t = self.o.plain_step(p, x)
        if t is None or not _move_allowed(x, t.move):
            return None
        return ComposedState(mode, ctx, rec, SIDE_DONE, t.target, t.move), t.move

    def compile(self) -> TwoWayCompilation:
        start = ComposedState(BEFORE, self.la.initial)
        order = [start]
        seen = {start}
        rules = []
        queue = deque([start])
        while queue:
            st = queue.popleft()
            for x in self.symbols:
                res = self.act(st, x)
                if res is None:
                    continue
                nxt, move = res
                rules.append((st, x, nxt, move))
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                    queue.append(nxt)
        names = {c: c.name() for c in order}
        if len(set(names.values())) != len(names):
            raise ValueError("state names of the source machine make composed names ambiguous")
        finals = {names[c] for c in order if c.mode in (BEFORE, AFTER) and c.sim in self.la.finals}
        machine = LimitedAutomaton.from_rules(
            [names[c] for c in order],
            self.la.input_alphabet,
            [(names[a], x, names[b], x, d) for a, x, b, d in rules],
            names[start],
            finals,
            [*self.la.letters(), LEFT_END, RIGHT_END],
        )
        return TwoWayCompilation(machine, {v: k for k, v in names.items()}, len(self.la.states))


def _move_allowed_or_exit(x, move):
    return not (x == LEFT_END and move == -1)


def compile_twdfa(la: LimitedAutomaton) -> TwoWayCompilation:
    profile = classify(la)
    if not profile.deterministic:
        raise ValueError("domla_to_twdfa needs a deterministic machine")
    if not profile.structurally_once_marking:
        raise ValueError("domla_to_twdfa needs a structurally once-marking machine")
    return _Compiler(la).compile()


def domla_to_twdfa(la: LimitedAutomaton) -> LimitedAutomaton:
    """An equivalent deterministic write-free two-way machine."""
    return compile_twdfa(la).machine
