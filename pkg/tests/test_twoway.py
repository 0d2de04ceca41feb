import pytest
from hypothesis import given, settings, strategies as st

from onela.analysis import random_domla
from onela.core import LEFT_END, RIGHT_END, LimitedAutomaton, TapeSymbol, classify
from onela.execution import accepts, enumerate_words
from onela.twoway import (
    MarkRecord,
    backward_predecessors,
    bound_constant,
    compile_twdfa,
    domla_to_twdfa,
    first_visit_search,
    sipser_search,
    state_bound,
)
from onela.witnesses import gen_jn_damla, gen_kn_omla

from conftest import A, B


def forward_reaches(la, word, s, j):
    """Follow the non-marking run from the start and report whether it visits (s, j)."""
    tape = (LEFT_END, *(TapeSymbol.input(x) for x in word), RIGHT_END)
    q, i, seen = la.initial, 1, set()
    while 0 <= i < len(tape) and (q, i) not in seen:
        if (q, i) == (s, j):
            return True
        seen.add((q, i))
        moves = la.delta(q, tape[i])
        if not moves:
            return False
        t = next(iter(moves))
        if t.write != tape[i]:
            return False
        q, i = t.target, i + t.move
    return False


def check_equivalent(la, max_len):
    comp = compile_twdfa(la)
    profile = classify(comp.machine)
    assert profile.deterministic and profile.write_free
    n = len(la.states)
    assert comp.size <= state_bound(n, len(la.input_alphabet)) <= bound_constant(2) * n ** 3
    for w in enumerate_words(la.input_alphabet, max_len):
        assert accepts(comp.machine, w) == accepts(la, w), "".join(w)
    return comp


def test_handcrafted_machine_uses_search(fel):
    comp = check_equivalent(fel, 8)
    counts = comp.mode_counts()
    assert counts["search"] > 0 and counts["rollback"] > 0


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 1_000_000), budget=st.integers(2, 6))
def test_random_machines_compile_to_equivalent_twdfa(seed, budget):
    check_equivalent(random_domla(seed, budget), 7)


def test_bound_constant():
    assert bound_constant(2) == 45
    for letters in (1, 2, 3):
        for n in range(1, 30):
            assert state_bound(n, letters) <= bound_constant(letters) * n ** 3


def marks_on_return() -> LimitedAutomaton:
    """Reads a, bounces off -| and tries to mark the cell it already visited."""
    rules = [
        ("q0", A, "p", A, 1),
        ("q0", B, "p", B, 1),
        ("p", RIGHT_END, "p", None, -1),
        ("p", A, "m", A.mark(), 1),
        ("p", B, "p", B, 1),
        ("m", RIGHT_END, "acc", None, 1),
    ]
    return LimitedAutomaton.from_rules(["q0", "p", "m", "acc"], "ab", rules, "q0", {"acc"})


def test_marking_a_frozen_cell_halts():
    la = marks_on_return()
    assert not accepts(la, "a") and accepts(la, "ba")
    comp = check_equivalent(la, 8)
    assert comp.mode_counts()["check"] > 0


def first_arrival(la, word, j):
    """State of the non-marking run on its first arrival at cell j, or None."""
    tape = (LEFT_END, *(TapeSymbol.input(x) for x in word), RIGHT_END)
    q, i, seen = la.initial, 1, set()
    while 0 <= i < len(tape) and (q, i) not in seen:
        if i == j:
            return q
        seen.add((q, i))
        moves = la.delta(q, tape[i])
        if not moves:
            return None
        t = next(iter(moves))
        if t.write != tape[i]:
            return None
        q, i = t.target, i + t.move
    return None


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 1_000_000))
def test_first_visit_search_matches_forward_run(seed):
    la = random_domla(seed, 5)
    for w in enumerate_words("ab", 5):
        for j, x in enumerate(w, 1):
            sym = TapeSymbol.input(x)
            for s in la.states:
                moves = la.delta(s, sym)
                if not moves or next(iter(moves)).write == sym or not forward_reaches(la, w, s, j):
                    continue
                assert first_visit_search(la, w, MarkRecord(s, x), j) == (first_arrival(la, w, j) == s)


def test_rejects_unsuitable_machines(guesser):
    with pytest.raises(ValueError):
        domla_to_twdfa(gen_kn_omla(1))  # nondeterministic
    with pytest.raises(ValueError):
        domla_to_twdfa(gen_jn_damla(1))  # marks every cell


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 1_000_000))
def test_backward_search_matches_forward_run(seed):
    la = random_domla(seed, 5)
    for w in enumerate_words("ab", 5):
        for j, x in enumerate(w, 1):
            sym = TapeSymbol.input(x)
            for s in la.states:
                moves = la.delta(s, sym)
                if not moves or next(iter(moves)).write == sym:
                    continue
                assert sipser_search(la, w, MarkRecord(s, x), j) == forward_reaches(la, w, s, j)


def test_backward_search_needs_a_marking_step(fel):
    with pytest.raises(ValueError):
        sipser_search(fel, "ab", MarkRecord("back", "a"), 1)
    with pytest.raises(ValueError):
        sipser_search(fel, "ab", MarkRecord("q0", "b"), 1)
    assert sipser_search(fel, "ab", MarkRecord("q0", "a"), 1)


def test_backward_predecessors(fel):
    # "back" is entered by moving left from a cell holding b (states lb, back)
    preds = backward_predecessors(fel, "back", left=A, right=B)
    assert preds == [("lb", -1), ("back", -1)]  # ascending state index
    assert backward_predecessors(fel, "back", left=None, right=None) == []
    assert ("fin", 1) in backward_predecessors(fel, "fin", left=A, right=B)
