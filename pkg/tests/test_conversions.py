from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from onela.analysis import random_domla, random_la
from onela.conversions import (
    Counterexample,
    Equal,
    TransitionTable,
    amla_to_owdfa,
    base_table,
    determinize,
    dfa_equiv,
    extend_table,
    la_to_ownfa,
    minimize_dfa,
    sample_dfa,
    truncate_dfa,
    twofa_to_owdfa,
)
from onela.core import LEFT_END, OneWayDFA, OneWayNFA
from onela.execution import accepts, enumerate_words
from onela.witnesses import gen_jn_damla, gen_kn_omla, jn_reference_dfa, kn_reference_dfa


def segment_table(la, segment):
    """Exits to the right from the frozen segment |- segment, by direct search per entry state."""
    cells = (LEFT_END, *segment)
    last = len(cells) - 1
    pairs = set()
    for p in la.states:
        seen = {(p, last)}
        stack = [(p, last)]
        while stack:
            q, i = stack.pop()
            for t in la.delta(q, cells[i]):
                if t.write != cells[i]:
                    continue
                j = i + t.move
                if j > last:
                    pairs.add((p, t.target))
                elif j >= 0 and (t.target, j) not in seen:
                    seen.add((t.target, j))
                    stack.append((t.target, j))
    return pairs


def tables_agree(la, max_len):
    symbols = [s for s in la.work_alphabet if not s.is_end_marker]
    assert set(base_table(la)) == segment_table(la, ())
    for n in range(1, max_len + 1):
        for seg in product(symbols, repeat=n):
            table = base_table(la)
            for sym in seg:
                table = extend_table(la, table, sym)
            assert set(table) == segment_table(la, seg), seg


@pytest.mark.parametrize("machine", [gen_kn_omla(1), gen_jn_damla(1)], ids=["kn1", "jn1"])
def test_tables_match_segment_search_on_witnesses(machine):
    tables_agree(machine, 3)


def test_tables_match_segment_search_on_random_machines():
    for seed in range(25):
        tables_agree(random_la(seed, 3), 3)


def test_extend_rejects_end_markers():
    la = gen_jn_damla(1)
    with pytest.raises(ValueError):
        extend_table(la, base_table(la), LEFT_END)


def test_table_pairs_are_ordered():
    t = TransitionTable(frozenset({("b", "a"), ("a", "b")}))
    assert t.pairs() == [("a", "b"), ("b", "a")]
    assert t.pairs(["b", "a"]) == [("b", "a"), ("a", "b")]
    assert t.image("a") == {"b"}


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_frontier_nfa_matches_configuration_search(seed):
    la = random_la(seed, 4)
    nfa = la_to_ownfa(la)
    for w in enumerate_words("ab", 6):
        assert nfa.accepts(w) == accepts(la, w), w


def test_frontier_nfa_on_handcrafted(fel, guesser, ends_with_a):
    for la in (fel, guesser, ends_with_a):
        nfa = la_to_ownfa(la)
        for w in enumerate_words("ab", 7):
            assert nfa.accepts(w) == accepts(la, w)


def test_twofa_conversion(ends_with_a, fel):
    dfa = twofa_to_owdfa(ends_with_a)
    assert minimize_dfa(dfa).size == 2
    assert dfa.accepts("ba") and not dfa.accepts("ab")
    with pytest.raises(ValueError):
        twofa_to_owdfa(fel)


@pytest.mark.parametrize("n", [1, 2])
def test_always_marking_dfa(n):
    la = gen_jn_damla(n)
    dfa = amla_to_owdfa(la)
    assert dfa.is_complete()
    assert dfa.size <= (2 ** len(la.states) - 1) * 2 ** (len(la.states) ** 2) + 1
    assert dfa_equiv(minimize_dfa(dfa), minimize_dfa(jn_reference_dfa(n))) == Equal()


def test_always_marking_dfa_requires_discipline():
    with pytest.raises(ValueError):
        amla_to_owdfa(gen_kn_omla(1))


def test_determinize_empty_language():
    nfa = OneWayNFA(["s"], "ab", {}, "s", [])
    dfa = determinize(nfa)
    assert dfa.size == 2
    assert minimize_dfa(dfa).size == 1


def test_minimize_is_canonical_and_idempotent():
    ref = kn_reference_dfa(2)
    m = minimize_dfa(ref)
    assert minimize_dfa(m) == m
    assert m.size == minimize_dfa(determinize(ref.as_nfa())).size
    assert minimize_dfa(ref.relabeled("x")) == m


def distinguishable(dfa, p, q, max_len):
    for w in enumerate_words(dfa.alphabet, max_len):
        a, b = p, q
        for x in w:
            a, b = dfa.step(a, x), dfa.step(b, x)
        if (a in dfa.finals) != (b in dfa.finals):
            return True
    return False


def test_minimal_dfa_states_are_pairwise_distinguishable():
    m = minimize_dfa(jn_reference_dfa(2))
    for p, q in product(m.states, repeat=2):
        if p < q:
            assert distinguishable(m, p, q, m.size)


def brute_counterexample(d1, d2, max_len):
    for w in enumerate_words(sorted(d1.alphabet), max_len):
        if d1.accepts(w) != d2.accepts(w):
            return w
    return None


@settings(max_examples=60, deadline=None)
@given(s1=st.integers(0, 10_000), s2=st.integers(0, 10_000))
def test_equivalence_counterexample_is_shortest_lex_least(s1, s2):
    d1 = determinize(la_to_ownfa(random_la(s1, 3)))
    d2 = determinize(la_to_ownfa(random_la(s2, 3)))
    verdict = dfa_equiv(d1, d2)
    expected = brute_counterexample(d1, d2, 8)
    if isinstance(verdict, Counterexample):
        assert verdict.word == expected
    else:
        assert expected is None


def test_equivalence_handles_partial_dfas():
    d1 = OneWayDFA(["s"], "ab", {("s", "a"): "s"}, "s", ["s"])
    d2 = d1.completed()
    assert dfa_equiv(d1, d2) == Equal()
    d3 = OneWayDFA(["s"], "ab", {("s", "a"): "s", ("s", "b"): "s"}, "s", ["s"])
    assert dfa_equiv(d1, d3).word == ("b",)
    with pytest.raises(ValueError):
        dfa_equiv(d1, OneWayDFA(["s"], "ac", {}, "s", []))


def test_truncate_and_sample():
    dfa = minimize_dfa(jn_reference_dfa(1))
    cut = truncate_dfa(dfa, 4)
    sample = sample_dfa(dfa.accepts, "ab", 4)
    assert dfa_equiv(minimize_dfa(cut), minimize_dfa(sample)) == Equal()
    assert not cut.accepts("aaaaa") and dfa.accepts("aaaaa")


def test_conversion_pipeline_on_random_domla():
    for seed in range(10):
        la = random_domla(seed, 5)
        dfa = minimize_dfa(determinize(la_to_ownfa(la)))
        for w in enumerate_words("ab", 6):
            assert dfa.accepts(w) == accepts(la, w)
