import json

import pytest
from hypothesis import given, settings, strategies as st

from onela.analysis import gap_experiment, language_equiv_bounded, random_domla, random_la
from onela.conversions import Counterexample, Equal, determinize, la_to_ownfa, minimize_dfa
from onela.core import classify, validate
from onela.witnesses import gen_jn_damla, gen_kn_omla, jn_reference_dfa


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10 ** 9), budget=st.integers(2, 6))
def test_random_domla_is_deterministic_once_marking(seed, budget):
    la = random_domla(seed, budget)
    assert validate(la) == []
    assert 2 <= len(la.states) <= budget
    profile = classify(la)
    assert profile.deterministic and profile.structurally_once_marking


def test_random_machines_are_reproducible():
    assert random_domla(7, 5) == random_domla(7, 5)
    assert random_la(7, 4) == random_la(7, 4)
    assert random_la(7, 4) != random_la(8, 4)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10 ** 9))
def test_random_la_is_valid(seed):
    la = random_la(seed, 4)
    assert validate(la) == []
    assert len(la.states) <= 4


def test_bounded_equivalence():
    jn = gen_jn_damla(1)
    assert language_equiv_bounded(jn, jn_reference_dfa(1), 8) == Equal()
    assert language_equiv_bounded(jn, minimize_dfa(determinize(la_to_ownfa(jn))), 6) == Equal()
    verdict = language_equiv_bounded(jn, gen_kn_omla(1), 6)
    assert isinstance(verdict, Counterexample)
    assert verdict.word == ("a", "a", "b")


def test_bounded_equivalence_needs_same_alphabet():
    from onela.core import OneWayDFA

    with pytest.raises(ValueError):
        language_equiv_bounded(gen_jn_damla(1), OneWayDFA(["s"], "ac", {}, "s", []), 2)


def test_gap_experiment_jn():
    report = gap_experiment("jn", range(1, 5), 6)
    assert report.passed
    rows = {r.n: r for r in report.rows}
    assert rows[4].status.startswith("skipped")
    assert [rows[n].min_dfa_states for n in (1, 2, 3)] == [4, 17, 50]
    assert [rows[n].fooling_lower_bound for n in (1, 2, 3)] == [2, 4, 8]
    for n in (1, 2, 3):
        k = rows[n].la_states
        assert rows[n].am_dfa_states <= k * (k + 1) ** k


def test_gap_experiment_kn():
    report = gap_experiment("kn", [1, 2], 6)
    assert report.passed
    assert [r.min_dfa_states for r in report.rows] == [7, 62]
    assert all(r.am_dfa_states is None for r in report.rows)


def test_report_is_stable_without_timings():
    a = gap_experiment("jn", [1, 2], 5).to_json()
    b = gap_experiment("jn", [1, 2], 5).to_json()
    assert a == b
    assert "seconds" not in a
    assert "seconds" in json.dumps(gap_experiment("jn", [1], 4).to_dict(timings=True))


def test_gap_experiment_rejects_bad_arguments():
    with pytest.raises(ValueError):
        gap_experiment("xn", [1], 4)
    with pytest.raises(ValueError):
        gap_experiment("jn", [1], 13)


def test_table_mentions_every_row():
    text = gap_experiment("jn", [1, 2], 4).format_table()
    assert len(text.splitlines()) == 4
