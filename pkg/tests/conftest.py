import pytest

from onela.core import LEFT_END, RIGHT_END, LimitedAutomaton, TapeSymbol

A, B = TapeSymbol.input("a"), TapeSymbol.input("b")
A_, B_ = A.mark(), B.mark()


def first_equals_last() -> LimitedAutomaton:
    """Deterministic once-marking: nonempty words whose first and last letters agree.

    Marks cell 1, walks to -|, checks the last letter, then walks back left
    until it meets the mark, which makes the two-way compilation search.
    """
    rules = []
    for x, name in ((A, "a"), (B, "b")):
        rules.append(("q0", x, f"r{name}", x.mark(), 1))
        for y in (A, B):
            rules.append((f"r{name}", y, f"r{name}", y, 1))
        rules.append((f"r{name}", RIGHT_END, f"l{name}", None, -1))
        rules.append((f"l{name}", x, "back", x, -1))
        rules.append((f"l{name}", x.mark(), "fin", x.mark(), 1))
    for y in (A, B):
        rules.append(("back", y, "back", y, -1))
        rules.append(("back", y.mark(), "fin", y.mark(), 1))
        rules.append(("fin", y, "fin", y, 1))
    rules.append(("fin", RIGHT_END, "acc", None, 1))
    states = ["q0", "ra", "rb", "la", "lb", "back", "fin", "acc"]
    return LimitedAutomaton.from_rules(states, "ab", rules, "q0", {"acc"})


def ends_with_a_twoway() -> LimitedAutomaton:
    """Write-free deterministic machine: go to -|, step back, accept iff the last letter is a."""
    rules = [
        ("go", A, "go", A, 1), ("go", B, "go", B, 1),
        ("go", RIGHT_END, "look", None, -1),
        ("look", A, "ok", A, 1),
        ("ok", RIGHT_END, "acc", None, 1),
    ]
    return LimitedAutomaton.from_rules(["go", "look", "ok", "acc"], "ab", rules, "go", {"acc"})


def guess_and_rewrite() -> LimitedAutomaton:
    """Nondeterministic machine with a work letter: some a followed later by b.

    Replaces a guessed a by X, continues right, and on a b turns around to
    confirm X is still on the tape.
    """
    X = TapeSymbol.work("X")
    rules = [
        ("s", A, "s", A, 1), ("s", B, "s", B, 1),
        ("s", A, "t", X, 1),
        ("t", A, "t", A, 1), ("t", B, "t", B, 1),
        ("t", B, "u", B, -1),
        ("u", A, "u", A, -1), ("u", B, "u", B, -1),
        ("u", X, "v", X, 1),
        ("v", A, "v", A, 1), ("v", B, "v", B, 1),
        ("v", RIGHT_END, "acc", None, 1),
    ]
    return LimitedAutomaton.from_rules(["s", "t", "u", "v", "acc"], "ab", rules, "s", {"acc"})


@pytest.fixture
def fel():
    return first_equals_last()


@pytest.fixture
def ends_with_a():
    return ends_with_a_twoway()


@pytest.fixture
def guesser():
    return guess_and_rewrite()
