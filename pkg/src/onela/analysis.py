"""Size-gap experiments, bounded equivalence and seeded random machines."""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field

from .conversions import (
    Counterexample,
    Equal,
    amla_to_owdfa,
    determinize,
    dfa_equiv,
    la_to_ownfa,
    minimize_dfa,
)
from .core import LEFT_END, RIGHT_END, LimitedAutomaton, OneWayDFA, OneWayNFA, TapeSymbol, classify
from .execution import DEFAULT_NODE_LIMIT, accepts, enumerate_words
from .witnesses import (
    ALPHABET,
    gen_jn_damla,
    gen_kn_omla,
    jn_fooling_set,
    jn_member,
    jn_reference_dfa,
    kn_member,
    kn_reference_dfa,
    verify_fooling_set,
    Certified,
)

# Feasibility caps; rows beyond them are reported as skipped.
CAPS = {"kn": 2, "jn": 3, "fooling": 4, "max_len": 12}


def machine_alphabet(machine) -> tuple:
    if isinstance(machine, LimitedAutomaton):
        return machine.input_alphabet
    return machine.alphabet


def machine_accepts(machine, word, node_limit: int = DEFAULT_NODE_LIMIT) -> bool:
    if isinstance(machine, LimitedAutomaton):
        return accepts(machine, word, node_limit)
    if isinstance(machine, (OneWayNFA, OneWayDFA)):
        return machine.accepts(word)
    return bool(machine(word))


def language_equiv_bounded(a, b, max_len: int, node_limit: int = DEFAULT_NODE_LIMIT):
    """Compare two machines on every word up to ``max_len``.

    Returns ``Equal()`` or the shortest, lexicographically least word on which they differ.
    """
    alpha = machine_alphabet(a)
    if set(alpha) != set(machine_alphabet(b)):
        raise ValueError("machines have different input alphabets")
    for w in enumerate_words(alpha, max_len):
        if machine_accepts(a, w, node_limit) != machine_accepts(b, w, node_limit):
            return Counterexample(w)
    return Equal()


# ---------------------------------------------------------------------------
# random machines
# ---------------------------------------------------------------------------


def random_domla(seed: int, state_budget: int = 6, alphabet=ALPHABET) -> LimitedAutomaton:
    """A seeded deterministic, structurally once-marking machine with 2..state_budget states."""
    if state_budget < 2:
        raise ValueError("state_budget must be at least 2")
    rng = random.Random(seed)
    n = rng.randint(2, state_budget)
    states = [f"q{i}" for i in range(n)]
    n_pre = rng.randint(1, n - 1)
    pre, post = states[:n_pre], states[n_pre:]
    finals = [q for q in states if rng.random() < 0.4]
    if not any(q in post for q in finals):
        finals.append(rng.choice(post))
    letters = [TapeSymbol.input(a) for a in alphabet]
    rules = []

    def add(q, sym, targets, write, moves=(-1, 1)):
        if rng.random() < 0.2:
            return
        rules.append((q, sym, rng.choice(targets), write, rng.choice(moves)))

    marking_done = False
    for q in states:
        targets = states if q in pre else post
        for x in letters:
            if q in pre and rng.random() < 0.35:
                rules.append((q, x, rng.choice(post), x.mark(), rng.choice((-1, 1))))
                marking_done = True
            else:
                add(q, x, targets, x)
            if q in post:
                add(q, x.mark(), post, x.mark())
        add(q, LEFT_END, targets, None, (1,))
        exits = [f for f in targets if f in finals]
        if exits and rng.random() < 0.5:
            rules.append((q, RIGHT_END, rng.choice(exits), None, 1))
        else:
            add(q, RIGHT_END, targets, None, (-1,))
    if not marking_done:
        x = rng.choice(letters)
        q = rng.choice(pre)
        rules = [r for r in rules if (r[0], r[1]) != (q, x)]
        rules.append((q, x, rng.choice(post), x.mark(), rng.choice((-1, 1))))
    work = letters + [x.mark() for x in letters] + [LEFT_END, RIGHT_END]
    return LimitedAutomaton.from_rules(states, alphabet, rules, states[0], finals, work)


def random_la(seed: int, state_budget: int = 4, alphabet=ALPHABET, work_letters=("X",)) -> LimitedAutomaton:
    """A seeded unrestricted (usually nondeterministic) 1-LA with 2..state_budget states.

    Exits past the right end-marker always lead to final states, which keeps
    most generated languages nontrivial.
    """
    if state_budget < 2:
        raise ValueError("state_budget must be at least 2")
    rng = random.Random(seed)
    n = rng.randint(2, state_budget)
    states = [f"q{i}" for i in range(n)]
    finals = rng.sample(states, rng.randint(1, n - 1))
    letters = [TapeSymbol.input(a) for a in alphabet]
    writable = letters + [x.mark() for x in letters] + [TapeSymbol.work(w) for w in work_letters]
    rules = []
    for q in states:
        for sym in writable + [LEFT_END]:
            count = rng.choice((1, 1, 2)) if sym.kind == "input" else rng.choice((0, 1, 1))
            for _ in range(count):
                if sym.is_end_marker:
                    write = None
                elif sym.kind == "input":
                    write = rng.choice([sym] * 3 + writable)
                else:
                    write = sym
                move = 1 if sym == LEFT_END else rng.choice((1, 1, -1))
                rules.append((q, sym, rng.choice(states), write, move))
        if rng.random() < 0.5:
            rules.append((q, RIGHT_END, rng.choice(finals), None, 1))
        if rng.random() < 0.5:
            rules.append((q, RIGHT_END, rng.choice(states), None, -1))
    return LimitedAutomaton.from_rules(states, alphabet, rules, states[0], finals)


# ---------------------------------------------------------------------------
# gap experiment
# ---------------------------------------------------------------------------


@dataclass
class GapRow:
    n: int
    status: str = "ok"
    la_states: int | None = None
    nfa_states: int | None = None
    dfa_states: int | None = None
    min_dfa_states: int | None = None
    reference_min_dfa_states: int | None = None
    am_dfa_states: int | None = None
    twdfa_states: int | None = None
    fooling_lower_bound: int | None = None
    checks: dict = field(default_factory=dict)
    seconds: float = 0.0


@dataclass
class GapReport:
    family: str
    max_len: int
    rows: list
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(all(r.checks.values()) for r in self.rows if r.status == "ok")

    def to_dict(self, timings: bool = False) -> dict:
        rows = []
        for r in self.rows:
            d = asdict(r)
            if not timings:
                d.pop("seconds")
            rows.append(d)
        return {"family": self.family, "max_len": self.max_len, "rows": rows,
                "metadata": self.metadata, "passed": self.passed}

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True) + "\n"

    def format_table(self) -> str:
        cols = ["n", "status", "la", "nfa", "dfa", "min_dfa", "ref_min", "am_dfa", "fool", "checks", "sec"]
        lines = [f"family {self.family}, bounded equivalence up to length {self.max_len}"]
        table = [cols]
        for r in self.rows:
            failed = [k for k, ok in r.checks.items() if not ok]
            table.append([
                str(r.n), r.status,
                *("-" if v is None else str(v) for v in (
                    r.la_states, r.nfa_states, r.dfa_states, r.min_dfa_states,
                    r.reference_min_dfa_states, r.am_dfa_states, r.fooling_lower_bound)),
                "ok" if not failed else "FAIL " + ",".join(failed),
                f"{r.seconds:.2f}",
            ])
        widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
        for row in table:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        return "\n".join(lines)


def _fooling_bound(member, n):
    if n > CAPS["fooling"]:
        return None
    verdict = verify_fooling_set(lambda w: member(n, w), jn_fooling_set(n))
    return verdict.size if isinstance(verdict, Certified) else 0


def _row(family: str, n: int, max_len: int) -> GapRow:
    row = GapRow(n)
    if family == "kn":
        machine, member, reference = gen_kn_omla(n), kn_member, kn_reference_dfa
    else:
        machine, member, reference = gen_jn_damla(n), jn_member, jn_reference_dfa
    k = len(machine.states)
    row.la_states = k
    row.fooling_lower_bound = _fooling_bound(member, n)
    if row.fooling_lower_bound is not None:
        row.checks["fooling_bound_2^n"] = row.fooling_lower_bound == 2 ** n

    row.checks["machine_matches_oracle"] = all(
        accepts(machine, w) == member(n, w) for w in enumerate_words(ALPHABET, max_len)
    )
    ref_min = minimize_dfa(reference(n))
    row.reference_min_dfa_states = ref_min.size
    if family == "kn":
        row.checks["min_dfa_>=_2^2^n"] = ref_min.size >= 2 ** (2 ** n)
    else:
        row.checks["min_dfa_>=_2^n"] = ref_min.size >= 2 ** n

    nfa = la_to_ownfa(machine)
    row.nfa_states = nfa.size
    row.checks["nfa_<=_k*2^(k^2)"] = nfa.size <= k * 2 ** (k * k)
    dfa = determinize(nfa)
    row.dfa_states = dfa.size
    mini = minimize_dfa(dfa)
    row.min_dfa_states = mini.size
    row.checks["min_dfa_<=_dfa"] = mini.size <= dfa.size
    row.checks["conversion_equals_reference"] = isinstance(dfa_equiv(mini, ref_min), Equal) and mini.size == ref_min.size
    if row.fooling_lower_bound is not None:
        row.checks["fooling_<=_nfa"] = row.fooling_lower_bound <= nfa.size

    profile = classify(machine)
    if profile.structurally_always_marking:
        am = amla_to_owdfa(machine)
        row.am_dfa_states = am.size
        row.checks["am_dfa_<=_(2^k-1)*2^(k^2)+1"] = am.size <= (2 ** k - 1) * 2 ** (k * k) + 1
        row.checks["am_dfa_equals_reference"] = isinstance(dfa_equiv(minimize_dfa(am), ref_min), Equal)
        row.checks["am_dfa_>=_min_dfa"] = am.size >= ref_min.size
        if profile.deterministic:
            bound = k * (k + 1) ** k
            row.checks["det_dfa_<=_k*(k+1)^k"] = am.size <= bound and dfa.size <= bound
    return row


def gap_experiment(family: str, n_range, max_len: int = 8) -> GapReport:
    """Build the witness for every n, convert, minimise and check the size inequalities."""
    family = family.lower()
    if family not in ("kn", "jn"):
        raise ValueError("family must be 'kn' or 'jn'")
    if max_len > CAPS["max_len"]:
        raise ValueError(f"max_len is capped at {CAPS['max_len']}")
    rows = []
    for n in n_range:
        if n > CAPS[family]:
            rows.append(GapRow(n, status=f"skipped: n > {CAPS[family]} for {family}"))
            continue
        started = time.perf_counter()
        row = _row(family, n, max_len)
        row.seconds = time.perf_counter() - started
        rows.append(row)
    meta = {"caps": dict(CAPS), "alphabet": list(ALPHABET),
            "n_range": [int(n) for n in n_range]}
    return GapReport(family, max_len, rows, meta)
