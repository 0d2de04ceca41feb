"""Toolkit for 1-limited automata: simulation, conversions to one-way and
two-way finite automata, witness languages and size-gap experiments."""

from .analysis import (
    GapReport,
    GapRow,
    gap_experiment,
    language_equiv_bounded,
    random_domla,
    random_la,
)
from .conversions import (
    Counterexample,
    Equal,
    FrontierState,
    TransitionTable,
    accept_closure,
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
from .core import (
    LEFT_END,
    RIGHT_END,
    Diagnostic,
    InvalidAutomaton,
    LimitedAutomaton,
    OneWayDFA,
    OneWayNFA,
    TapeSymbol,
    Transition,
    VariantProfile,
    classify,
    validate,
)
from .execution import (
    Configuration,
    DisciplineReport,
    ExplorationLimitExceeded,
    LoopReport,
    RunVerdict,
    Trace,
    accepts,
    decide_acceptance,
    enumerate_words,
    is_legal_trace,
    trace_deterministic,
    verify_marking_discipline,
)
from .formats import FormatError, export_dot, parse, serialize
from .twoway import (
    MarkRecord,
    TwoWayCompilation,
    backward_predecessors,
    bound_constant,
    compile_twdfa,
    domla_to_twdfa,
    first_visit_search,
    sipser_search,
    state_bound,
)
from .witnesses import (
    Certified,
    FoolingPair,
    Violation,
    gen_jn_damla,
    gen_kn_omla,
    jn_fooling_set,
    jn_member,
    jn_reference_dfa,
    kn_member,
    kn_reference_dfa,
    verify_fooling_set,
)

__version__ = "0.1.0"
