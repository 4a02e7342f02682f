"""The five-rule deterministic engine.

Frozen rule sequences come from hand-running the worked example; the
engine's answers are then held to the resolution oracle across the corpus.
"""

from __future__ import annotations

import pytest

from conftest import det_trace
from rever import parse_program, parse_query
from rever.det import (
    DQuery,
    DState,
    Failure,
    Next,
    RULE_BACKTRACK,
    RULE_CHOICE,
    RULE_CHOICE_FAIL,
    RULE_NEXT,
    RULE_UNFOLD,
    Success,
    applicable_det_rules,
    clause_instance,
    clauses_for,
    det_answers,
    det_init,
    det_step,
)
from rever.sld import sld_solve
from rever.terms import (
    EMPTY,
    FAIL,
    TRUE,
    Atom,
    FreshSource,
    Substitution,
    Variable,
    apply,
    const,
    variant_eq,
)

A, B = Variable("A"), Variable("B")
a, b, c = const("a"), const("b"), const("c")


def test_clauses_for_source_order(example1):
    assert clauses_for(Atom("q", (A,)), example1) == ["l2", "l3", "l4"]
    assert clauses_for(Atom("r", (b, B)), example1) == ["l5", "l6"]
    assert clauses_for(Atom("r", (a, B)), example1) == []
    assert clauses_for(Atom("p", (A, B)), example1) == ["l1"]
    assert clauses_for(Atom("missing"), example1) == []
    assert clauses_for(Atom("rtrace"), example1) == []


def test_clauses_for_consumes_no_fresh_names(example1):
    state = det_init(parse_query("q(A)"))
    clauses_for(Atom("q", (A,)), example1)
    assert state.fresh == FreshSource(0)


def test_clauses_for_probe_avoids_capture(example1):
    # an atom already carrying renamed variables must not collide with the
    # probe renaming of clause heads
    probe_atom = Atom("q", (Variable("X", 7),))
    assert clauses_for(probe_atom, example1) == ["l2", "l3", "l4"]


def test_clause_instance_advances_fresh(example1):
    inst, fs = clause_instance("l1", example1, FreshSource(2))
    assert fs == FreshSource(3)
    assert variant_eq(inst, example1.clause("l1"))
    assert all(v.serial == 3 for v in [inst.head.args[0], inst.head.args[1]])


def test_det_init(example1_query):
    st = det_init(example1_query)
    assert st == DState(
        (DQuery((Atom("p", (A, B)),), EMPTY, None),), FreshSource(0)
    )


def test_choice_spawns_labeled_copies_in_order(example1):
    st = det_init(parse_query("q(A)"))
    out = det_step(example1, st)
    assert isinstance(out, Next) and out.rule == RULE_CHOICE
    labels = [q.label for q in out.state.queries]
    assert labels == ["l2", "l3", "l4"]
    # copies differ only in label
    bare = {(q.goals, q.theta) for q in out.state.queries}
    assert len(bare) == 1


def test_single_match_still_goes_through_choice(example1, example1_query):
    out = det_step(example1, det_init(example1_query))
    assert isinstance(out, Next) and out.rule == RULE_CHOICE
    assert [q.label for q in out.state.queries] == ["l1"]


def test_unfold_resolves_against_its_clause(example1, example1_query):
    st = det_step(example1, det_init(example1_query)).state
    out = det_step(example1, st)
    assert isinstance(out, Next) and out.rule == RULE_UNFOLD
    q0 = out.state.queries[0]
    assert q0.label is None
    assert [g.predicate for g in q0.goals] == ["q", "r"]
    assert out.state.fresh == FreshSource(1)
    # the clause variables were bound to the query's own
    assert apply(q0.goals[0], q0.theta) == Atom("q", (A,))


def test_unfold_of_fact_normalizes_to_true(example1):
    st = DState((DQuery((Atom("q", (A,)),), EMPTY, "l2"),), FreshSource(0))
    out = det_step(example1, st)
    assert out.rule == RULE_UNFOLD
    assert out.state.queries[0].goals == (TRUE,)
    assert apply(Atom("q", (A,)), out.state.queries[0].theta) == Atom("q", (a,))


def test_choice_fail_swaps_head_for_fail(example1):
    st = DState((DQuery((Atom("r", (a, B)), Atom("s",)), EMPTY, None),), FreshSource(0))
    out = det_step(example1, st)
    assert out.rule == RULE_CHOICE_FAIL
    assert out.state.queries[0].goals == (FAIL, Atom("s"))


def test_backtrack_drops_failed_alternative(example1):
    alt = DQuery((Atom("q", (A,)),), EMPTY, "l3")
    st = DState((DQuery((FAIL,), EMPTY, None), alt), FreshSource(4))
    out = det_step(example1, st)
    assert out.rule == RULE_BACKTRACK
    assert out.state == DState((alt,), FreshSource(4))


def test_fail_with_no_alternatives_is_failure(example1):
    st = DState((DQuery((FAIL,), EMPTY, None),), FreshSource(0))
    out = det_step(example1, st)
    assert isinstance(out, Failure)


def test_solved_query_reports_success_and_rest(example1):
    theta = Substitution({A: b})
    alt = DQuery((Atom("q", (A,)),), EMPTY, "l4")
    st = DState((DQuery((TRUE,), theta, None), alt), FreshSource(3))
    out = det_step(example1, st)
    assert isinstance(out, Success)
    assert out.theta == theta
    assert out.rest == DState((alt,), FreshSource(3))
    final = det_step(example1, DState((DQuery((TRUE,), theta, None),), FreshSource(3)))
    assert isinstance(final, Success) and final.rest is None


def test_example1_rule_sequence(example1, example1_query):
    _states, rules, halted = det_trace(example1, example1_query)
    assert halted == "success"
    assert rules == [
        "choice", "unfold",                # p
        "choice", "unfold",                # q -> a
        "choice_fail", "backtrack",        # r(a,B) dead end
        "unfold",                          # q -> b
        "choice", "unfold",                # r(b,B) -> r(b,b): answer 1
        "next",
        "unfold",                          # r(b,B) -> r(b,c): answer 2
        "next",
        "unfold",                          # q -> c
        "choice", "unfold",                # r(c,B) -> r(c,c): answer 3
    ]


def test_det_answers_example1(example1, example1_query):
    res = det_answers(example1, example1_query)
    assert res.exhausted
    assert res.answers == [{A: b, B: b}, {A: b, B: c}, {A: c, B: c}]


def test_det_answers_budget_counts_unfolds(example1, example1_query):
    res = det_answers(example1, example1_query, max_steps=3)
    assert not res.exhausted
    assert res.steps_used == 3


def test_det_answers_budget_validation(example1, example1_query):
    with pytest.raises(ValueError):
        det_answers(example1, example1_query, max_steps=0)


def test_determinism_audit_along_example1(example1, example1_query):
    states, _rules, _halted = det_trace(example1, example1_query)
    for st in states[:-1]:
        assert len(applicable_det_rules(example1, st)) == 1
    # terminal success state: nothing fires
    assert applicable_det_rules(example1, states[-1]) in ([], [RULE_NEXT])


def test_progress_and_determinism_on_corpus(corpus):
    for program, query, text, _q in corpus[:150]:
        states, _rules, halted = det_trace(program, query, max_steps=120)
        for st in states[:-1]:
            fired = applicable_det_rules(program, st)
            assert len(fired) == 1, f"{fired} on {text}"


def test_det_answers_match_sld_when_both_exhaust(corpus):
    compared = 0
    for program, query, text, _q in corpus:
        det = det_answers(program, query, max_steps=120, max_answers=40)
        ref = sld_solve(program, query, max_steps=120, max_answers=40)
        if not (det.exhausted and ref.exhausted):
            continue
        compared += 1
        assert len(det.answers) == len(ref.answers), text
        qatom = query.atoms[0]
        for d_ans, s_ans in zip(det.answers, ref.answers):
            assert variant_eq(apply(qatom, d_ans), apply(qatom, s_ans)), text
    assert compared >= 300
