"""Session behavior: one keypress, one line; answers pause; everything
rewinds, including the tracing flips caused by rtrace."""

from __future__ import annotations

import pytest

from conftest import GOLDEN_BACKWARD, GOLDEN_FORWARD
from rever import parse_program, parse_query
from rever.debugger import (
    DONE_FAILURE,
    DONE_SUCCESS,
    KEY_HINT,
    MODE_DEBUG,
    MODE_TRACE,
    Session,
    StepLimitExceeded,
    handle_key,
    render_line,
    session_start,
)
from rever.rev import init_config


def lines_of(session, result):
    return [session.render(e) for e in result.events]


def walk_forward(session, presses):
    out = []
    for _ in range(presses):
        r = session.advance()
        out += lines_of(session, r)
        if r.done is not None:
            break
    return out


def test_golden_forward_transcript(example1, example1_query):
    s = Session(example1, example1_query, MODE_TRACE)
    first = s.advance()
    assert lines_of(s, first) == [GOLDEN_FORWARD[0]]
    rest = walk_forward(s, 10)
    assert [GOLDEN_FORWARD[0]] + rest == GOLDEN_FORWARD


def test_one_press_one_line(example1, example1_query):
    s = Session(example1, example1_query, MODE_TRACE)
    for _ in range(11):
        r = s.advance()
        assert len(r.events) == 1
        assert r.done is None


def test_golden_backward_transcript(example1, example1_query):
    s = Session(example1, example1_query, MODE_TRACE)
    for _ in range(11):
        s.advance()
    back = []
    for _ in range(10):
        r = s.retreat()
        assert len(r.events) == 1
        back += lines_of(s, r)
    assert back == GOLDEN_BACKWARD
    assert s.config == init_config(example1_query)
    assert s == Session(example1, example1_query, MODE_TRACE)
    final = s.retreat()
    assert final.at_origin and final.events == []


def test_continue_past_answer_and_back_over_it(example1, example1_query):
    s = Session(example1, example1_query, MODE_TRACE)
    for _ in range(11):
        s.advance()
    r = s.advance()  # crosses next/unfold silently, stops at the next exit
    assert lines_of(s, r) == ["Exit: r(b,c)"]
    assert lines_of(s, s.retreat()) == ["^Exit: r(b,c)"]
    assert lines_of(s, s.retreat()) == ["^**Answer: A = b, B = b"]
    assert lines_of(s, s.retreat()) == ["^Exit: p(b,b)"]


def test_skip_collects_run_to_answer(example1, example1_query):
    s = Session(example1, example1_query, MODE_TRACE)
    r = s.skip()
    assert lines_of(s, r) == GOLDEN_FORWARD
    r2 = s.skip()
    assert lines_of(s, r2)[-1] == "**Answer: A = b, B = c"
    r3 = s.skip()
    assert lines_of(s, r3)[-1] == "**Answer: A = c, B = c"
    r4 = s.skip()
    assert r4.done == DONE_SUCCESS


def test_session_runs_to_success_end(example1, example1_query):
    s = Session(example1, example1_query, MODE_TRACE)
    seen_answers = 0
    while True:
        r = s.advance()
        if r.done is not None:
            assert r.done == DONE_SUCCESS
            break
        seen_answers += sum(e.port == "answer" for e in r.events)
    assert seen_answers == 3


def test_debug_mode_shows_only_answers(example1, example1_query):
    s = Session(example1, example1_query, MODE_DEBUG)
    r = s.advance()
    assert [e.port for e in r.events] == ["answer"]
    assert lines_of(s, r) == ["**Answer: A = b, B = b"]
    r2 = s.advance()
    assert lines_of(s, r2) == ["**Answer: A = b, B = c"]


def test_debug_mode_retreat_is_visible(example1, example1_query):
    s = Session(example1, example1_query, MODE_DEBUG)
    s.advance()
    r = s.retreat()
    assert lines_of(s, r) == ["^Exit: p(b,b)"]


def test_failure_switches_tracing_on_for_rewind(example1):
    s = Session(example1, parse_query("r(a, B)"), MODE_DEBUG)
    assert not s.tracing_active
    r = s.advance()
    assert r.done == DONE_FAILURE
    assert s.tracing_active
    back = []
    while True:
        r = s.retreat()
        if r.at_origin:
            break
        back += lines_of(s, r)
    assert back == ["^Fail: r(a,B)", "^Call: r(a,B)"]


def test_trace_failure_full_transcript(example1):
    q = parse_query("r(a, B)")
    s = Session(example1, q, MODE_TRACE)
    out = walk_forward(s, 10)
    assert out == ["Call: r(a,B)", "Fail: r(a,B)"]
    r = s.advance()
    assert r.done == DONE_FAILURE


def test_rtrace_goal_flips_tracing_and_rewinds_exactly():
    program = parse_program("p(X) :- rtrace, q(X).\nq(a).")
    query = parse_query("p(A)")
    s = Session(program, query, MODE_DEBUG)
    assert not s.tracing_active
    r = s.advance()
    # the choice and unfold before rtrace stay silent; tracing starts at it
    assert lines_of(s, r) == ["Call: q(A)"]
    assert s.tracing_active
    # rewinding across the flip restores the quiet debug session
    while not s.retreat().at_origin:
        pass
    assert not s.tracing_active
    assert s == Session(program, query, MODE_DEBUG)


def test_rtrace_as_query_prefix_equals_trace_mode(example1):
    traced = Session(example1, parse_query("p(A, B)"), MODE_TRACE)
    debugged = Session(example1, parse_query("rtrace, p(A, B)"), MODE_DEBUG)
    t_lines, d_lines = [], []
    for _ in range(11):
        t_lines += lines_of(traced, traced.advance())
        d_lines += lines_of(debugged, debugged.advance())
    assert t_lines == d_lines == GOLDEN_FORWARD


def test_step_limit(example1):
    program = parse_program("loop :- loop.")
    s = Session(program, parse_query("loop"), MODE_DEBUG, max_steps=30)
    with pytest.raises(StepLimitExceeded):
        while True:
            s.advance()


def test_renamed_variables_display_consistently():
    program = parse_program("p(f(X)) :- q(X).\nq(a).")
    s = Session(program, parse_query("p(A)"), MODE_TRACE)
    out = walk_forward(s, 8)
    assert out == [
        "Call: p(A)",
        "Call: q(_G1)",
        "Exit: q(a)",
        "Exit: p(f(a))",
        "**Answer: A = f(a)",
    ]


def test_handle_key_mapping(example1, example1_query):
    s = session_start(example1, example1_query, MODE_TRACE)
    r = handle_key(s, "down")
    assert r.kind == "step" and lines_of(s, r.result) == ["Call: p(A,B)"]
    r = handle_key(s, "enter")
    assert lines_of(s, r.result) == ["Call: q(A)"]
    r = handle_key(s, "up")
    assert lines_of(s, r.result) == ["^Call: q(A)"]
    r = handle_key(s, "x")
    assert r.kind == "ignored" and r.hint == KEY_HINT
    r = handle_key(s, "q")
    assert r.kind == "quit"


def test_handle_key_t_switches_to_trace(example1, example1_query):
    s = session_start(example1, example1_query, MODE_DEBUG)
    r = handle_key(s, "t")
    assert r.kind == "step" and r.result.events == []
    assert s.mode == MODE_TRACE and s.tracing_active
    r = handle_key(s, "down")
    assert lines_of(s, r.result) == ["Call: p(A,B)"]


def test_handle_key_s_skips_to_answer(example1, example1_query):
    s = session_start(example1, example1_query, MODE_TRACE)
    r = handle_key(s, "s")
    assert lines_of(s, r.result) == GOLDEN_FORWARD


def test_render_line_answer_forms(example1, example1_query):
    s = Session(example1, parse_query("q(a)"), MODE_TRACE)
    out = walk_forward(s, 6)
    assert out == ["Call: q(a)", "Exit: q(a)", "**Answer: true"]


def test_mode_validation(example1, example1_query):
    with pytest.raises(ValueError):
        Session(example1, example1_query, "verbose")
