"""Reversible execution: a search state paired with a history.

Forward rules mirror the deterministic engine with two additions.  Each
unfold drops a ret(A) marker behind the clause body, so the moment a body
has been fully solved becomes an observable step (the exit rule, and the
Exit port).  And every rule pushes one history event recording exactly
what its inverse needs: nothing more, because histories grow with every
step, and nothing less, because backward steps must restore states term
for term, including the renaming counter.

Port events decorate six of the transitions:

  choice       Call on the chosen atom       (instantiated)
  choice_fail  Call then Fail on the atom
  exit         Exit on the completed atom
  backtrack    Redo on the resumed alternative's head
  next         nothing here; the Answer presentation happens at the
               arrival in a solved state, one layer up
  unfold       nothing

Backward steps emit the same ports flagged with the backward direction;
a full rewind replays the forward stream reversed, with the two events
of a choice_fail swapped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .parser import Query
from .sld import DEFAULT_MAX_ANSWERS, DEFAULT_MAX_STEPS, SldResult
from .terms import (
    FAIL,
    TRUE,
    Atom,
    FreshSource,
    Program,
    Substitution,
    apply,
    compose,
    is_ret,
    mgu,
    restrict,
    ret_atom,
    ret_marker,
    vars_of,
)
from .det import (
    DQuery,
    DState,
    RULE_BACKTRACK,
    RULE_CHOICE,
    RULE_CHOICE_FAIL,
    RULE_EXIT,
    RULE_NEXT,
    RULE_UNFOLD,
    clause_instance,
    clauses_for,
    det_init,
)

PORT_CALL = "call"
PORT_EXIT = "exit"
PORT_REDO = "redo"
PORT_FAIL = "fail"
PORT_ANSWER = "answer"

FORWARD = "fwd"
BACKWARD = "bwd"


@dataclass(frozen=True)
class ChoiceEvent:
    branches: int


@dataclass(frozen=True)
class UnfoldEvent:
    atom: Atom
    theta: Substitution
    label: str
    fresh_before: int


@dataclass(frozen=True)
class FailEvent:
    atom: Atom


@dataclass(frozen=True)
class ExitEvent:
    atom: Atom


@dataclass(frozen=True)
class BacktrackEvent:
    goals: tuple[Atom, ...]
    theta: Substitution


@dataclass(frozen=True)
class NextEvent:
    theta: Substitution


HistEvent = ChoiceEvent | UnfoldEvent | FailEvent | ExitEvent | BacktrackEvent | NextEvent

_EVENT_RULE = {
    ChoiceEvent: RULE_CHOICE,
    UnfoldEvent: RULE_UNFOLD,
    FailEvent: RULE_CHOICE_FAIL,
    ExitEvent: RULE_EXIT,
    BacktrackEvent: RULE_BACKTRACK,
    NextEvent: RULE_NEXT,
}


@dataclass(frozen=True)
class Configuration:
    """A search state plus its history, newest event first."""

    state: DState
    history: tuple[HistEvent, ...] = ()


@dataclass(frozen=True)
class PortEvent:
    port: str
    payload: Atom | Substitution
    direction: str


@dataclass(frozen=True)
class Halted:
    reason: str  # "success" | "failure"


def init_config(query: Query) -> Configuration:
    return Configuration(det_init(query), ())


def forward_step(program: Program, config: Configuration):
    """Apply the single applicable forward rule.

    Returns (configuration, port events) or Halted when the leftmost
    query is terminal with no alternatives left.
    """
    state = config.state
    q0 = state.queries[0]
    rest = state.queries[1:]
    history = config.history

    if q0.label is not None:
        clause, fresh = clause_instance(q0.label, program, state.fresh)
        head_atom = q0.goals[0]
        sigma = mgu(apply(head_atom, q0.theta), clause.head)
        assert sigma is not None, "labeled query no longer matches its clause"
        goals = clause.body + (ret_marker(head_atom),) + q0.goals[1:]
        unfolded = DQuery(goals, compose(q0.theta, sigma))
        event = UnfoldEvent(head_atom, q0.theta, q0.label, state.fresh.counter)
        return Configuration(DState((unfolded,) + rest, fresh), (event,) + history), []

    head = q0.goals[0]
    if head == TRUE:
        assert q0.goals == (TRUE,), "true must stand alone"
        if not rest:
            return Halted("success")
        return (
            Configuration(DState(rest, state.fresh), (NextEvent(q0.theta),) + history),
            [],
        )
    if head == FAIL:
        if not rest:
            return Halted("failure")
        target = rest[0]
        redo = PortEvent(PORT_REDO, apply(target.goals[0], target.theta), FORWARD)
        event = BacktrackEvent(q0.goals[1:], q0.theta)
        return Configuration(DState(rest, state.fresh), (event,) + history), [redo]
    if is_ret(head):
        inner = ret_atom(head)
        goals = q0.goals[1:] or (TRUE,)
        done = DQuery(goals, q0.theta)
        exit_ev = PortEvent(PORT_EXIT, apply(inner, q0.theta), FORWARD)
        return (
            Configuration(DState((done,) + rest, state.fresh), (ExitEvent(inner),) + history),
            [exit_ev],
        )

    inst = apply(head, q0.theta)
    labels = clauses_for(inst, program)
    call = PortEvent(PORT_CALL, inst, FORWARD)
    if labels:
        copies = tuple(DQuery(q0.goals, q0.theta, lab) for lab in labels)
        event = ChoiceEvent(len(labels))
        return Configuration(DState(copies + rest, state.fresh), (event,) + history), [call]
    failed = DQuery((FAIL,) + q0.goals[1:], q0.theta)
    event = FailEvent(head)
    fail_ev = PortEvent(PORT_FAIL, inst, FORWARD)
    return (
        Configuration(DState((failed,) + rest, state.fresh), (event,) + history),
        [call, fail_ev],
    )


def backward_step(program: Program, config: Configuration):
    """Undo the most recent forward rule, keyed off the history head.

    Returns (configuration, port events) or None at the origin.
    """
    if not config.history:
        return None
    event = config.history[0]
    history = config.history[1:]
    state = config.state
    queries = state.queries

    match event:
        case ChoiceEvent(branches=m):
            assert len(queries) >= m, "history claims more branches than exist"
            first = queries[0]
            assert all(q.label is not None for q in queries[:m]), "missing branch labels"
            restored = DQuery(first.goals, first.theta, None)
            call = PortEvent(PORT_CALL, apply(first.goals[0], first.theta), BACKWARD)
            new_state = DState((restored,) + queries[m:], state.fresh)
            return Configuration(new_state, history), [call]

        case FailEvent(atom=a):
            q0 = queries[0]
            assert q0.goals and q0.goals[0] == FAIL, "choice_fail undo expects a failed head"
            restored = DQuery((a,) + q0.goals[1:], q0.theta)
            inst = apply(a, q0.theta)
            events = [
                PortEvent(PORT_FAIL, inst, BACKWARD),
                PortEvent(PORT_CALL, inst, BACKWARD),
            ]
            return Configuration(DState((restored,) + queries[1:], state.fresh), history), events

        case UnfoldEvent(atom=a, theta=theta, label=label, fresh_before=fb):
            n = len(program.clause(label).body)
            q0 = queries[0]
            assert len(q0.goals) > n and q0.goals[n] == ret_marker(a), (
                "unfold undo expects the clause body followed by its marker"
            )
            restored = DQuery((a,) + q0.goals[n + 1 :], theta, label)
            new_state = DState((restored,) + queries[1:], FreshSource(fb))
            return Configuration(new_state, history), []

        case ExitEvent(atom=a):
            q0 = queries[0]
            goals = (ret_marker(a),) if q0.goals == (TRUE,) else (ret_marker(a),) + q0.goals
            restored = DQuery(goals, q0.theta)
            exit_ev = PortEvent(PORT_EXIT, apply(a, q0.theta), BACKWARD)
            return Configuration(DState((restored,) + queries[1:], state.fresh), history), [exit_ev]

        case BacktrackEvent(goals=goals, theta=theta):
            target = queries[0]
            redo = PortEvent(PORT_REDO, apply(target.goals[0], target.theta), BACKWARD)
            refailed = DQuery((FAIL,) + goals, theta)
            return Configuration(DState((refailed,) + queries, state.fresh), history), [redo]

        case NextEvent(theta=theta):
            solved = DQuery((TRUE,), theta)
            answer = PortEvent(PORT_ANSWER, theta, BACKWARD)
            return Configuration(DState((solved,) + queries, state.fresh), history), [answer]

    raise AssertionError(f"unknown history event {event!r}")


def is_halted(config: Configuration) -> str | None:
    q0 = config.state.queries[0]
    if len(config.state.queries) == 1:
        if q0.goals == (TRUE,) and q0.label is None:
            return "success"
        if q0.goals[0] == FAIL and q0.label is None:
            return "failure"
    return None


def applicable_forward_rules(program: Program, config: Configuration) -> list[str]:
    """All forward rules whose guards hold; the audits expect exactly one
    at every non-halted configuration."""
    rules = []
    q0 = config.state.queries[0]
    rest = config.state.queries[1:]
    head = q0.goals[0]
    if q0.label is not None:
        rules.append(RULE_UNFOLD)
        return rules
    if head == FAIL and rest:
        rules.append(RULE_BACKTRACK)
    if q0.goals == (TRUE,) and rest:
        rules.append(RULE_NEXT)
    if is_ret(head):
        rules.append(RULE_EXIT)
    if head not in (TRUE, FAIL) and not is_ret(head):
        if clauses_for(apply(head, q0.theta), program):
            rules.append(RULE_CHOICE)
        else:
            rules.append(RULE_CHOICE_FAIL)
    return rules


def applicable_backward_rules(program: Program, config: Configuration) -> list[str]:
    """Backward rules are keyed by the newest history event; the shape of
    the state must also match what the event's inverse expects."""
    if not config.history:
        return []
    event = config.history[0]
    queries = config.state.queries
    q0 = queries[0]
    applicable = False
    match event:
        case ChoiceEvent(branches=m):
            copies = queries[:m]
            applicable = (
                len(queries) >= m
                and all(q.label is not None for q in copies)
                and all(
                    q.goals == copies[0].goals and q.theta == copies[0].theta for q in copies
                )
            )
        case FailEvent():
            applicable = bool(q0.goals) and q0.goals[0] == FAIL and q0.label is None
        case UnfoldEvent(atom=a, label=label):
            n = len(program.clause(label).body)
            applicable = (
                q0.label is None and len(q0.goals) > n and q0.goals[n] == ret_marker(a)
            )
        case ExitEvent():
            # an exit leaves an unlabeled query behind
            applicable = q0.label is None
        case BacktrackEvent():
            # a backtrack resumes an alternative, which is always a
            # labeled copy left by some earlier choice
            applicable = q0.label is not None
        case NextEvent():
            applicable = q0.label is not None
    return [_EVENT_RULE[type(event)]] if applicable else []


def applicable_rule(program: Program, config: Configuration) -> str | None:
    rules = applicable_forward_rules(program, config)
    assert len(rules) <= 1, f"overlapping forward rules: {rules}"
    return rules[0] if rules else None


def strip_ret(state: DState) -> DState:
    """Drop every ret marker; a goal list emptied this way reads as true."""
    queries = []
    for q in state.queries:
        goals = tuple(a for a in q.goals if not is_ret(a))
        if not goals:
            goals = (TRUE,)
        queries.append(DQuery(goals, q.theta, q.label))
    return DState(tuple(queries), state.fresh)


def rev_answers(
    program: Program,
    query: Query,
    max_steps: int = DEFAULT_MAX_STEPS,
    max_answers: int = DEFAULT_MAX_ANSWERS,
) -> SldResult:
    """Run forward collecting an answer at every arrival in a solved
    state.  Budgets match det_answers: max_steps counts unfolds."""
    if max_steps <= 0 or max_answers <= 0:
        raise ValueError("budgets must be positive")
    qvars = vars_of(query.atoms)
    config = init_config(query)
    answers: list[Substitution] = []
    unfolds = 0
    while True:
        if config.state.queries[0].label is not None and unfolds >= max_steps:
            return SldResult(answers, exhausted=False, steps_used=unfolds)
        outcome = forward_step(program, config)
        if isinstance(outcome, Halted):
            return SldResult(answers, exhausted=True, steps_used=unfolds)
        config, _events = outcome
        if isinstance(config.history[0], UnfoldEvent):
            unfolds += 1
        leftmost = config.state.queries[0]
        if leftmost.goals == (TRUE,) and leftmost.label is None:
            answers.append(restrict(leftmost.theta, qvars))
            if len(answers) >= max_answers:
                exhausted = len(config.state.queries) == 1
                return SldResult(answers, exhausted=exhausted, steps_used=unfolds)
