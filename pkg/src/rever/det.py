"""Deterministic small-step search: one applicable rule per state.

A state is a stack of alternative queries, each carrying its goal list and
an accumulated substitution.  The leftmost query drives everything:

  choice       unlabeled user atom with matching clauses: expand it into
               one labeled copy per matching clause, in source order
  choice_fail  no matching clause: the head atom becomes fail
  unfold       a labeled query resolves against exactly its clause
  backtrack    a failed query is dropped in favor of the next alternative
  next         a solved query hands over to the remaining alternatives

Substitutions accumulate in theta and are never pushed into the stored
goal atoms; display and unification instantiate on demand.  This keeps
every step cheap to undo, which the reversible layer builds on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .parser import Query
from .sld import DEFAULT_MAX_ANSWERS, DEFAULT_MAX_STEPS, SldResult
from .terms import (
    EMPTY,
    FAIL,
    TRUE,
    Atom,
    Clause,
    FreshSource,
    Program,
    Substitution,
    apply,
    compose,
    is_ret,
    max_serial,
    mgu,
    rename_apart,
    restrict,
    vars_of,
)

RULE_CHOICE = "choice"
RULE_CHOICE_FAIL = "choice_fail"
RULE_UNFOLD = "unfold"
RULE_BACKTRACK = "backtrack"
RULE_NEXT = "next"
RULE_EXIT = "exit"  # used by the reversible layer only


@dataclass(frozen=True)
class DQuery:
    """One alternative: goal list, substitution, and an optional clause
    label.  A label means the next step must resolve the head against
    exactly that clause."""

    goals: tuple[Atom, ...]
    theta: Substitution
    label: str | None = None


@dataclass(frozen=True)
class DState:
    queries: tuple[DQuery, ...]
    fresh: FreshSource = FreshSource()


@dataclass(frozen=True)
class Next:
    state: DState
    rule: str


@dataclass(frozen=True)
class Success:
    theta: Substitution
    rest: DState | None


@dataclass(frozen=True)
class Failure:
    state: DState


@dataclass(frozen=True)
class Stuck:
    """Unreachable for well-formed states; kept so drivers can be total."""

    state: DState


StepOutcome = Next | Success | Failure | Stuck


def clauses_for(atom: Atom, program: Program) -> list[str]:
    """Labels of the clauses whose heads unify with an instantiated atom,
    in source order.

    The trial renamings use a serial above anything occurring in the atom
    and are thrown away, so no FreshSource is consumed by looking.
    """
    if atom.indicator == ("rtrace", 0):
        return []
    probe = FreshSource(max_serial(atom))
    labels = []
    for clause in program.clauses:
        if clause.head.indicator != atom.indicator:
            continue
        renamed, _ = rename_apart(clause, probe)
        if mgu(atom, renamed.head) is not None:
            labels.append(clause.label)
    return labels


def clause_instance(label: str, program: Program, fs: FreshSource) -> tuple[Clause, FreshSource]:
    return rename_apart(program.clause(label), fs)


def det_init(query: Query) -> DState:
    return DState((DQuery(tuple(query.atoms), EMPTY, None),), FreshSource(0))


def det_step(program: Program, state: DState) -> StepOutcome:
    q0 = state.queries[0]
    rest = state.queries[1:]
    if q0.label is not None:
        clause, fresh = clause_instance(q0.label, program, state.fresh)
        head_atom = q0.goals[0]
        sigma = mgu(apply(head_atom, q0.theta), clause.head)
        assert sigma is not None, "labeled query no longer matches its clause"
        goals = clause.body + q0.goals[1:]
        if not goals:
            goals = (TRUE,)
        unfolded = DQuery(goals, compose(q0.theta, sigma))
        return Next(DState((unfolded,) + rest, fresh), RULE_UNFOLD)
    head = q0.goals[0]
    assert not is_ret(head), "ret markers belong to the reversible layer"
    if head == TRUE:
        assert q0.goals == (TRUE,), "true must stand alone"
        rest_state = DState(rest, state.fresh) if rest else None
        return Success(q0.theta, rest_state)
    if head == FAIL:
        if rest:
            return Next(DState(rest, state.fresh), RULE_BACKTRACK)
        return Failure(state)
    labels = clauses_for(apply(head, q0.theta), program)
    if labels:
        copies = tuple(DQuery(q0.goals, q0.theta, lab) for lab in labels)
        return Next(DState(copies + rest, state.fresh), RULE_CHOICE)
    failed = DQuery((FAIL,) + q0.goals[1:], q0.theta)
    return Next(DState((failed,) + rest, state.fresh), RULE_CHOICE_FAIL)


def applicable_det_rules(program: Program, state: DState) -> list[str]:
    """Evaluate every rule guard independently; used by the determinism
    audits, so no dispatch shortcuts."""
    rules = []
    q0 = state.queries[0]
    rest = state.queries[1:]
    head = q0.goals[0]
    if q0.label is not None:
        rules.append(RULE_UNFOLD)
    else:
        if head == FAIL and rest:
            rules.append(RULE_BACKTRACK)
        if q0.goals == (TRUE,) and rest:
            rules.append(RULE_NEXT)
        if head not in (TRUE, FAIL) and not is_ret(head):
            if clauses_for(apply(head, q0.theta), program):
                rules.append(RULE_CHOICE)
            else:
                rules.append(RULE_CHOICE_FAIL)
    return rules


def det_answers(
    program: Program,
    query: Query,
    max_steps: int = DEFAULT_MAX_STEPS,
    max_answers: int = DEFAULT_MAX_ANSWERS,
) -> SldResult:
    """Drive det_step to completion, recording an answer at every solved
    alternative.  The step budget counts unfolds, matching sld_solve's
    notion of a resolution step."""
    if max_steps <= 0 or max_answers <= 0:
        raise ValueError("budgets must be positive")
    qvars = vars_of(query.atoms)
    state = det_init(query)
    answers: list[Substitution] = []
    unfolds = 0
    while True:
        if state.queries[0].label is not None and unfolds >= max_steps:
            return SldResult(answers, exhausted=False, steps_used=unfolds)
        outcome = det_step(program, state)
        if isinstance(outcome, Next):
            if outcome.rule == RULE_UNFOLD:
                unfolds += 1
            state = outcome.state
            continue
        if isinstance(outcome, Success):
            answers.append(restrict(outcome.theta, qvars))
            if len(answers) >= max_answers:
                return SldResult(answers, exhausted=outcome.rest is None, steps_used=unfolds)
            if outcome.rest is None:
                return SldResult(answers, exhausted=True, steps_used=unfolds)
            state = outcome.rest
            continue
        assert isinstance(outcome, Failure)
        return SldResult(answers, exhausted=True, steps_used=unfolds)
