"""Classic depth-first SLD resolution with an explicit alternatives stack.

This is the reference answer enumerator: leftmost selection, clauses tried
in source order, answers restricted to the query's variables.  The step
engines are checked against it, so it deliberately shares nothing with
them beyond the term operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .parser import Query
from .terms import (
    EMPTY,
    Atom,
    FreshSource,
    Program,
    Substitution,
    apply,
    compose,
    mgu,
    rename_apart,
    restrict,
    vars_of,
)

DEFAULT_MAX_STEPS = 100_000
DEFAULT_MAX_ANSWERS = 1_000


@dataclass
class SldResult:
    answers: list[Substitution] = field(default_factory=list)
    exhausted: bool = True
    steps_used: int = 0


def sld_solve(
    program: Program,
    query: Query,
    max_steps: int = DEFAULT_MAX_STEPS,
    max_answers: int = DEFAULT_MAX_ANSWERS,
) -> SldResult:
    """Enumerate answers depth first.

    A step is one resolution of a selected atom against a clause head.
    When the step budget runs out, or the answer cap is hit with work
    still stacked, the result is marked not exhausted.
    """
    if max_steps <= 0 or max_answers <= 0:
        raise ValueError("budgets must be positive")
    qvars = vars_of(query.atoms)
    fresh = FreshSource()
    steps = 0
    answers: list[Substitution] = []
    stack: list[tuple[tuple[Atom, ...], Substitution]] = [(tuple(query.atoms), EMPTY)]
    while stack:
        goals, theta = stack.pop()
        if not goals:
            answers.append(restrict(theta, qvars))
            if len(answers) >= max_answers:
                return SldResult(answers, exhausted=not stack, steps_used=steps)
            continue
        selected, rest = goals[0], goals[1:]
        inst = apply(selected, theta)
        if inst.indicator == ("rtrace", 0):
            # rtrace is handled by the debugger, never by resolution
            continue
        children = []
        for clause in program.clauses:
            if clause.head.indicator != inst.indicator:
                continue
            renamed, fresh = rename_apart(clause, fresh)
            sigma = mgu(inst, renamed.head)
            if sigma is None:
                continue
            if steps >= max_steps:
                return SldResult(answers, exhausted=False, steps_used=steps)
            steps += 1
            children.append((renamed.body + rest, compose(theta, sigma)))
        stack.extend(reversed(children))
    return SldResult(answers, exhausted=True, steps_used=steps)
