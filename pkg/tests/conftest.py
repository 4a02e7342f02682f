"""Shared fixtures: the worked example, golden transcripts, a seeded
random program corpus, and small trace harnesses used by several suites."""

from __future__ import annotations

import itertools
import random

import pytest

from rever import parse_program, parse_query
from rever.det import DState, det_init, det_step, Next, Success, Failure, RULE_UNFOLD
from rever.rev import (
    Halted,
    applicable_backward_rules,
    applicable_forward_rules,
    backward_step,
    forward_step,
    init_config,
    is_halted,
    _EVENT_RULE,
)
from rever.terms import Atom, Compound, Variable

EXAMPLE1 = """\
p(X, Y) :- q(X), r(X, Y).
q(a).
q(b).
q(c).
r(b, b).
r(b, c).
r(c, c).
"""

# the two columns of the interactive session on p(A,B): stepping down to
# the first answer, then stepping up all the way back
GOLDEN_FORWARD = [
    "Call: p(A,B)",
    "Call: q(A)",
    "Exit: q(a)",
    "Call: r(a,B)",
    "Fail: r(a,B)",
    "Redo: q(A)",
    "Exit: q(b)",
    "Call: r(b,B)",
    "Exit: r(b,b)",
    "Exit: p(b,b)",
    "**Answer: A = b, B = b",
]
GOLDEN_BACKWARD = [
    "^Exit: p(b,b)",
    "^Exit: r(b,b)",
    "^Call: r(b,B)",
    "^Exit: q(b)",
    "^Redo: q(A)",
    "^Fail: r(a,B)",
    "^Call: r(a,B)",
    "^Exit: q(a)",
    "^Call: q(A)",
    "^Call: p(A,B)",
]


@pytest.fixture
def example1_text():
    return EXAMPLE1


@pytest.fixture
def example1():
    return parse_program(EXAMPLE1)


@pytest.fixture
def example1_query():
    return parse_query("p(A, B)")


# ---------------------------------------------------------------------------
# random program corpus
#
# Bounds: at most 8 clauses, at most 3 body atoms, predicates at most
# binary, terms nested at most 3 deep.  Seeded per index so every test
# sees the same programs regardless of ordering.

CORPUS_SEED = 745038
CORPUS_SIZE = 500

_PREDS = [("p", 2), ("q", 1), ("r", 2), ("s", 1), ("t", 0)]
_CONSTS = ["a", "b", "c"]
_VARS = ["X", "Y", "Z", "W"]


def _rand_term(rng: random.Random, depth: int, vars_: list[str]) -> str:
    roll = rng.random()
    if roll < 0.40:
        return rng.choice(vars_)
    if roll < 0.72 or depth <= 0:
        return rng.choice(_CONSTS)
    if roll < 0.90:
        return f"f({_rand_term(rng, depth - 1, vars_)})"
    return "g({}, {})".format(
        _rand_term(rng, depth - 1, vars_), _rand_term(rng, depth - 1, vars_)
    )


def random_program_pair(index: int, flat: bool = False) -> tuple[str, str]:
    """Return (program text, query text) for corpus slot `index`.

    flat=True keeps every term a variable or constant, which puts the
    program inside the fragment the bottom-up oracle can evaluate.
    """
    rng = random.Random((CORPUS_SEED ^ 0x5F0F if flat else CORPUS_SEED) + index)
    preds = rng.sample(_PREDS, rng.randint(2, 4))
    depths = [0] if flat else [0, 1, 2]

    def atom(vars_):
        name, arity = rng.choice(preds)
        if arity == 0:
            return name
        args = ", ".join(_rand_term(rng, rng.choice(depths), vars_) for _ in range(arity))
        return f"{name}({args})"

    clauses = []
    for _ in range(rng.randint(2, 8)):
        head = atom(_VARS)
        body = [atom(_VARS) for _ in range(rng.randint(0, 3))]
        if body:
            clauses.append("{} :- {}.".format(head, ", ".join(body)))
        else:
            clauses.append(head + ".")
    query = atom(["A", "B"])
    return "\n".join(clauses) + "\n", query


def corpus_pairs(n: int = CORPUS_SIZE):
    for i in range(n):
        yield random_program_pair(i)


@pytest.fixture(scope="session")
def corpus():
    out = []
    for text, qtext in corpus_pairs():
        out.append((parse_program(text), parse_query(qtext), text, qtext))
    return out


# ---------------------------------------------------------------------------
# trace harnesses

def rev_trace(program, query, max_steps=400):
    """Forward-run the reversible engine, recording configurations and the
    rule taken at each step.  Stops at a halt or after max_steps."""
    cfg = init_config(query)
    cfgs = [cfg]
    rules = []
    halted = None
    for _ in range(max_steps):
        out = forward_step(program, cfg)
        if isinstance(out, Halted):
            halted = out.reason
            break
        cfg, _ports = out
        cfgs.append(cfg)
        rules.append(_EVENT_RULE[type(cfg.history[0])])
    return cfgs, rules, halted


def det_trace(program, query, max_steps=400):
    """Drive the irreversible engine the same way, folding the take-next-
    answer continuation in as a step so sequences align with rev_trace."""
    state = det_init(query)
    states = [state]
    rules = []
    halted = None
    for _ in range(max_steps):
        out = det_step(program, state)
        if isinstance(out, Success):
            if out.rest is None:
                halted = "success"
                break
            state = out.rest
            rules.append("next")
        elif isinstance(out, Failure):
            halted = "failure"
            break
        elif isinstance(out, Next):
            state = out.state
            rules.append(out.rule)
        else:
            raise AssertionError(f"stuck at {state}")
        states.append(state)
    return states, rules, halted


def audit_forward(program, cfgs):
    """Exactly one forward rule must apply at every non-halted config."""
    for cfg in cfgs:
        fired = applicable_forward_rules(program, cfg)
        if is_halted(cfg) is not None:
            assert fired == [], f"rules {fired} at a halted config"
        else:
            assert len(fired) == 1, f"forward rules {fired} at {cfg.state.queries}"


def audit_backward(program, cfgs):
    """Exactly one backward rule must apply whenever history is nonempty."""
    for cfg in cfgs:
        if not cfg.history:
            continue
        fired = applicable_backward_rules(program, cfg)
        assert len(fired) == 1, f"backward rules {fired} at {cfg.state.queries}"


# ---------------------------------------------------------------------------
# bottom-up consequence oracle (function-free programs only)

def is_function_free(program) -> bool:
    def flat(t):
        return not isinstance(t, Compound) or not t.args

    def atom_ok(a):
        return all(flat(arg) or isinstance(arg, Variable) for arg in a.args)

    return all(
        atom_ok(c.head) and all(atom_ok(b) for b in c.body) for c in program.clauses
    )


def herbrand_closure(program, extra_consts=()):
    """All derivable ground atoms of a function-free program, by naive
    fixpoint iteration over the constants that appear in it."""
    consts = set(extra_consts)
    for c in program.clauses:
        for a in (c.head, *c.body):
            for t in a.args:
                if isinstance(t, Compound) and not t.args:
                    consts.add(t.functor)
    if not consts:
        consts = {"a"}
    consts = sorted(consts)

    def key(a, env):
        return (
            a.predicate,
            tuple(env[t] if isinstance(t, Variable) else t for t in a.args),
        )

    # ground every clause up front; the fixpoint then runs propositionally
    universe = [Compound(k, ()) for k in consts]
    rules: list[tuple[tuple, tuple[tuple, ...]]] = []
    for c in program.clauses:
        vs = []
        seen = set()
        for a in (c.head, *c.body):
            for t in a.args:
                if isinstance(t, Variable) and t not in seen:
                    seen.add(t)
                    vs.append(t)
        for combo in itertools.product(universe, repeat=len(vs)):
            env = dict(zip(vs, combo))
            rules.append((key(c.head, env), tuple(key(b, env) for b in c.body)))

    facts: set[tuple] = set()
    changed = True
    while changed:
        changed = False
        for head, body in rules:
            if head not in facts and all(b in facts for b in body):
                facts.add(head)
                changed = True
    return facts, universe
