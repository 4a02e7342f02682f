"""Interactive session over the reversible engine.

A session owns a configuration and walks it in both directions.  One user
step is "advance (or retreat) until something is worth showing": port
events of a single transition, the answer presentation on arriving in a
solved state, or the end of the computation.  Transitions that emit
nothing (unfold, next) never produce a silent stop.

Two modes share the machinery.  Trace shows every port from the start;
debug stays silent until an rtrace/0 goal runs (or until the whole
computation is about to fail, at which point tracing switches on so the
failure can be rewound and inspected).  rtrace/0 is an engine-level
effect: the session consumes the atom, remembers where, and undoes the
consumption when a retreat crosses that spot, so reversibility is exact
even around tracing flips.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .det import DQuery, DState
from .parser import (
    Query,
    VariableNamer,
    answer_bindings,
    format_atom,
    format_bindings,
)
from .rev import (
    BACKWARD,
    FORWARD,
    PORT_ANSWER,
    Configuration,
    Halted,
    backward_step,
    forward_step,
    init_config,
    is_halted,
)
from .terms import RTRACE, TRUE, Atom, Program, Substitution

MODE_TRACE = "trace"
MODE_DEBUG = "debug"

DEFAULT_STEP_LIMIT = 10**6

DONE_SUCCESS = "success"
DONE_FAILURE = "failure"

KEY_HINT = "keys: Enter/down step, u/up back, s skip, t trace, q quit"


class StepLimitExceeded(Exception):
    pass


@dataclass(frozen=True)
class DisplayEvent:
    """A port event stamped with the history length at emission, plus the
    payload already shaped for display (answers carry ordered bindings)."""

    port: str
    payload: Atom | Substitution
    direction: str
    step: int


@dataclass
class StepResult:
    events: list[DisplayEvent] = field(default_factory=list)
    done: str | None = None  # "success" | "failure" once the run has ended
    at_origin: bool = False


class Session:
    def __init__(self, program: Program, query: Query, mode: str = MODE_TRACE,
                 max_steps: int = DEFAULT_STEP_LIMIT):
        if mode not in (MODE_TRACE, MODE_DEBUG):
            raise ValueError(f"unknown mode {mode!r}")
        self.program = program
        self.query = query
        self.mode = mode
        self.config: Configuration = init_config(query)
        self.tracing_active = mode == MODE_TRACE
        self.max_steps = max_steps
        self.steps_taken = 0
        self.namer = VariableNamer()
        self.answer_shown = False
        # events already produced by the last transition but not yet shown;
        # one user press surfaces one event
        self.pending: list[DisplayEvent] = []
        self._pending_dir = FORWARD
        # (history length, tracing flag before the flip) per consumed rtrace
        self._rtrace_marks: list[tuple[int, bool]] = []

    @property
    def step_index(self) -> int:
        return len(self.config.history)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Session):
            return NotImplemented
        return (
            self.config == other.config
            and self.mode == other.mode
            and self.tracing_active == other.tracing_active
            and self.answer_shown == other.answer_shown
            and self.pending == other.pending
            and self._rtrace_marks == other._rtrace_marks
        )

    def _pop_pending(self, direction: str) -> StepResult | None:
        if not self.pending:
            return None
        if self._pending_dir != direction:
            # direction change abandons the unshown remainder
            self.pending = []
            return None
        return StepResult([self.pending.pop(0)])

    # -- forward ----------------------------------------------------------

    def advance(self) -> StepResult:
        pend = self._pop_pending(FORWARD)
        if pend is not None:
            return pend
        while True:
            q0 = self.config.state.queries[0]
            at_solved = q0.label is None and q0.goals == (TRUE,)
            if at_solved and not self.answer_shown:
                self.answer_shown = True
                event = DisplayEvent(
                    PORT_ANSWER, self._answer_payload(q0.theta), FORWARD, self.step_index
                )
                return StepResult([event])
            halted = is_halted(self.config)
            if halted == "success" and self.answer_shown:
                return StepResult(done=DONE_SUCCESS)
            if halted == "failure":
                # switch tracing on so the failure point can be rewound
                self.tracing_active = True
                return StepResult(done=DONE_FAILURE)
            if self._consume_rtrace():
                continue
            if self.steps_taken >= self.max_steps:
                raise StepLimitExceeded(f"step limit of {self.max_steps} reached")
            outcome = forward_step(self.program, self.config)
            assert not isinstance(outcome, Halted), "halt is detected before stepping"
            self.config, ports = outcome
            self.steps_taken += 1
            self.answer_shown = False
            if ports and self.tracing_active:
                events = [
                    DisplayEvent(p.port, p.payload, p.direction, self.step_index)
                    for p in ports
                ]
                # one press shows one line; the rest wait their turn
                self.pending = events[1:]
                self._pending_dir = FORWARD
                return StepResult(events[:1])

    def skip(self) -> StepResult:
        """Advance repeatedly, accumulating output, until the next answer
        or the end of the run."""
        collected: list[DisplayEvent] = []
        while True:
            result = self.advance()
            collected.extend(result.events)
            if result.done is not None or any(e.port == PORT_ANSWER for e in result.events):
                return StepResult(collected, result.done)

    # -- backward ---------------------------------------------------------

    def retreat(self) -> StepResult:
        """Undo transitions until one that emitted something has been
        undone.  Retreating is inherently an inspection act, so its ports
        show regardless of the tracing flag."""
        pend = self._pop_pending(BACKWARD)
        if pend is not None:
            return pend
        while True:
            self._undo_rtrace_marks()
            if not self.config.history:
                return StepResult(at_origin=True)
            outcome = backward_step(self.program, self.config)
            assert outcome is not None
            self.config, ports = outcome
            self.answer_shown = False
            self._undo_rtrace_marks()
            if ports:
                events = []
                for p in ports:
                    payload = p.payload
                    if p.port == PORT_ANSWER:
                        payload = self._answer_payload(payload)
                    events.append(DisplayEvent(p.port, payload, p.direction, self.step_index))
                self.pending = events[1:]
                self._pending_dir = BACKWARD
                return StepResult(events[:1])

    # -- rtrace bookkeeping -------------------------------------------------

    def _consume_rtrace(self) -> bool:
        q0 = self.config.state.queries[0]
        if q0.label is not None or q0.goals[0] != RTRACE:
            return False
        self._rtrace_marks.append((self.step_index, self.tracing_active))
        self.tracing_active = True
        goals = q0.goals[1:] or (TRUE,)
        self._replace_leftmost_goals(goals)
        return True

    def _undo_rtrace_marks(self):
        while self._rtrace_marks and self._rtrace_marks[-1][0] == self.step_index:
            _, was_tracing = self._rtrace_marks.pop()
            self.tracing_active = was_tracing
            q0 = self.config.state.queries[0]
            goals = (RTRACE,) if q0.goals == (TRUE,) else (RTRACE,) + q0.goals
            self._replace_leftmost_goals(goals)
            self.answer_shown = False

    def _replace_leftmost_goals(self, goals):
        state = self.config.state
        q0 = state.queries[0]
        replaced = (DQuery(goals, q0.theta, q0.label),) + state.queries[1:]
        self.config = Configuration(DState(replaced, state.fresh), self.config.history)

    # -- presentation -----------------------------------------------------

    def _answer_payload(self, theta: Substitution) -> Substitution:
        return answer_bindings(theta, self.query)

    def render(self, event: DisplayEvent) -> str:
        return render_line(event, self.namer)


def session_start(program: Program, query: Query, mode: str = MODE_TRACE,
                  max_steps: int = DEFAULT_STEP_LIMIT) -> Session:
    return Session(program, query, mode, max_steps)


def advance(s: Session) -> StepResult:
    return s.advance()


def retreat(s: Session) -> StepResult:
    return s.retreat()


def render_line(event: DisplayEvent, namer: VariableNamer | None = None) -> str:
    if event.port == PORT_ANSWER:
        text = "**Answer: " + (format_bindings(event.payload, namer) or "true")
    else:
        text = f"{event.port.capitalize()}: {format_atom(event.payload, namer)}"
    if event.direction == BACKWARD:
        text = "^" + text
    return text


@dataclass
class KeyResult:
    kind: str  # "step" | "quit" | "ignored"
    result: StepResult | None = None
    hint: str | None = None


def handle_key(s: Session, key: str) -> KeyResult:
    """Map one normalized key to a session operation.

    Keys: "down"/"enter" advance, "up" retreats, "s" skips to the next
    answer, "t" switches tracing on, "q" quits.  Anything else is ignored
    with a hint.
    """
    if key in ("down", "enter"):
        return KeyResult("step", s.advance())
    if key == "up":
        return KeyResult("step", s.retreat())
    if key == "s":
        return KeyResult("step", s.skip())
    if key == "t":
        s.mode = MODE_TRACE
        s.tracing_active = True
        return KeyResult("step", StepResult())
    if key == "q":
        return KeyResult("quit")
    return KeyResult("ignored", hint=KEY_HINT)
