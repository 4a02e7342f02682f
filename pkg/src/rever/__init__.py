"""rever: a reversible interpreter and four-port debugger for definite
logic programs.

Execution records a history event per step, so any derivation can be
walked backward to its origin, replaying Call/Exit/Redo/Fail ports in
reverse.  The public surface: parse_program/parse_query, the sld_solve
reference enumerator, the det_step/det_answers search engine, the
forward_step/backward_step reversible engine, and the interactive
Session used by the rever command."""

from .parser import ParseError, Query, parse_program, parse_query, format_answer
from .terms import (
    Atom,
    Clause,
    Compound,
    FreshSource,
    Program,
    Substitution,
    Variable,
    apply,
    compose,
    mgu,
    rename_apart,
    restrict,
    variant_eq,
)
from .sld import SldResult, sld_solve
from .det import DQuery, DState, det_answers, det_init, det_step
from .rev import (
    Configuration,
    Halted,
    backward_step,
    forward_step,
    init_config,
    rev_answers,
    strip_ret,
)
from .debugger import Session, handle_key, render_line, session_start

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "Clause",
    "Compound",
    "Configuration",
    "DQuery",
    "DState",
    "FreshSource",
    "Halted",
    "ParseError",
    "Program",
    "Query",
    "Session",
    "SldResult",
    "Substitution",
    "Variable",
    "apply",
    "backward_step",
    "compose",
    "det_answers",
    "det_init",
    "det_step",
    "format_answer",
    "forward_step",
    "handle_key",
    "init_config",
    "mgu",
    "parse_program",
    "parse_query",
    "rename_apart",
    "render_line",
    "restrict",
    "rev_answers",
    "session_start",
    "sld_solve",
    "strip_ret",
    "variant_eq",
]
