"""Command line front end.

    rever trace <file> "<query>"     step a query with all ports visible
    rever debug <file> "<query>"     run silently until rtrace/0 or failure
    rever serve [--stdio|--listen N] speak the JSON line protocol

Interactive keys: Enter or an arrow-down steps forward, arrow-up (or "u")
steps backward, "s" skips to the next answer, "t" switches tracing on,
"q" quits.  When stdin is not a terminal each input line is one key: an
empty line steps forward and "u" steps backward, which makes sessions
scriptable through a pipe.
"""

from __future__ import annotations

import argparse
import sys

from . import bridge, terms
from .debugger import (
    DONE_FAILURE,
    DONE_SUCCESS,
    MODE_DEBUG,
    MODE_TRACE,
    Session,
    StepLimitExceeded,
    handle_key,
)
from .parser import ParseError, parse_program, parse_query

_LINE_KEYS = {
    "": "down",
    "down": "down",
    "enter": "down",
    "\x1b[b": "down",
    "u": "up",
    "up": "up",
    "\x1b[a": "up",
    "s": "s",
    "t": "t",
    "q": "q",
}


def _read_key_tty() -> str:
    import termios
    import tty

    fd = sys.stdin.fileno()
    old = termios.tcgetattr(fd)
    try:
        tty.setraw(fd)
        ch = sys.stdin.read(1)
        if ch == "\x1b":
            ch += sys.stdin.read(2)
    finally:
        termios.tcsetattr(fd, termios.TCSADRAIN, old)
    if ch in ("\r", "\n"):
        return "down"
    if ch == "\x1b[B":
        return "down"
    if ch == "\x1b[A":
        return "up"
    if ch in ("\x03", "\x04"):  # ^C / ^D
        return "q"
    return ch


def _read_key_line() -> str | None:
    line = sys.stdin.readline()
    if line == "":
        return None  # EOF
    key = line.rstrip("\n").strip().lower()
    return _LINE_KEYS.get(key, key)


def _emit(session: Session, result) -> None:
    for event in result.events:
        print(session.render(event), flush=True)


def _interactive(session: Session) -> int:
    use_tty = sys.stdin.isatty()
    failed = False
    try:
        result = session.advance()
    except StepLimitExceeded as exc:
        print(f"rever: {exc}", file=sys.stderr)
        return 2
    _emit(session, result)
    if result.done == DONE_SUCCESS:
        return 0
    if result.done == DONE_FAILURE:
        print("false", flush=True)
        failed = True
    while True:
        key = _read_key_tty() if use_tty else _read_key_line()
        if key is None:
            return 0
        try:
            outcome = handle_key(session, key)
        except StepLimitExceeded as exc:
            print(f"rever: {exc}", file=sys.stderr)
            return 2
        if outcome.kind == "quit":
            return 0
        if outcome.kind == "ignored":
            print(outcome.hint, file=sys.stderr)
            continue
        result = outcome.result
        _emit(session, result)
        if result.done == DONE_SUCCESS:
            return 0
        if result.done == DONE_FAILURE and not failed:
            print("false", flush=True)
            failed = True
        elif result.done is None and result.events:
            failed = False


def _run_session(args, mode: str) -> int:
    try:
        with open(args.program, encoding="utf-8") as f:
            program = parse_program(f.read())
        query = parse_query(args.query)
    except OSError as exc:
        print(f"rever: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"rever: {exc}", file=sys.stderr)
        return 2
    session = Session(program, query, mode, max_steps=args.max_steps)
    return _interactive(session)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rever", description="reversible debugger for definite logic programs"
    )
    parser.add_argument(
        "--max-steps",
        type=int,
        default=10**6,
        help="abort a session after this many engine steps (default 1000000)",
    )
    parser.add_argument(
        "--no-occurs-check",
        action="store_true",
        help="skip the occurs check during unification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("trace", "step a query with every port visible"),
        ("debug", "run silently until rtrace/0 or a failure"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("program", help="path to the program file")
        p.add_argument("query", help="query to run, e.g. 'p(A,B)'")

    p = sub.add_parser("serve", help="speak the JSON line protocol")
    transport = p.add_mutually_exclusive_group()
    transport.add_argument("--stdio", action="store_true", help="serve on stdin/stdout (default)")
    transport.add_argument("--listen", type=int, metavar="PORT", help="listen on a local TCP port")
    p.add_argument(
        "--once", action="store_true", help="with --listen, exit after the first connection"
    )

    args = parser.parse_args(argv)
    if args.no_occurs_check:
        terms.settings.occurs_check = False

    if args.command == "trace":
        return _run_session(args, MODE_TRACE)
    if args.command == "debug":
        return _run_session(args, MODE_DEBUG)
    if args.command == "serve":
        if args.listen is not None:
            bridge.serve_listen(args.listen, max_steps=args.max_steps, once=args.once)
        else:
            bridge.serve_stdio(max_steps=args.max_steps)
        return 0
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
