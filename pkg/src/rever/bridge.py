"""Line-delimited JSON protocol for driving a session from another process.

One connection owns one session.  Every request line is a single JSON
object with a "cmd" field; the server answers with zero or more event
lines followed by exactly one terminator: {"type": "ok"}, {"type":
"error", ...}, or {"type": "halted", ...} when the requested movement is
impossible (end of run, origin).

Commands
  {"cmd": "load", "program": <text>, "query": <text>, "mode": "trace"|"debug"}
  {"cmd": "step", "dir": "fwd"|"bwd"}
  {"cmd": "run"}                      advance to the next answer or the end
  {"cmd": "state"}                    snapshot of alternatives and history depth
  {"cmd": "quit"}

Events
  {"type": "port", "port": ..., "goal": ..., "dir": ..., "step": ...}
  {"type": "answer", "bindings": [{"var": ..., "term": ...}, ...], "dir": ..., "step": ...}
  {"type": "state", "queries": [...], "history_len": ...}
  {"type": "halted", "reason": "success"|"failure"|"origin"}
  {"type": "error", "message": ...}
  {"type": "ok"}

Malformed JSON or a command error never kills the connection; the client
sees an error terminator and may continue.
"""

from __future__ import annotations

import json
import socket
import sys

from .debugger import (
    MODE_DEBUG,
    MODE_TRACE,
    DisplayEvent,
    Session,
    StepLimitExceeded,
)
from .parser import (
    ParseError,
    VariableNamer,
    format_atom,
    format_goals,
    format_term,
    parse_program,
    parse_query,
)
from .rev import PORT_ANSWER


def _event_json(e: DisplayEvent, namer: VariableNamer) -> dict:
    if e.port == PORT_ANSWER:
        bindings = [
            {"var": v.name, "term": format_term(t, namer)} for v, t in e.payload.items()
        ]
        return {"type": "answer", "bindings": bindings, "dir": e.direction, "step": e.step}
    return {
        "type": "port",
        "port": e.port,
        "goal": format_atom(e.payload, namer),
        "dir": e.direction,
        "step": e.step,
    }


def _render_query(q, namer: VariableNamer) -> str:
    goals = format_goals(q.goals, namer)
    items = sorted(q.theta.items(), key=lambda kv: kv[0].sort_key())
    theta = ", ".join(f"{format_term(v, namer)} = {format_term(t, namer)}" for v, t in items)
    text = f"<{goals} ; {theta or 'id'}>"
    if q.label is not None:
        text += f"^{q.label}"
    return text


def _state_json(session: Session) -> dict:
    return {
        "type": "state",
        "queries": [_render_query(q, session.namer) for q in session.config.state.queries],
        "history_len": len(session.config.history),
    }


class BridgeServer:
    """Protocol handler decoupled from the transport: feed it request
    lines, it calls send with response objects."""

    def __init__(self, send, max_steps: int | None = None):
        self.send = send
        self.session: Session | None = None
        self.max_steps = max_steps
        self.closed = False

    def handle_line(self, line: str):
        line = line.strip()
        if not line:
            return
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            self.send({"type": "error", "message": f"malformed JSON: {exc}"})
            return
        if not isinstance(msg, dict) or "cmd" not in msg:
            self.send({"type": "error", "message": "expected an object with a cmd field"})
            return
        try:
            self._dispatch(msg)
        except StepLimitExceeded as exc:
            self.send({"type": "error", "message": str(exc)})

    def _dispatch(self, msg: dict):
        cmd = msg.get("cmd")
        if cmd == "load":
            self._load(msg)
            return
        if self.session is None:
            self.send({"type": "error", "message": "load a program first"})
            return
        if cmd == "step":
            self._step(msg.get("dir", "fwd"))
        elif cmd == "run":
            self._run()
        elif cmd == "state":
            self.send(_state_json(self.session))
            self.send({"type": "ok"})
        elif cmd == "quit":
            self.send({"type": "ok"})
            self.closed = True
        else:
            self.send({"type": "error", "message": f"unknown command {cmd!r}"})

    def _load(self, msg: dict):
        mode = msg.get("mode", MODE_TRACE)
        if mode not in (MODE_TRACE, MODE_DEBUG):
            self.send({"type": "error", "message": f"unknown mode {mode!r}"})
            return
        try:
            program = parse_program(msg.get("program", ""))
            query = parse_query(msg.get("query", ""))
        except ParseError as exc:
            self.send({"type": "error", "message": str(exc)})
            return
        kwargs = {}
        if self.max_steps is not None:
            kwargs["max_steps"] = self.max_steps
        self.session = Session(program, query, mode, **kwargs)
        self.send({"type": "ok"})

    def _emit(self, events):
        for e in events:
            self.send(_event_json(e, self.session.namer))

    def _step(self, direction: str):
        if direction == "bwd":
            result = self.session.retreat()
            if result.at_origin:
                self.send({"type": "halted", "reason": "origin"})
                return
            self._emit(result.events)
            self.send({"type": "ok"})
            return
        if direction != "fwd":
            self.send({"type": "error", "message": f"unknown direction {direction!r}"})
            return
        result = self.session.advance()
        self._emit(result.events)
        if result.done is not None:
            self.send({"type": "halted", "reason": result.done})
        else:
            self.send({"type": "ok"})

    def _run(self):
        result = self.session.skip()
        self._emit(result.events)
        if result.done is not None:
            self.send({"type": "halted", "reason": result.done})
        else:
            self.send({"type": "ok"})


def serve_stream(lines, write, max_steps: int | None = None):
    """Serve one connection: an iterable of request lines in, JSON lines out."""

    def send(obj):
        write(json.dumps(obj) + "\n")

    server = BridgeServer(send, max_steps=max_steps)
    for line in lines:
        server.handle_line(line)
        if server.closed:
            break


def serve_stdio(max_steps: int | None = None):
    def write(text):
        sys.stdout.write(text)
        sys.stdout.flush()

    serve_stream(sys.stdin, write, max_steps=max_steps)


def serve_listen(port: int, max_steps: int | None = None, once: bool = False):
    """Accept local connections one at a time, a fresh session for each."""
    with socket.create_server(("127.0.0.1", port)) as server:
        actual = server.getsockname()[1]
        print(f"listening on 127.0.0.1:{actual}", file=sys.stderr, flush=True)
        while True:
            conn, _addr = server.accept()
            with conn:
                reader = conn.makefile("r", encoding="utf-8")
                writer = conn.makefile("w", encoding="utf-8")

                def write(text):
                    writer.write(text)
                    writer.flush()

                try:
                    serve_stream(reader, write, max_steps=max_steps)
                except (BrokenPipeError, ConnectionResetError):
                    pass
            if once:
                return
