/** Wire vocabulary of the debugger's JSON line protocol.
 *
 * One JSON object per line in both directions.  Every command is answered
 * by zero or more events followed by exactly one terminator (ok, error,
 * or halted).  The first command of a connection must be load.
 */

export type Direction = "fwd" | "bwd";
export type Mode = "trace" | "debug";
export type Port = "call" | "exit" | "redo" | "fail";

export interface LoadCommand {
  cmd: "load";
  program: string;
  query: string;
  mode?: Mode;
}

export interface StepCommand {
  cmd: "step";
  dir: Direction;
}

export interface RunCommand {
  cmd: "run";
}

export interface StateCommand {
  cmd: "state";
}

export interface QuitCommand {
  cmd: "quit";
}

export type WireCommand =
  | LoadCommand
  | StepCommand
  | RunCommand
  | StateCommand
  | QuitCommand;

export interface PortEvent {
  type: "port";
  port: Port;
  goal: string;
  dir: Direction;
  step: number;
}

export interface Binding {
  var: string;
  term: string;
}

export interface AnswerEvent {
  type: "answer";
  bindings: Binding[];
  dir: Direction;
  step: number;
}

export interface StateEvent {
  type: "state";
  queries: string[];
  history_len: number;
}

export interface HaltedEvent {
  type: "halted";
  reason: "success" | "failure" | "origin";
}

export interface ErrorEvent {
  type: "error";
  message: string;
}

export interface OkEvent {
  type: "ok";
}

export type WireEvent =
  | PortEvent
  | AnswerEvent
  | StateEvent
  | HaltedEvent
  | ErrorEvent
  | OkEvent;

export function isTerminator(event: WireEvent): boolean {
  return event.type === "ok" || event.type === "error" || event.type === "halted";
}
