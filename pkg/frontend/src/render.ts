/** Turn wire events into the exact text the command line prints. */

import type { AnswerEvent, PortEvent, WireEvent } from "./protocol.js";

const PORT_LABEL: Record<string, string> = {
  call: "Call",
  exit: "Exit",
  redo: "Redo",
  fail: "Fail",
};

export function renderPort(event: PortEvent): string {
  const prefix = event.dir === "bwd" ? "^" : "";
  return `${prefix}${PORT_LABEL[event.port]}: ${event.goal}`;
}

export function answerText(event: AnswerEvent): string {
  if (event.bindings.length === 0) {
    return "**Answer: true";
  }
  const parts = event.bindings.map((b) => `${b.var} = ${b.term}`);
  return `**Answer: ${parts.join(", ")}`;
}

export function renderAnswer(event: AnswerEvent): string {
  const prefix = event.dir === "bwd" ? "^" : "";
  return prefix + answerText(event);
}

/** The transcript line for an event, or null for events that print nothing. */
export function renderEvent(event: WireEvent): string | null {
  switch (event.type) {
    case "port":
      return renderPort(event);
    case "answer":
      return renderAnswer(event);
    default:
      return null;
  }
}
