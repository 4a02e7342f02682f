import { describe, expect, it } from "vitest";

import { answerText, renderEvent } from "../src/render.js";
import type { WireEvent } from "../src/protocol.js";

describe("event rendering", () => {
  it("prints ports with their capitalized labels", () => {
    expect(
      renderEvent({ type: "port", port: "call", goal: "p(A,B)", dir: "fwd", step: 1 }),
    ).toBe("Call: p(A,B)");
    expect(
      renderEvent({ type: "port", port: "fail", goal: "r(a,B)", dir: "fwd", step: 6 }),
    ).toBe("Fail: r(a,B)");
  });

  it("prefixes backward events with a caret", () => {
    expect(
      renderEvent({ type: "port", port: "exit", goal: "p(b,b)", dir: "bwd", step: 12 }),
    ).toBe("^Exit: p(b,b)");
  });

  it("renders answers in equational form", () => {
    const event: WireEvent = {
      type: "answer",
      bindings: [
        { var: "A", term: "b" },
        { var: "B", term: "b" },
      ],
      dir: "fwd",
      step: 13,
    };
    expect(renderEvent(event)).toBe("**Answer: A = b, B = b");
  });

  it("renders an empty answer as true", () => {
    expect(answerText({ type: "answer", bindings: [], dir: "fwd", step: 3 })).toBe(
      "**Answer: true",
    );
  });

  it("prints nothing for bookkeeping events", () => {
    expect(renderEvent({ type: "ok" })).toBeNull();
    expect(renderEvent({ type: "halted", reason: "origin" })).toBeNull();
    expect(renderEvent({ type: "state", queries: [], history_len: 0 })).toBeNull();
    expect(renderEvent({ type: "error", message: "x" })).toBeNull();
  });
});
