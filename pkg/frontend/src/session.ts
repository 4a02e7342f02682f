/** View model of one debugging session: what the panels display.
 *
 * Every user action maps to one protocol command; port and answer events
 * land in the timeline, and each action that can move the machine is
 * followed by a state request so the goal-stack panel tracks the wire
 * exactly.
 */

import { DebugClient } from "./client.js";
import type { Mode, StateEvent, WireEvent } from "./protocol.js";
import { answerText } from "./render.js";
import { TimelineModel } from "./timeline.js";

export interface ActionResult {
  ok: boolean;
  message?: string;
}

export class WebSession {
  readonly timeline = new TimelineModel();
  state: StateEvent | null = null;
  answerBanner: string | null = null;
  halted: "success" | "failure" | "origin" | null = null;
  loaded = false;

  constructor(private client: DebugClient) {}

  async load(program: string, query: string, mode: Mode = "trace"): Promise<ActionResult> {
    const reply = await this.client.load(program, query, mode);
    if (reply.type === "error") {
      return { ok: false, message: reply.message };
    }
    this.timeline.clear();
    this.state = null;
    this.answerBanner = null;
    this.halted = null;
    this.loaded = true;
    await this.refreshState();
    return { ok: true };
  }

  stepForward(): Promise<ActionResult> {
    return this.act({ cmd: "step", dir: "fwd" });
  }

  stepBackward(): Promise<ActionResult> {
    return this.act({ cmd: "step", dir: "bwd" });
  }

  run(): Promise<ActionResult> {
    return this.act({ cmd: "run" });
  }

  private async act(command: { cmd: "step"; dir: "fwd" | "bwd" } | { cmd: "run" }): Promise<ActionResult> {
    const events = await this.client.request(command);
    this.absorb(events);
    const last = events[events.length - 1];
    if (last.type === "error") {
      return { ok: false, message: last.message };
    }
    await this.refreshState();
    return { ok: true };
  }

  private absorb(events: WireEvent[]): void {
    for (const event of events) {
      if (event.type === "port" || event.type === "answer") {
        this.timeline.append(event);
      }
      if (event.type === "answer" && event.dir === "fwd") {
        this.answerBanner = answerText(event);
      }
      if (event.type === "halted") {
        this.halted = event.reason;
      } else {
        this.halted = null;
      }
    }
  }

  private async refreshState(): Promise<void> {
    this.state = await this.client.state();
  }
}
