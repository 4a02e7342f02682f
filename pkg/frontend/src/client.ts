/** Request/response client for the JSON line protocol.
 *
 * The protocol is strictly synchronous: one command in flight, answered
 * by events and then one terminator.  request() resolves with the whole
 * batch, terminator included.
 */

import { isTerminator } from "./protocol.js";
import type {
  Direction,
  Mode,
  StateEvent,
  WireCommand,
  WireEvent,
} from "./protocol.js";

export interface LineTransport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export class ProtocolError extends Error {}

interface Pending {
  events: WireEvent[];
  resolve: (events: WireEvent[]) => void;
  reject: (err: Error) => void;
}

export class DebugClient {
  private pending: Pending | null = null;
  private closed = false;

  constructor(
    private transport: LineTransport,
    private onUnexpected?: (event: WireEvent) => void,
  ) {
    transport.onLine((line) => this.handleLine(line));
    transport.onClose(() => {
      this.closed = true;
      if (this.pending) {
        const p = this.pending;
        this.pending = null;
        p.reject(new ProtocolError("connection closed"));
      }
    });
  }

  get busy(): boolean {
    return this.pending !== null;
  }

  request(command: WireCommand): Promise<WireEvent[]> {
    if (this.closed) {
      return Promise.reject(new ProtocolError("connection closed"));
    }
    if (this.pending) {
      return Promise.reject(new ProtocolError("a command is already in flight"));
    }
    return new Promise((resolve, reject) => {
      this.pending = { events: [], resolve, reject };
      this.transport.send(JSON.stringify(command));
    });
  }

  private handleLine(line: string): void {
    if (line.trim() === "") {
      return;
    }
    let event: WireEvent;
    try {
      event = JSON.parse(line) as WireEvent;
    } catch {
      event = { type: "error", message: `unparseable event: ${line}` };
    }
    if (!this.pending) {
      this.onUnexpected?.(event);
      return;
    }
    this.pending.events.push(event);
    if (isTerminator(event)) {
      const p = this.pending;
      this.pending = null;
      p.resolve(p.events);
    }
  }

  async load(program: string, query: string, mode: Mode = "trace"): Promise<WireEvent> {
    const events = await this.request({ cmd: "load", program, query, mode });
    return events[events.length - 1];
  }

  step(dir: Direction): Promise<WireEvent[]> {
    return this.request({ cmd: "step", dir });
  }

  run(): Promise<WireEvent[]> {
    return this.request({ cmd: "run" });
  }

  /** Ask for a state snapshot; throws ProtocolError if the bridge objects. */
  async state(): Promise<StateEvent> {
    const events = await this.request({ cmd: "state" });
    const snap = events.find((e) => e.type === "state");
    if (!snap) {
      const last = events[events.length - 1];
      const message = last.type === "error" ? last.message : "no state in reply";
      throw new ProtocolError(message);
    }
    return snap as StateEvent;
  }

  async quit(): Promise<void> {
    try {
      await this.request({ cmd: "quit" });
    } finally {
      this.transport.close();
    }
  }
}
