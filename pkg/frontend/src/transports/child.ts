/** Node-only transport: spawn the backend as a child process and speak
 * the line protocol over its stdio.  Used by the test suite; the browser
 * build never imports this module.
 */

import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { createInterface } from "node:readline";

import type { LineTransport } from "../client.js";

export interface ChildTransportOptions {
  command?: string;
  args?: string[];
}

const DEFAULT_COMMAND = "python3";
const DEFAULT_ARGS = ["-m", "rever", "serve", "--stdio"];

export class ChildProcessTransport implements LineTransport {
  private child: ChildProcessWithoutNullStreams;
  private lineHandlers: Array<(line: string) => void> = [];
  private closeHandlers: Array<() => void> = [];
  private closedFired = false;

  constructor(options: ChildTransportOptions = {}) {
    const command = options.command ?? process.env.REVER_CMD ?? DEFAULT_COMMAND;
    const args =
      options.args ??
      (process.env.REVER_ARGS ? (JSON.parse(process.env.REVER_ARGS) as string[]) : DEFAULT_ARGS);
    this.child = spawn(command, args, { stdio: ["pipe", "pipe", "pipe"] });
    const lines = createInterface({ input: this.child.stdout });
    lines.on("line", (line) => {
      for (const handler of this.lineHandlers) {
        handler(line);
      }
    });
    this.child.on("exit", () => this.fireClose());
    this.child.on("error", () => this.fireClose());
  }

  private fireClose(): void {
    if (this.closedFired) {
      return;
    }
    this.closedFired = true;
    for (const handler of this.closeHandlers) {
      handler();
    }
  }

  send(line: string): void {
    this.child.stdin.write(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.child.stdin.end();
    this.child.kill();
  }
}
