/** Browser transport: the line protocol carried one line per WebSocket
 * message.  Pair it with the bundled gateway, which pipes each socket to
 * a backend process.
 */

import type { LineTransport } from "../client.js";

export class WebSocketLineTransport implements LineTransport {
  private socket: WebSocket;
  private lineHandlers: Array<(line: string) => void> = [];
  private closeHandlers: Array<() => void> = [];

  constructor(url: string) {
    this.socket = new WebSocket(url);
    this.socket.addEventListener("message", (msg) => {
      for (const line of String(msg.data).split("\n")) {
        if (line !== "") {
          for (const handler of this.lineHandlers) {
            handler(line);
          }
        }
      }
    });
    this.socket.addEventListener("close", () => {
      for (const handler of this.closeHandlers) {
        handler();
      }
    });
  }

  ready(): Promise<void> {
    if (this.socket.readyState === WebSocket.OPEN) {
      return Promise.resolve();
    }
    return new Promise((resolve, reject) => {
      this.socket.addEventListener("open", () => resolve(), { once: true });
      this.socket.addEventListener("error", () => reject(new Error("connection failed")), {
        once: true,
      });
    });
  }

  send(line: string): void {
    this.socket.send(line);
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.socket.close();
  }
}
