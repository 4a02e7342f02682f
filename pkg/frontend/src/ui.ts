/** DOM wiring for the three-panel debugger page.
 *
 * Left: program and query editor.  Middle: port timeline, newest at the
 * bottom, backward rows grey out the forward rows they undo.  Right: the
 * current machine state -- one line per pending alternative plus its
 * substitution -- refreshed after every action.
 */

import { DebugClient, ProtocolError } from "./client.js";
import type { Mode } from "./protocol.js";
import { WebSession } from "./session.js";
import { WebSocketLineTransport } from "./transports/ws.js";

const EXAMPLE = `p(X, Y) :- q(X), r(X, Y).
q(a).
q(b).
q(c).
r(b, b).
r(b, c).
r(c, c).
`;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

const programBox = el<HTMLTextAreaElement>("program");
const queryBox = el<HTMLInputElement>("query");
const modeBox = el<HTMLSelectElement>("mode");
const endpointBox = el<HTMLInputElement>("endpoint");
const statusLine = el<HTMLDivElement>("status");
const timelineList = el<HTMLOListElement>("timeline");
const statePanel = el<HTMLPreElement>("state");
const banner = el<HTMLDivElement>("banner");
const buttons = {
  load: el<HTMLButtonElement>("load"),
  forward: el<HTMLButtonElement>("forward"),
  backward: el<HTMLButtonElement>("backward"),
  run: el<HTMLButtonElement>("run"),
};

programBox.value = EXAMPLE;
queryBox.value = "p(A, B)";

let session: WebSession | null = null;
let transport: WebSocketLineTransport | null = null;

function setBusy(busy: boolean): void {
  buttons.load.disabled = busy;
  const stepping = busy || session === null || !session.loaded;
  buttons.forward.disabled = stepping;
  buttons.backward.disabled = stepping;
  buttons.run.disabled = stepping;
}

function say(text: string): void {
  statusLine.textContent = text;
}

function redraw(): void {
  if (!session) {
    return;
  }
  timelineList.replaceChildren(
    ...session.timeline.entries.map((entry) => {
      const item = document.createElement("li");
      item.textContent = entry.text;
      item.className = entry.cancelled ? "cancelled" : entry.dir;
      return item;
    }),
  );
  timelineList.lastElementChild?.scrollIntoView({ block: "nearest" });
  const snap = session.state;
  statePanel.textContent = snap
    ? `history length ${snap.history_len}\n` + snap.queries.join("\n")
    : "";
  banner.textContent = session.answerBanner ?? "";
  banner.hidden = session.answerBanner === null;
  if (session.halted) {
    say(`halted: ${session.halted}`);
  }
}

async function connect(): Promise<void> {
  transport?.close();
  transport = new WebSocketLineTransport(endpointBox.value);
  try {
    await transport.ready();
  } catch {
    session = null;
    setBusy(false);
    say(`cannot reach ${endpointBox.value} - is the gateway running?`);
    return;
  }
  transport.onClose(() => {
    session = null;
    setBusy(false);
    say("connection lost - load again to reconnect");
  });
  const client = new DebugClient(transport);
  session = new WebSession(client);
  const result = await session.load(
    programBox.value,
    queryBox.value,
    modeBox.value as Mode,
  );
  say(result.ok ? "loaded" : `load failed: ${result.message}`);
  redraw();
}

async function action(run: () => Promise<{ ok: boolean; message?: string }>): Promise<void> {
  if (!session) {
    return;
  }
  setBusy(true);
  try {
    const result = await run();
    if (!result.ok) {
      say(result.message ?? "error");
    }
  } catch (err) {
    say(err instanceof ProtocolError ? err.message : String(err));
  } finally {
    setBusy(false);
    redraw();
  }
}

buttons.load.addEventListener("click", () => {
  void action(async () => {
    await connect();
    return { ok: true };
  });
});
buttons.forward.addEventListener("click", () => void action(() => session!.stepForward()));
buttons.backward.addEventListener("click", () => void action(() => session!.stepBackward()));
buttons.run.addEventListener("click", () => void action(() => session!.run()));

document.addEventListener("keydown", (ev) => {
  if (document.activeElement === programBox || document.activeElement === queryBox) {
    return;
  }
  if (ev.key === "ArrowDown" || ev.key === "Enter") {
    buttons.forward.click();
    ev.preventDefault();
  } else if (ev.key === "ArrowUp" || ev.key === "u") {
    buttons.backward.click();
    ev.preventDefault();
  } else if (ev.key === "s") {
    buttons.run.click();
    ev.preventDefault();
  }
});

setBusy(false);
say("not connected");
