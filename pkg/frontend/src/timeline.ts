/** The port timeline: an append-only log of rendered trace lines.
 *
 * Entries arrive in wire order.  A backward entry cancels the forward
 * entry it undoes -- the latest live forward row with the same content --
 * so the view can grey that row out while keeping the full record.
 */

import type { Direction, WireEvent } from "./protocol.js";
import { renderEvent } from "./render.js";

export interface TimelineEntry {
  text: string;
  dir: Direction;
  kind: "port" | "answer";
  step: number;
  /** index of the forward entry this backward entry greys out */
  cancels: number | null;
  cancelled: boolean;
}

function contentKey(entry: TimelineEntry): string {
  // strip the direction marker so a ^Exit row matches its Exit row; step
  // numbers differ between the two emissions of one display event, so
  // content alone identifies the pair
  const text = entry.text.startsWith("^") ? entry.text.slice(1) : entry.text;
  return `${entry.kind}|${text}`;
}

export class TimelineModel {
  entries: TimelineEntry[] = [];

  /** Append one wire event; returns the new entry, or null if it drew nothing. */
  append(event: WireEvent): TimelineEntry | null {
    const text = renderEvent(event);
    if (text === null || (event.type !== "port" && event.type !== "answer")) {
      return null;
    }
    const entry: TimelineEntry = {
      text,
      dir: event.dir,
      kind: event.type,
      step: event.step,
      cancels: null,
      cancelled: false,
    };
    if (entry.dir === "bwd") {
      const key = contentKey(entry);
      for (let i = this.entries.length - 1; i >= 0; i--) {
        const other = this.entries[i];
        if (other.dir === "fwd" && !other.cancelled && contentKey(other) === key) {
          other.cancelled = true;
          entry.cancels = i;
          break;
        }
      }
    }
    this.entries.push(entry);
    return entry;
  }

  appendAll(events: WireEvent[]): TimelineEntry[] {
    const added: TimelineEntry[] = [];
    for (const event of events) {
      const entry = this.append(event);
      if (entry !== null) {
        added.push(entry);
      }
    }
    return added;
  }

  /** The whole transcript, one line per entry, in arrival order. */
  text(): string {
    return this.entries.map((e) => e.text).join("\n");
  }

  liveForward(): TimelineEntry[] {
    return this.entries.filter((e) => e.dir === "fwd" && !e.cancelled);
  }

  clear(): void {
    this.entries = [];
  }
}
