/** Push-channel client.  Wraps an EventSource-shaped stream, applies
 * events in arrival order, and on any drop or sequence gap resyncs from
 * GET /session before reconnecting at the right offset. */

import type { GameEvent } from "./types.js";

export interface EventSourceLike {
  onmessage: ((ev: { data: string }) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  close(): void;
}

export interface EventChannelOptions {
  /** e.g. (url) => new EventSource(url) */
  makeSource: (url: string) => EventSourceLike;
  /** URL for the stream starting at a sequence number. */
  urlFor: (since: number) => string;
  onEvent: (ev: GameEvent) => void;
  /** Refresh state out-of-band; resolves to the last applied seq. */
  resync: () => Promise<number>;
  retryMs?: number;
  /** Injectable timer for tests. */
  schedule?: (fn: () => void, ms: number) => void;
}

export class EventChannel {
  private nextSeq = 0;
  private source: EventSourceLike | null = null;
  private stopped = false;
  private reconnecting = false;

  constructor(private readonly opts: EventChannelOptions) {}

  start(since = 0): void {
    this.nextSeq = since;
    this.stopped = false;
    this.connect();
  }

  stop(): void {
    this.stopped = true;
    this.source?.close();
    this.source = null;
  }

  private connect(): void {
    if (this.stopped) return;
    const source = this.opts.makeSource(this.opts.urlFor(this.nextSeq));
    this.source = source;
    source.onmessage = (ev) => {
      let parsed: GameEvent;
      try {
        parsed = JSON.parse(ev.data) as GameEvent;
      } catch {
        return; // keep-alives and malformed frames
      }
      if (parsed.seq < this.nextSeq) return; // replayed duplicate
      if (parsed.seq > this.nextSeq) {
        this.recover(); // missed an event: resync + reconnect
        return;
      }
      this.nextSeq = parsed.seq + 1;
      this.opts.onEvent(parsed);
    };
    source.onerror = () => this.recover();
  }

  private recover(): void {
    if (this.stopped || this.reconnecting) return;
    this.reconnecting = true;
    this.source?.close();
    this.source = null;
    const schedule = this.opts.schedule ?? ((fn, ms) => setTimeout(fn, ms));
    schedule(() => {
      void this.opts
        .resync()
        .then((lastSeq) => {
          this.nextSeq = lastSeq + 1;
        })
        .catch(() => {
          /* resync failed; retry from the old offset */
        })
        .then(() => {
          this.reconnecting = false;
          this.connect();
        });
    }, this.opts.retryMs ?? 1000);
  }
}
