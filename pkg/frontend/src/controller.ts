/** Wires clicks, the API, and the push channel to the store.  All
 * branching lives here so it is testable with fake transports. */

import { Api, ApiError } from "./api.js";
import { optimisticNext } from "./layout.js";
import { EventChannel, type EventSourceLike } from "./sse.js";
import { SessionStore } from "./store.js";
import type { CreateSessionRequest } from "./api.js";

export class GameController {
  channel: EventChannel | null = null;
  inspectOn = false;

  constructor(
    private readonly api: Api,
    readonly store: SessionStore,
    private readonly makeSource: (url: string) => EventSourceLike,
    private readonly retryMs = 1000,
  ) {}

  async newGame(req: CreateSessionRequest): Promise<void> {
    this.channel?.stop();
    const info = await this.api.createSession(req);
    this.store.startSession(info);
    this.inspectOn = false;
    const id = info.session_id;
    this.channel = new EventChannel({
      makeSource: this.makeSource,
      urlFor: (since) => this.api.eventsUrl(id, since),
      onEvent: (ev) => {
        if (this.store.applyEvent(ev) === "applied" && this.inspectOn) {
          void this.refreshInspect();
        }
      },
      resync: async () => {
        const fresh = await this.api.getSession(id);
        this.store.resync(fresh);
        return this.store.lastSeq;
      },
      retryMs: this.retryMs,
    });
    this.channel.start(0);
  }

  /** The human seat that is to move, or null. */
  humanSeatToMove(): number | null {
    const { session, state } = this.store;
    if (!session || !state || state.terminal) return null;
    return session.seats[state.to_move] === "human" ? state.to_move : null;
  }

  /** Board click entry point.  Illegal targets are rejected locally:
   * no request leaves the client. */
  async clickAction(action: number): Promise<void> {
    const { session, state } = this.store;
    if (!session || !state) return;
    const seat = this.humanSeatToMove();
    if (seat === null) {
      this.store.setNotice({ kind: "info", text: "not your turn" });
      return;
    }
    if (!state.legal_actions.includes(action)) {
      this.store.setNotice({ kind: "error", text: `illegal move (action ${action})` });
      return;
    }
    await this.submitMove(action, seat);
  }

  /** POST a move with optimistic rendering; 409 rolls back and shows a
   * non-blocking notice. */
  async submitMove(action: number, seat: number): Promise<void> {
    const { session, state } = this.store;
    if (!session || !state) return;
    const predicted = optimisticNext(session.game, state, action, seat);
    if (predicted) this.store.applyOptimistic(predicted, { action, seat });
    this.store.setNotice(null);
    try {
      await this.api.move(session.session_id, action, seat);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.store.rollbackOptimistic();
        this.store.setNotice({ kind: "error", text: err.detail });
        return;
      }
      this.store.rollbackOptimistic();
      throw err;
    }
  }

  async undo(): Promise<void> {
    const { session } = this.store;
    if (!session) return;
    try {
      await this.api.undo(session.session_id);
      // the authoritative state arrives as an "undo" event on the channel
    } catch (err) {
      if (err instanceof ApiError) {
        this.store.setNotice({ kind: "error", text: err.detail });
        return;
      }
      throw err;
    }
  }

  async setInspect(on: boolean): Promise<void> {
    this.inspectOn = on;
    if (on) {
      await this.refreshInspect();
    } else {
      this.store.setInspect(null);
    }
  }

  async refreshInspect(): Promise<void> {
    const { session } = this.store;
    if (!session) return;
    const before = this.store.state?.move_count;
    const payload = await this.api.inspect(session.session_id);
    // drop a stale answer if the position changed while the agent thought
    if (this.store.state?.move_count === before) {
      this.store.setInspect(payload);
    }
  }
}
