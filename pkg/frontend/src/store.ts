/** Single-owner session state.  Events from the push channel are applied
 * in arrival order; a sequence gap reports "gap" so the caller resyncs
 * from GET /session.  Optimistic human moves render immediately and roll
 * back on 409. */

import type { GameEvent, InspectPayload, SessionInfo, StatePayload } from "./types.js";

export interface Notice {
  kind: "error" | "info";
  text: string;
}

export interface LastMove {
  action: number;
  seat: number;
}

export type ApplyResult = "applied" | "stale" | "gap";

export class SessionStore {
  session: SessionInfo | null = null;
  state: StatePayload | null = null;
  lastSeq = -1;
  notice: Notice | null = null;
  inspect: InspectPayload | null = null;
  lastMove: LastMove | null = null;
  private optimisticBackup: { state: StatePayload; lastMove: LastMove | null } | null =
    null;
  private listeners: Array<() => void> = [];

  subscribe(fn: () => void): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  startSession(info: SessionInfo): void {
    this.session = info;
    this.state = info.state;
    this.lastSeq = -1; // events replay from 0 and carry the same state
    this.notice = null;
    this.inspect = null;
    this.lastMove = null;
    this.optimisticBackup = null;
    this.emit();
  }

  /** Apply one push-channel event.  Returns "stale" for already-seen
   * sequence numbers, "gap" when an event was missed (caller must
   * resync), "applied" otherwise. */
  applyEvent(ev: GameEvent): ApplyResult {
    if (ev.seq <= this.lastSeq) return "stale";
    if (ev.seq > this.lastSeq + 1) return "gap";
    this.lastSeq = ev.seq;
    this.state = ev.state;
    this.optimisticBackup = null; // authoritative state supersedes
    this.inspect = null; // values are per-position
    if ((ev.type === "move" || ev.type === "agent_move") && ev.action !== undefined) {
      this.lastMove = { action: ev.action, seat: ev.seat ?? -1 };
    }
    if (ev.type === "error" && ev.message) {
      this.notice = { kind: "error", text: ev.message };
    }
    this.emit();
    return "applied";
  }

  /** Adopt authoritative state from GET /session after a gap or channel
   * drop. */
  resync(info: SessionInfo): void {
    this.state = info.state;
    if (info.last_seq !== undefined) this.lastSeq = info.last_seq;
    this.optimisticBackup = null;
    this.inspect = null;
    this.emit();
  }

  /** Render a locally predicted state before the server confirms. */
  applyOptimistic(next: StatePayload, move: LastMove): void {
    if (!this.state) return;
    this.optimisticBackup = { state: this.state, lastMove: this.lastMove };
    this.state = next;
    this.lastMove = move;
    this.inspect = null;
    this.emit();
  }

  /** Undo an optimistic render after a 409; no-op if the server already
   * confirmed. */
  rollbackOptimistic(): void {
    if (!this.optimisticBackup) return;
    this.state = this.optimisticBackup.state;
    this.lastMove = this.optimisticBackup.lastMove;
    this.optimisticBackup = null;
    this.emit();
  }

  setNotice(notice: Notice | null): void {
    this.notice = notice;
    this.emit();
  }

  setInspect(payload: InspectPayload | null): void {
    this.inspect = payload;
    this.emit();
  }
}
