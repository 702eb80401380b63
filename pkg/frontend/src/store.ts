// Single-threaded event-driven state store.  All mutation flows through
// the store's methods; the view is re-rendered from (server state,
// composer selection, connection flag) after every change.

import { composedMove, emptySelection, Selection } from "./composer.js";
import { LegalMove, MatchState } from "./types.js";

export type Listener = () => void;

export class MatchStore {
  state: MatchState | null = null;
  selection: Selection = emptySelection();
  connected = true;
  /** Seat index this client controls, or null when spectating. */
  humanSeat: number | null = null;

  private listeners: Listener[] = [];

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  /** Replace the server state; stale snapshots (lower version) are ignored. */
  applyServerState(next: MatchState): void {
    if (this.state && this.state.matchId === next.matchId
        && next.version < this.state.version) {
      return;
    }
    const turnChanged = !this.state || this.state.version !== next.version;
    this.state = next;
    if (turnChanged) this.selection = emptySelection();
    if (this.humanSeat === null) {
      const idx = next.seats.findIndex((s) => s.kind === "human");
      this.humanSeat = idx >= 0 ? idx : null;
    }
    this.emit();
  }

  setConnected(connected: boolean): void {
    if (this.connected !== connected) {
      this.connected = connected;
      this.emit();
    }
  }

  setSelection(selection: Selection): void {
    this.selection = selection;
    this.emit();
  }

  get myTurn(): boolean {
    return !!this.state && !this.state.finished
      && this.humanSeat === this.state.current;
  }

  /** The legal move the composer currently describes, else null. */
  pendingMove(): LegalMove | null {
    if (!this.state || !this.myTurn) return null;
    return composedMove(this.state, this.selection);
  }
}
