// Thin client for the match server: three HTTP calls and the event
// socket.  Nothing here interprets game rules.

import { MatchState, MoveRequest, SeatSpec } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function check(res: Response): Promise<any> {
  const body = await res.json().catch(() => ({}));
  if (!res.ok) throw new ApiError(res.status, body.detail ?? res.statusText);
  return body;
}

export class MatchApi {
  constructor(private base: string = "") {}

  async createMatch(seats: SeatSpec[], seed = 0): Promise<string> {
    const res = await fetch(`${this.base}/match`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ seats, seed }),
    });
    return (await check(res)).matchId;
  }

  async getState(matchId: string): Promise<MatchState> {
    return check(await fetch(`${this.base}/match/${matchId}`));
  }

  async postMove(matchId: string, move: MoveRequest): Promise<void> {
    await check(await fetch(`${this.base}/match/${matchId}/move`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(move),
    }));
  }

  /**
   * Subscribe to state pushes.  Returns a close function.  On socket
   * loss the caller is told via onDown and should resynchronize with
   * getState once reconnected.
   */
  openEvents(
    matchId: string,
    onState: (s: MatchState) => void,
    onDown: () => void,
  ): () => void {
    const url = `${this.base.replace(/^http/, "ws") || `ws://${location.host}`}` +
      `/match/${matchId}/events`;
    const ws = new WebSocket(url);
    ws.onmessage = (ev) => onState(JSON.parse(ev.data));
    ws.onerror = onDown;
    ws.onclose = onDown;
    return () => {
      ws.onclose = null;
      ws.close();
    };
  }
}
