// Wire types for the match server's HTTP + websocket API.

export const BOARD_WIDTH = 10;
export const BOARD_HEIGHT = 20;

export interface SeatSpec {
  kind: "human" | "agent";
  name: string;
}

export interface LegalMove {
  templateId: number;
  column: number;
}

/** Full display state as returned by GET /match/{id} and the event socket. */
export interface MatchState {
  matchId: string;
  version: number;
  players: number;
  /** board[row][col], row 0 at the bottom; player id or null. */
  board: (number | null)[][];
  /** pieces[row][col], same layout; placed-piece id or null. */
  pieces: (number | null)[][];
  /** inventories[player][shape], shapes in I,O,T,S,L order. */
  inventories: number[][];
  scores: number[];
  current: number;
  finished: boolean;
  legalMoves: LegalMove[];
  seats: SeatSpec[];
  winners?: number[];
}

export interface MoveRequest {
  seat: number;
  templateId: number;
  column: number;
}
