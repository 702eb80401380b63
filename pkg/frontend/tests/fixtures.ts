// Hand-built MatchState fixtures mirroring server payloads.

import { TEMPLATES } from "../src/templates.js";
import { BOARD_HEIGHT, BOARD_WIDTH, LegalMove, MatchState } from "../src/types.js";

export function allLegalMoves(board: (number | null)[][]): LegalMove[] {
  // bounds-only enumeration is enough for an empty board fixture
  void board;
  const moves: LegalMove[] = [];
  for (const t of TEMPLATES) {
    for (let c = 0; c + t.width <= BOARD_WIDTH; c++) {
      moves.push({ templateId: t.id, column: c });
    }
  }
  return moves;
}

export const emptyGrid = (): (number | null)[][] =>
  Array.from({ length: BOARD_HEIGHT }, () =>
    Array.from({ length: BOARD_WIDTH }, () => null));

export function emptyState(): MatchState {
  const board = emptyGrid();
  return {
    matchId: "fixture",
    version: 0,
    players: 2,
    board,
    pieces: emptyGrid(),
    inventories: [[5, 5, 5, 5, 5], [5, 5, 5, 5, 5]],
    scores: [0, 0],
    current: 0,
    finished: false,
    legalMoves: allLegalMoves(board),
    seats: [
      { kind: "human", name: "" },
      { kind: "agent", name: "tuned" },
    ],
  };
}

/** Drop a piece into the fixture by hand: cells at absolute positions. */
export function placePiece(state: MatchState, player: number, pieceId: number,
                           cells: [number, number][]): void {
  for (const [r, c] of cells) {
    state.board[r][c] = player;
    state.pieces[r][c] = pieceId;
  }
}
