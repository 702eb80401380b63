// Client-side drop preview: the same straight-down gravity rule the
// engine applies.  The server stays authoritative — the preview exists
// so the column picker can show where a piece would rest without a
// round trip.

import { TEMPLATES } from "./templates.js";
import { BOARD_HEIGHT, BOARD_WIDTH } from "./types.js";

export type Board = (number | null)[][]; // board[row][col], row 0 at bottom

/** Topmost occupied row + 1 for each column. */
export function columnHeights(board: Board): number[] {
  const heights = new Array(BOARD_WIDTH).fill(0);
  for (let c = 0; c < BOARD_WIDTH; c++) {
    for (let r = BOARD_HEIGHT - 1; r >= 0; r--) {
      if (board[r][c] !== null) {
        heights[c] = r + 1;
        break;
      }
    }
  }
  return heights;
}

/**
 * Base row where the template rests when dropped at `column`, or null
 * if it does not fit (out of bounds, or any cell would leave the board).
 */
export function dropRow(board: Board, templateId: number, column: number): number | null {
  const t = TEMPLATES[templateId];
  if (!t || column < 0 || column + t.width > BOARD_WIDTH) return null;
  const heights = columnHeights(board);
  let rest = 0;
  for (let dc = 0; dc < t.width; dc++) {
    const bottom = Math.min(...t.cells.filter(([c]) => c === dc).map(([, r]) => r));
    rest = Math.max(rest, heights[column + dc] - bottom);
  }
  for (const [, dr] of t.cells) {
    if (rest + dr >= BOARD_HEIGHT) return null;
  }
  return rest;
}

/** Absolute [row, col] cells the piece would occupy, or null if it cannot fit. */
export function previewCells(
  board: Board, templateId: number, column: number,
): [number, number][] | null {
  const rest = dropRow(board, templateId, column);
  if (rest === null) return null;
  return TEMPLATES[templateId].cells.map(([dc, dr]) => [rest + dr, column + dc]);
}
