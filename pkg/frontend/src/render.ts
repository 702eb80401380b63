// Pure state -> HTML string rendering.  No DOM access here so the
// functions are testable anywhere; main.ts assigns the strings into
// containers.

import { Selection, selectedTemplate, legalColumns, shapeEnabled } from "./composer.js";
import { previewCells } from "./gravity.js";
import { SHAPE_NAMES, templatesOfShape } from "./templates.js";
import { BOARD_HEIGHT, BOARD_WIDTH, MatchState } from "./types.js";

/** Bottom-left cell of every placed piece gets the identifying dot. */
export function dotCells(state: MatchState): Set<string> {
  const firstCell = new Map<number, [number, number]>();
  for (let r = 0; r < BOARD_HEIGHT; r++) {
    for (let c = 0; c < BOARD_WIDTH; c++) {
      const piece = state.pieces[r][c];
      if (piece !== null && !firstCell.has(piece)) firstCell.set(piece, [r, c]);
    }
  }
  return new Set([...firstCell.values()].map(([r, c]) => `${r},${c}`));
}

export function renderBoard(state: MatchState | null, selection?: Selection): string {
  if (!state || !Array.isArray(state.board)) return "";
  const dots = dotCells(state);
  const preview = new Set<string>();
  if (selection && selection.column !== null) {
    const templateId = selectedTemplate(selection);
    if (templateId !== null) {
      for (const [r, c] of previewCells(state.board, templateId, selection.column) ?? []) {
        preview.add(`${r},${c}`);
      }
    }
  }
  const rows: string[] = [];
  for (let r = BOARD_HEIGHT - 1; r >= 0; r--) {
    const cells: string[] = [];
    for (let c = 0; c < BOARD_WIDTH; c++) {
      const owner = state.board[r][c];
      const classes = ["cell"];
      if (owner !== null) classes.push(`p${owner}`);
      if (preview.has(`${r},${c}`)) classes.push("preview");
      const dot = dots.has(`${r},${c}`) ? '<span class="dot"></span>' : "";
      cells.push(`<div class="${classes.join(" ")}">${dot}</div>`);
    }
    rows.push(`<div class="row">${cells.join("")}</div>`);
  }
  return rows.join("");
}

export function renderScores(state: MatchState | null): string {
  if (!state) return "";
  return state.scores
    .map((score, p) => {
      const seat = state.seats[p];
      const label = seat.kind === "human" ? "human" : seat.name || "agent";
      const turn = !state.finished && state.current === p ? " to-move" : "";
      return `<div class="score p${p}${turn}">` +
        `<span class="who">${label}</span>` +
        `<span class="points">${score}</span></div>`;
    })
    .join("");
}

export function renderBanner(state: MatchState | null, connected: boolean): string {
  if (!connected) return '<div class="banner lost">connection lost — reconnecting</div>';
  if (!state) return "";
  if (state.finished) {
    const winners = state.winners ?? [];
    const text = winners.length === 1
      ? `player ${winners[0] + 1} wins`
      : `draw between ${winners.map((w) => `player ${w + 1}`).join(" and ")}`;
    return `<div class="banner winner">${text}</div>`;
  }
  return "";
}

export function renderComposer(state: MatchState | null, selection: Selection,
                               myTurn: boolean): string {
  if (!state || state.finished || !myTurn) return "";
  const me = state.current;
  const shapes = SHAPE_NAMES.map((name, shape) => {
    const stock = state.inventories[me][shape];
    const enabled = stock > 0 && shapeEnabled(state, shape);
    const active = selection.shape === shape ? " active" : "";
    return `<button class="shape${active}" data-shape="${shape}"` +
      `${enabled ? "" : " disabled"}>${name}<small>${stock}</small></button>`;
  }).join("");
  const templateId = selectedTemplate(selection);
  const orients = selection.shape !== null
    ? `<button data-rotate="-1">&#8634;</button>` +
      `<span class="orient">${(selection.orient + 1)}/` +
      `${templatesOfShape(selection.shape).length}</span>` +
      `<button data-rotate="1">&#8635;</button>`
    : "";
  const columns = templateId !== null
    ? [...Array(BOARD_WIDTH).keys()].map((c) => {
        const enabled = legalColumns(state, templateId).includes(c);
        const active = selection.column === c ? " active" : "";
        return `<button class="col${active}" data-column="${c}"` +
          `${enabled ? "" : " disabled"}>${c + 1}</button>`;
      }).join("")
    : "";
  const ready = selection.column !== null && templateId !== null;
  return `<div class="shapes">${shapes}</div>` +
    `<div class="orients">${orients}</div>` +
    `<div class="columns">${columns}</div>` +
    `<button class="submit" data-submit${ready ? "" : " disabled"}>drop</button>`;
}
