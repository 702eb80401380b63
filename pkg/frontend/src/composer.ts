// Move composition: pick a shape, cycle its orientations, pick a drop
// column.  Every step is constrained by the server's legalMoves list,
// so a finished selection is legal by construction and the client never
// submits a move the server would reject.

import { templatesOfShape, TEMPLATES } from "./templates.js";
import { LegalMove, MatchState } from "./types.js";

export interface Selection {
  shape: number | null;
  /** index into templatesOfShape(shape), not a template id */
  orient: number;
  column: number | null;
}

export const emptySelection = (): Selection => ({
  shape: null,
  orient: 0,
  column: null,
});

const legalKey = (m: LegalMove) => m.templateId * 10 + m.column;

export function legalSet(state: MatchState): Set<number> {
  return new Set(state.legalMoves.map(legalKey));
}

/** A shape is selectable if any of its orientations has a legal column. */
export function shapeEnabled(state: MatchState, shape: number): boolean {
  const legal = legalSet(state);
  return templatesOfShape(shape).some((t) =>
    [...Array(10).keys()].some((c) => legal.has(t.id * 10 + c)),
  );
}

export function legalColumns(state: MatchState, templateId: number): number[] {
  const legal = legalSet(state);
  const cols: number[] = [];
  for (let c = 0; c < 10; c++) {
    if (legal.has(templateId * 10 + c)) cols.push(c);
  }
  return cols;
}

export function selectedTemplate(sel: Selection): number | null {
  if (sel.shape === null) return null;
  const variants = templatesOfShape(sel.shape);
  return variants[((sel.orient % variants.length) + variants.length) % variants.length].id;
}

/** Pick a shape; lands on its first orientation that has a legal column. */
export function selectShape(state: MatchState, sel: Selection, shape: number): Selection {
  if (!shapeEnabled(state, shape)) return sel;
  const next: Selection = { shape, orient: 0, column: null };
  return normalizeOrient(state, next, +1);
}

/** Cycle to the next/previous orientation that still has a legal column. */
export function cycleOrient(state: MatchState, sel: Selection, dir: 1 | -1): Selection {
  if (sel.shape === null) return sel;
  return normalizeOrient(state, { ...sel, orient: sel.orient + dir, column: null }, dir);
}

function normalizeOrient(state: MatchState, sel: Selection, dir: 1 | -1): Selection {
  const variants = templatesOfShape(sel.shape!);
  let orient = sel.orient;
  for (let i = 0; i < variants.length; i++) {
    const idx = ((orient % variants.length) + variants.length) % variants.length;
    if (legalColumns(state, variants[idx].id).length > 0) {
      return { ...sel, orient: idx };
    }
    orient += dir;
  }
  return { ...sel, shape: null, orient: 0 }; // no orientation fits anywhere
}

/** Pick a column; only legal columns for the selected template stick. */
export function selectColumn(state: MatchState, sel: Selection, column: number): Selection {
  const templateId = selectedTemplate(sel);
  if (templateId === null) return sel;
  if (!legalColumns(state, templateId).includes(column)) return sel;
  return { ...sel, column };
}

/**
 * The move a completed selection describes, or null while incomplete.
 * Returns null for anything outside legalMoves (unreachable through the
 * select* functions, but re-checked so a stale selection cannot leak).
 */
export function composedMove(state: MatchState, sel: Selection): LegalMove | null {
  const templateId = selectedTemplate(sel);
  if (templateId === null || sel.column === null) return null;
  const move = { templateId, column: sel.column };
  return legalSet(state).has(legalKey(move)) ? move : null;
}

export const shapeOfTemplate = (templateId: number) => TEMPLATES[templateId].shape;
