import { describe, expect, it } from "vitest";

import {
  composedMove,
  cycleOrient,
  emptySelection,
  legalColumns,
  legalSet,
  selectColumn,
  selectShape,
  selectedTemplate,
  shapeEnabled,
} from "../src/composer.js";
import { SHAPE_NAMES, templatesOfShape } from "../src/templates.js";
import { emptyState } from "./fixtures.js";

const O = SHAPE_NAMES.indexOf("O");
const I = SHAPE_NAMES.indexOf("I");

describe("move composer", () => {
  it("walks shape -> orientation -> column to a legal move", () => {
    const state = emptyState();
    let sel = selectShape(state, emptySelection(), I);
    sel = cycleOrient(state, sel, 1); // vertical I
    sel = selectColumn(state, sel, 9);
    const move = composedMove(state, sel)!;
    expect(move).toEqual({ templateId: templatesOfShape(I)[1].id, column: 9 });
    expect(legalSet(state).has(move.templateId * 10 + move.column)).toBe(true);
  });

  it("disables shapes with no legal placement", () => {
    const state = emptyState();
    state.legalMoves = state.legalMoves.filter(
      (m) => !templatesOfShape(O).some((t) => t.id === m.templateId),
    );
    expect(shapeEnabled(state, O)).toBe(false);
    expect(selectShape(state, emptySelection(), O).shape).toBeNull();
  });

  it("refuses the O piece at column 9 (bounds rule)", () => {
    const state = emptyState();
    const sel = selectShape(state, emptySelection(), O);
    expect(legalColumns(state, selectedTemplate(sel)!)).toEqual(
      [0, 1, 2, 3, 4, 5, 6, 7, 8],
    );
    expect(selectColumn(state, sel, 9).column).toBeNull();
  });

  it("cycling orientations skips ones with no legal column", () => {
    const state = emptyState();
    const horizontal = templatesOfShape(I)[0].id;
    state.legalMoves = state.legalMoves.filter((m) => m.templateId !== horizontal);
    let sel = selectShape(state, emptySelection(), I);
    expect(selectedTemplate(sel)).toBe(templatesOfShape(I)[1].id);
    sel = cycleOrient(state, sel, 1);
    expect(selectedTemplate(sel)).toBe(templatesOfShape(I)[1].id); // only option
  });

  it("never composes a move outside legalMoves", () => {
    const state = emptyState();
    // keep a single legal move and try to reach any other one
    state.legalMoves = [{ templateId: 2, column: 4 }];
    for (let shape = 0; shape < SHAPE_NAMES.length; shape++) {
      let sel = selectShape(state, emptySelection(), shape);
      for (let column = 0; column < 10; column++) {
        sel = selectColumn(state, sel, column);
        const move = composedMove(state, sel);
        if (move !== null) expect(move).toEqual({ templateId: 2, column: 4 });
      }
    }
  });

  it("re-checks a stale selection against fresh state", () => {
    const state = emptyState();
    let sel = selectShape(state, emptySelection(), O);
    sel = selectColumn(state, sel, 3);
    expect(composedMove(state, sel)).not.toBeNull();
    state.legalMoves = state.legalMoves.filter((m) => m.column !== 3);
    expect(composedMove(state, sel)).toBeNull();
  });
});
