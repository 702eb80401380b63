// The 19 drop templates, generated with the same rules the engine uses:
// shapes in I, O, T, S, L order; per shape, clockwise rotations of the
// unmirrored form first, then any new orientations of the mirrored form.
// Template ids therefore match the server's, and a move encodes as
// templateId * 10 + column.

export type Cell = [number, number]; // (columnOffset, rowOffset), row 0 at bottom

export interface Template {
  id: number;
  shape: number; // index into SHAPE_NAMES
  cells: Cell[]; // sorted, normalized to non-negative offsets
  width: number;
  height: number;
}

export const SHAPE_NAMES = ["I", "O", "T", "S", "L"] as const;

const BASE_CELLS: Cell[][] = [
  [[0, 0], [1, 0], [2, 0], [3, 0]], // I
  [[0, 0], [1, 0], [0, 1], [1, 1]], // O
  [[0, 0], [1, 0], [2, 0], [1, 1]], // T
  [[1, 0], [2, 0], [0, 1], [1, 1]], // S
  [[0, 0], [1, 0], [2, 0], [0, 1]], // L
];
const MIRRORED_SHAPES = new Set([3, 4]); // S and L gain orientations mirrored

function normalize(cells: Cell[]): Cell[] {
  const minC = Math.min(...cells.map(([c]) => c));
  const minR = Math.min(...cells.map(([, r]) => r));
  return cells
    .map(([c, r]): Cell => [c - minC, r - minR])
    .sort((a, b) => a[0] - b[0] || a[1] - b[1]);
}

const rotateCw = (cells: Cell[]) =>
  normalize(cells.map(([c, r]): Cell => [r, -c]));
const mirror = (cells: Cell[]) =>
  normalize(cells.map(([c, r]): Cell => [-c, r]));
const key = (cells: Cell[]) => JSON.stringify(cells);

function orientations(base: Cell[], mirrored: boolean): Cell[][] {
  const seen = new Map<string, Cell[]>();
  let cells = normalize(base);
  if (mirrored) cells = mirror(cells);
  for (let i = 0; i < 4; i++) {
    if (!seen.has(key(cells))) seen.set(key(cells), cells);
    cells = rotateCw(cells);
  }
  return [...seen.values()];
}

function buildTemplates(): Template[] {
  const out: Template[] = [];
  for (let shape = 0; shape < SHAPE_NAMES.length; shape++) {
    const variants = orientations(BASE_CELLS[shape], false);
    if (MIRRORED_SHAPES.has(shape)) {
      const have = new Set(variants.map(key));
      for (const cells of orientations(BASE_CELLS[shape], true)) {
        if (!have.has(key(cells))) variants.push(cells);
      }
    }
    for (const cells of variants) {
      out.push({
        id: out.length,
        shape,
        cells,
        width: Math.max(...cells.map(([c]) => c)) + 1,
        height: Math.max(...cells.map(([, r]) => r)) + 1,
      });
    }
  }
  return out;
}

export const TEMPLATES: Template[] = buildTemplates();

export const templatesOfShape = (shape: number): Template[] =>
  TEMPLATES.filter((t) => t.shape === shape);

export const actionIndex = (templateId: number, column: number) =>
  templateId * 10 + column;
