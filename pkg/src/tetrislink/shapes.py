"""Tetromino shapes and their 19 droppable orientations.

A "template" is one concrete orientation of one of the five shapes
(I, O, T, S, L).  Rotating gives I:2, O:1, T:4 distinct orientations;
S and L gain extra orientations when mirrored (S:2+2, L:4+4), for 19
templates total.  Template ids are stable: shapes in the order
I, O, T, S, L; within a shape, clockwise rotations of the unmirrored
form first, then clockwise rotations of the mirrored form.  A move is
``template_id * 10 + column``, giving a 190-slot action space.

Coordinates are (column_offset, row_offset) with row 0 at the bottom,
normalized so the minimum offset on each axis is 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BOARD_WIDTH = 10
BOARD_HEIGHT = 20
NUM_ACTIONS = 190

SHAPE_NAMES = ("I", "O", "T", "S", "L")
PIECES_PER_SHAPE = 5
PIECES_PER_PLAYER = 25

# Base orientations, cells as (dc, dr), dr pointing up.
_BASE_CELLS = {
    "I": [(0, 0), (1, 0), (2, 0), (3, 0)],
    "O": [(0, 0), (1, 0), (0, 1), (1, 1)],
    "T": [(0, 0), (1, 0), (2, 0), (1, 1)],
    "S": [(1, 0), (2, 0), (0, 1), (1, 1)],
    "L": [(0, 0), (1, 0), (2, 0), (0, 1)],
}
_MIRRORED_SHAPES = ("S", "L")  # mirroring adds new orientations


@dataclass(frozen=True)
class PieceTemplate:
    id: int
    shape: int  # index into SHAPE_NAMES
    cells: frozenset[tuple[int, int]]
    width: int
    height: int

    @property
    def shape_name(self) -> str:
        return SHAPE_NAMES[self.shape]


def _normalize(cells):
    min_c = min(c for c, _ in cells)
    min_r = min(r for _, r in cells)
    return frozenset((c - min_c, r - min_r) for c, r in cells)


def _rotate_cw(cells):
    # (x, y) -> (y, -x), then shift back to non-negative offsets
    return _normalize([(r, -c) for c, r in cells])


def _mirror(cells):
    return _normalize([(-c, r) for c, r in cells])


def _orientations(base, mirrored):
    seen = []
    cells = _normalize(base)
    if mirrored:
        cells = _mirror(cells)
    for _ in range(4):
        if cells not in seen:
            seen.append(cells)
        cells = _rotate_cw(cells)
    return seen


def _build_templates() -> list[PieceTemplate]:
    out = []
    for shape_idx, name in enumerate(SHAPE_NAMES):
        variants = _orientations(_BASE_CELLS[name], mirrored=False)
        if name in _MIRRORED_SHAPES:
            for cells in _orientations(_BASE_CELLS[name], mirrored=True):
                if cells not in variants:
                    variants.append(cells)
        for cells in variants:
            out.append(
                PieceTemplate(
                    id=len(out),
                    shape=shape_idx,
                    cells=cells,
                    width=max(c for c, _ in cells) + 1,
                    height=max(r for _, r in cells) + 1,
                )
            )
    return out


TEMPLATES: list[PieceTemplate] = _build_templates()
NUM_TEMPLATES = len(TEMPLATES)


def templates() -> list[PieceTemplate]:
    """The canonical 19 templates in fixed id order."""
    return list(TEMPLATES)


def _build_arrays():
    """Flat numpy views of the templates for the numba kernels.

    Per-template columns are vertically contiguous for every tetromino
    orientation, so a column is fully described by its lowest (bottom)
    and highest (top) row offset.
    """
    n = NUM_TEMPLATES
    cells = np.zeros((n, 4, 2), dtype=np.int8)  # (dc, dr)
    width = np.zeros(n, dtype=np.int8)
    shape = np.zeros(n, dtype=np.int8)
    bottom = np.zeros((n, 4), dtype=np.int8)  # per local column dc
    top = np.zeros((n, 4), dtype=np.int8)
    for t in TEMPLATES:
        for k, (dc, dr) in enumerate(sorted(t.cells)):
            cells[t.id, k, 0] = dc
            cells[t.id, k, 1] = dr
        width[t.id] = t.width
        shape[t.id] = t.shape
        for dc in range(t.width):
            rows = [dr for c, dr in t.cells if c == dc]
            bottom[t.id, dc] = min(rows)
            top[t.id, dc] = max(rows)
            assert sorted(rows) == list(range(min(rows), max(rows) + 1))
    return cells, width, shape, bottom, top


TMPL_CELLS, TMPL_WIDTH, TMPL_SHAPE, TMPL_BOTTOM, TMPL_TOP = _build_arrays()


def action_index(template_id: int, column: int) -> int:
    return template_id * BOARD_WIDTH + column


def action_template(action: int) -> int:
    return action // BOARD_WIDTH


def action_column(action: int) -> int:
    return action % BOARD_WIDTH
