"""Shared helpers: an independent move oracle and state generators.

The oracle here deliberately avoids the engine's internals: it works
from the template cell sets and the raw board grid only, so the two
implementations can disagree.
"""

from __future__ import annotations

import numpy as np
import pytest

from tetrislink.engine import GameState, Move
from tetrislink.shapes import (
    BOARD_HEIGHT,
    BOARD_WIDTH,
    SHAPE_NAMES,
    TEMPLATES,
)


def column_heights(grid: np.ndarray) -> list[int]:
    """Topmost occupied row + 1 per column, from the grid alone."""
    heights = []
    for c in range(BOARD_WIDTH):
        col = np.nonzero(grid[:, c] >= 0)[0]
        heights.append(int(col.max()) + 1 if col.size else 0)
    return heights


def oracle_rest_row(grid: np.ndarray, template_id: int, column: int) -> int | None:
    """Base row where the piece rests, or None if it cannot fit.

    A piece falls straight down and stops when any of its columns
    lands on that column's stack (or the floor).
    """
    t = TEMPLATES[template_id]
    if column < 0 or column + t.width > BOARD_WIDTH:
        return None
    heights = column_heights(grid)
    rest = 0
    for dc in range(t.width):
        bottom = min(dr for c, dr in t.cells if c == dc)
        rest = max(rest, heights[column + dc] - bottom)
    for dc, dr in t.cells:
        if rest + dr >= BOARD_HEIGHT:
            return None
    return rest


def oracle_legal_moves(state: GameState, player: int | None = None) -> set[Move]:
    """Brute force: every template x column that fits with inventory."""
    p = state.current if player is None else player
    out = set()
    for t in TEMPLATES:
        if state.inventory[p, t.shape] <= 0:
            continue
        for c in range(BOARD_WIDTH - t.width + 1):
            if oracle_rest_row(state.grid, t.id, c) is not None:
                out.add(Move(t.id, c))
    return out


def random_reachable_state(rng: np.random.Generator,
                           players: int = 2) -> GameState:
    """Snapshot of a uniformly random game at a random depth."""
    state = GameState(players=players, seed=int(rng.integers(2**31)))
    depth = int(rng.integers(0, 45))
    for _ in range(depth):
        if state.finished:
            break
        actions = state.legal_actions()
        state.apply(int(actions[rng.integers(len(actions))]))
    return state


def play_random_game(seed: int, players: int = 2) -> GameState:
    rng = np.random.default_rng(seed)
    state = GameState(players=players, seed=seed)
    while not state.finished:
        actions = state.legal_actions()
        state.apply(int(actions[rng.integers(len(actions))]))
    return state


def scripted_state(moves: list[tuple[int, int, int]],
                   players: int = 2) -> GameState:
    """Build a state by applying (player, template, column) moves in
    order, asserting the engine agrees about whose turn it is."""
    state = GameState(players=players)
    for player, template, column in moves:
        assert state.current == player, (
            f"expected player {player}, engine says {state.current}"
        )
        state.apply(Move(template, column))
    return state


def template_by_shape(shape_name: str, index: int = 0) -> int:
    """Template id of the index-th orientation of a shape."""
    ids = [t.id for t in TEMPLATES if SHAPE_NAMES[t.shape] == shape_name]
    return ids[index]


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260826)
