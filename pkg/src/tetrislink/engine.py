"""Tetris Link rules engine.

Board is 10 columns x 20 rows, row 0 at the bottom.  Two to four players
each hold 25 pieces (5 per shape) and must place one per turn; players
with no fitting piece are skipped, and the game ends when no piece of any
player fits.  Scoring: every piece in an edge-connected group of at least
three own pieces is worth one point; each empty cell newly covered by a
drop costs one minus point, capped at two per move.

State is mutated only through :meth:`GameState.apply`; states are cheap
to copy and safe to hand between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .shapes import (
    BOARD_HEIGHT,
    BOARD_WIDTH,
    NUM_ACTIONS,
    PIECES_PER_PLAYER,
    PIECES_PER_SHAPE,
    TEMPLATES,
    TMPL_SHAPE,
    TMPL_WIDTH,
    PieceTemplate,
    templates,
)

LOG_VERSION = 1


class EngineError(Exception):
    pass


class OutOfBoundsError(EngineError):
    pass


class NoRoomError(EngineError):
    pass


class IllegalMoveError(EngineError):
    pass


class NotFinishedError(EngineError):
    pass


class CorruptLogError(EngineError):
    pass


@dataclass(frozen=True)
class Move:
    template: int
    column: int

    @property
    def action(self) -> int:
        return self.template * BOARD_WIDTH + self.column

    @staticmethod
    def from_action(action: int) -> "Move":
        return Move(action // BOARD_WIDTH, action % BOARD_WIDTH)


@dataclass(frozen=True)
class MoveOutcome:
    rest_row: int
    new_holes: int
    penalty: int


@dataclass(frozen=True)
class ScoreBreakdown:
    group_points: int
    minus_points: int

    @property
    def total(self) -> int:
        return self.group_points - self.minus_points


class GameState:
    """Full match state: board, inventories, penalties and turn cursor."""

    __slots__ = (
        "players", "grid", "piece_grid", "heights", "col_occ", "inventory",
        "penalties", "uf_parent", "comp_size", "group_points", "group_size",
        "misc", "current", "turn", "finished", "history", "seed",
    )

    def __init__(self, players: int = 2, seed: int = 0):
        if not 2 <= players <= 4:
            raise ValueError("2 to 4 players")
        self.players = players
        self.grid = np.full((BOARD_HEIGHT, BOARD_WIDTH), -1, dtype=np.int8)
        self.piece_grid = np.full((BOARD_HEIGHT, BOARD_WIDTH), -1, dtype=np.int16)
        self.heights = np.zeros(BOARD_WIDTH, dtype=np.int8)
        self.col_occ = np.zeros(BOARD_WIDTH, dtype=np.int8)
        self.inventory = np.full((players, 5), PIECES_PER_SHAPE, dtype=np.int8)
        self.penalties = np.zeros(players, dtype=np.int32)
        maxp = players * PIECES_PER_PLAYER
        self.uf_parent = np.zeros(maxp, dtype=np.int16)
        self.comp_size = np.zeros(maxp, dtype=np.int16)
        self.group_points = np.zeros(players, dtype=np.int32)
        self.group_size = np.zeros(players, dtype=np.int32)
        self.misc = np.zeros(2, dtype=np.int32)
        self.current = 0
        self.turn = 0
        self.finished = False
        self.history: list[tuple[int, int | None]] = []
        self.seed = seed

    def copy(self) -> "GameState":
        out = GameState.__new__(GameState)
        out.players = self.players
        for name in ("grid", "piece_grid", "heights", "col_occ", "inventory",
                     "penalties", "uf_parent", "comp_size", "group_points",
                     "group_size", "misc"):
            setattr(out, name, getattr(self, name).copy())
        out.current = self.current
        out.turn = self.turn
        out.finished = self.finished
        out.history = list(self.history)
        out.seed = self.seed
        return out

    # -- queries ----------------------------------------------------------

    def legal_actions(self, player: int | None = None) -> np.ndarray:
        p = self.current if player is None else player
        buf = np.empty(NUM_ACTIONS, dtype=np.int16)
        n = K.legal_actions(self.heights, self.inventory[p], buf)
        return buf[:n].copy()

    def legal_moves(self, player: int | None = None) -> list[Move]:
        return [Move.from_action(int(a)) for a in self.legal_actions(player)]

    def legal_action_mask(self, player: int | None = None) -> np.ndarray:
        p = self.current if player is None else player
        mask = np.empty(NUM_ACTIONS, dtype=np.bool_)
        K.legal_mask(self.heights, self.inventory[p], mask)
        return mask

    def has_legal(self, player: int) -> bool:
        return bool(K.has_legal(self.heights, self.inventory[player]))

    def is_legal(self, move: Move) -> bool:
        return bool(
            K.action_legal(self.heights, self.inventory[self.current], move.action)
        )

    def totals(self) -> np.ndarray:
        return (self.group_points - self.penalties).astype(np.int64)

    @property
    def length(self) -> int:
        """Game length in turns, counting skipped turns as turns taken."""
        return len(self.history)

    # -- mutation ---------------------------------------------------------

    def apply(self, move: Move | int) -> MoveOutcome:
        if isinstance(move, int):
            move = Move.from_action(move)
        if self.finished:
            raise IllegalMoveError("game is finished")
        if not self.is_legal(move):
            raise IllegalMoveError(f"illegal move {move}")
        rest, holes = K.apply_action(
            self.grid, self.piece_grid, self.heights, self.col_occ,
            self.inventory, self.penalties, self.uf_parent, self.comp_size,
            self.group_points, self.group_size, self.misc,
            self.current, move.action,
        )
        self.history.append((self.current, move.action))
        self.turn += 1
        self._advance()
        return MoveOutcome(int(rest), int(holes), min(int(holes), 2))

    def _advance(self) -> None:
        """Move the cursor to the next player with a legal move.

        Skipped players get explicit skip entries in the history so logs
        replay deterministically.  When nobody can move, every player is
        skipped once (the final round of passes that detects game over)
        and the game is finished; ``len(history)`` is then the game
        length in turns, counting skipped turns.
        """
        for k in range(1, self.players + 1):
            cand = (self.current + k) % self.players
            if self.has_legal(cand):
                for j in range(1, k):
                    self.history.append(((self.current + j) % self.players, None))
                self.current = cand
                return
        for j in range(1, self.players + 1):
            self.history.append(((self.current + j) % self.players, None))
        self.finished = True


def drop_row(state: GameState, template: int, column: int) -> int:
    """Base row where the template would rest, under pure gravity."""
    if column < 0 or column + TMPL_WIDTH[template] > BOARD_WIDTH:
        raise OutOfBoundsError(f"template {template} at column {column}")
    r = K.rest_row(state.heights, template, column)
    if r < 0:
        raise NoRoomError(f"template {template} at column {column}")
    return int(r)


def count_holes(grid: np.ndarray) -> int:
    """Empty cells with at least one occupied cell above them in the column."""
    occ = grid >= 0
    above = np.zeros_like(occ)
    above[:-1] = np.maximum.accumulate(occ[::-1], axis=0)[::-1][1:]
    return int((~occ & above).sum())


def piece_component_sizes(state: GameState, player: int) -> list[int]:
    """Sizes (in pieces) of the player's edge-connected piece groups.

    Computed from scratch: pieces are linked whenever any of their
    squares touch edge-to-edge.
    """
    own = state.grid == player
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rows, cols = np.nonzero(own)
    for r, c in zip(rows.tolist(), cols.tolist()):
        p = int(state.piece_grid[r, c])
        parent.setdefault(p, p)
        for dr, dc in ((0, 1), (1, 0)):
            rr, cc = r + dr, c + dc
            if rr < BOARD_HEIGHT and cc < BOARD_WIDTH and own[rr, cc]:
                q = int(state.piece_grid[rr, cc])
                parent.setdefault(q, q)
                ra, rb = find(p), find(q)
                if ra != rb:
                    parent[rb] = ra
    sizes: dict[int, int] = {}
    for p in parent:
        root = find(p)
        sizes[root] = sizes.get(root, 0) + 1
    return list(sizes.values())


def score(state: GameState, player: int) -> ScoreBreakdown:
    """Group score recomputed from scratch, minus accumulated penalties.

    Connectivity is on squares (any edge-adjacent contact links two
    pieces) but a group's point value is its piece count, and the
    size->=3 threshold counts pieces.
    """
    group_points = sum(sz for sz in piece_component_sizes(state, player) if sz >= 3)
    return ScoreBreakdown(group_points, int(state.penalties[player]))


def tracked_score(state: GameState, player: int) -> ScoreBreakdown:
    """Incrementally tracked version of :func:`score` (same contract)."""
    return ScoreBreakdown(int(state.group_points[player]), int(state.penalties[player]))


@dataclass(frozen=True)
class Outcome:
    winners: tuple[int, ...]
    totals: tuple[int, ...]

    @property
    def draw(self) -> bool:
        return len(self.winners) > 1


def winner(state: GameState) -> Outcome:
    if not state.finished:
        raise NotFinishedError("game not finished")
    totals = tuple(int(t) for t in state.totals())
    best = max(totals)
    return Outcome(tuple(i for i, t in enumerate(totals) if t == best), totals)


def outcome_vector(state: GameState) -> np.ndarray:
    """Per-player result in [0, 1]: win 1, shared win 0.5, loss 0."""
    out = winner(state)
    vec = np.zeros(state.players)
    vec[list(out.winners)] = 1.0 if len(out.winners) == 1 else 0.5
    return vec


def capacity_check(players: int = 2) -> int:
    """Total squares the players' pieces can cover (board holds 200)."""
    return PIECES_PER_PLAYER * 4 * players


# -- game log format ------------------------------------------------------
#
# One JSON record per match: {version, playerCount, seed, moves, finalScores}
# with moves either {"player": p, "templateId": t, "column": c} or
# {"player": p, "skip": true}.  Serialization is canonical (sorted keys,
# compact separators) so replaying a written log is byte-identical.


def to_log_dict(state: GameState) -> dict:
    moves = []
    for player, action in state.history:
        if action is None:
            moves.append({"player": player, "skip": True})
        else:
            moves.append({
                "player": player,
                "templateId": action // BOARD_WIDTH,
                "column": action % BOARD_WIDTH,
            })
    return {
        "version": LOG_VERSION,
        "playerCount": state.players,
        "seed": state.seed,
        "moves": moves,
        "finalScores": [int(t) for t in state.totals()],
    }


def log_to_json(state: GameState) -> str:
    return json.dumps(to_log_dict(state), sort_keys=True, separators=(",", ":"))


def replay_log(log: dict | str) -> GameState:
    """Rebuild a state by replaying a log; raises CorruptLogError on mismatch."""
    if isinstance(log, str):
        try:
            log = json.loads(log)
        except json.JSONDecodeError as e:
            raise CorruptLogError(str(e)) from e
    try:
        state = GameState(players=int(log["playerCount"]), seed=int(log.get("seed", 0)))
        for entry in log["moves"]:
            player = int(entry["player"])
            if entry.get("skip"):
                # the engine regenerates skip entries itself; verified below
                continue
            if player != state.current:
                raise CorruptLogError(
                    f"log plays player {player}, engine expects {state.current}"
                )
            state.apply(Move(int(entry["templateId"]), int(entry["column"])))
    except (KeyError, TypeError, ValueError) as e:
        raise CorruptLogError(f"malformed log: {e}") from e
    except IllegalMoveError as e:
        raise CorruptLogError(f"log replays an illegal move: {e}") from e
    if to_log_dict(state)["moves"] != [
        {k: (int(v) if not isinstance(v, bool) else v) for k, v in m.items()}
        for m in log["moves"]
    ]:
        raise CorruptLogError("replayed history does not match log")
    if "finalScores" in log:
        if [int(t) for t in state.totals()] != [int(s) for s in log["finalScores"]]:
            raise CorruptLogError("final scores do not match replay")
    return state
