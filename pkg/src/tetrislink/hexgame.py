"""Minimal Hex for branching-factor experiments.

Cells are indexed row-major on an n x n rhombus with the usual six
neighbors; player 0 connects left to right, player 1 top to bottom.  A
full board always has exactly one winner, so playouts just fill the
board and scan once.  The built-in opponent plays the empty cell that
minimizes its side-to-side path cost (own stone 0, empty 1, opponent
impassable), which is strong enough on larger boards to expose the
branching-factor cliff of fixed-budget tree search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .mcts import GameAdapter, MCTS, SearchConfig

_JIT = dict(cache=True, nogil=True)

_INF = 1 << 20


class BoardFullError(Exception):
    pass


@dataclass
class HexBoard:
    n: int
    cells: np.ndarray  # int8[n*n], -1 empty / 0 / 1
    to_move: int = 0

    @staticmethod
    def empty(n: int) -> "HexBoard":
        if not 1 <= n <= 11:
            raise ValueError("side length 1..11")
        return HexBoard(n, np.full(n * n, -1, dtype=np.int8), 0)

    def copy(self) -> "HexBoard":
        return HexBoard(self.n, self.cells.copy(), self.to_move)

    def place(self, cell: int) -> None:
        if self.cells[cell] != -1:
            raise ValueError(f"cell {cell} occupied")
        self.cells[cell] = self.to_move
        self.to_move = 1 - self.to_move


@njit(**_JIT)
def _neighbors(n, cell, out):
    r, c = cell // n, cell % n
    k = 0
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1), (-1, 1), (1, -1)):
        rr, cc = r + dr, c + dc
        if 0 <= rr < n and 0 <= cc < n:
            out[k] = rr * n + cc
            k += 1
    return k


@njit(**_JIT)
def _has_chain(cells, n, player):
    # BFS from the player's starting side to the opposite side
    seen = np.zeros(n * n, dtype=np.uint8)
    queue = np.empty(n * n, dtype=np.int64)
    head = 0
    tail = 0
    for i in range(n):
        start = i * n if player == 0 else i
        if cells[start] == player:
            seen[start] = 1
            queue[tail] = start
            tail += 1
    nbuf = np.empty(6, dtype=np.int64)
    while head < tail:
        cell = queue[head]
        head += 1
        if player == 0 and cell % n == n - 1:
            return True
        if player == 1 and cell // n == n - 1:
            return True
        k = _neighbors(n, cell, nbuf)
        for j in range(k):
            nb = nbuf[j]
            if cells[nb] == player and seen[nb] == 0:
                seen[nb] = 1
                queue[tail] = nb
                tail += 1
    return False


@njit(**_JIT)
def _winner(cells, n):
    if _has_chain(cells, n, 0):
        return 0
    if _has_chain(cells, n, 1):
        return 1
    return -1


@njit(**_JIT)
def _playout(cells, n, to_move, seed, actions_out, players_out):
    """Fill the whole board in random turn order, then scan the winner.

    Filling past a decided position cannot flip the winner (extra stones
    never disconnect a chain), so one scan at the end suffices.
    """
    rng = seed | np.uint64(1)
    empties = np.empty(n * n, dtype=np.int64)
    m = 0
    for i in range(n * n):
        if cells[i] == -1:
            empties[m] = i
            m += 1
    count = 0
    while m > 0:
        rng ^= rng >> np.uint64(12)
        rng ^= rng << np.uint64(25)
        rng ^= rng >> np.uint64(27)
        rng &= np.uint64(0xFFFFFFFFFFFFFFFF)
        r = (rng * np.uint64(2685821657736338717)) & np.uint64(0xFFFFFFFFFFFFFFFF)
        j = np.int64(r % np.uint64(m))
        cell = empties[j]
        empties[j] = empties[m - 1]
        m -= 1
        cells[cell] = to_move
        actions_out[count] = cell
        players_out[count] = to_move
        count += 1
        to_move = 1 - to_move
    return count


@njit(**_JIT)
def _path_cost(cells, n, player):
    """Cheapest side-to-side path: own stone 0, empty 1, opponent blocked."""
    dist = np.full(n * n, _INF, dtype=np.int64)
    done = np.zeros(n * n, dtype=np.uint8)
    for i in range(n):
        start = i * n if player == 0 else i
        v = cells[start]
        if v == 1 - player:
            continue
        cost = 0 if v == player else 1
        if cost < dist[start]:
            dist[start] = cost
    nbuf = np.empty(6, dtype=np.int64)
    for _ in range(n * n):
        best = _INF
        u = -1
        for i in range(n * n):
            if done[i] == 0 and dist[i] < best:
                best = dist[i]
                u = i
        if u < 0:
            break
        done[u] = 1
        k = _neighbors(n, u, nbuf)
        for j in range(k):
            nb = nbuf[j]
            v = cells[nb]
            if v == 1 - player:
                continue
            step = 0 if v == player else 1
            if dist[u] + step < dist[nb]:
                dist[nb] = dist[u] + step
    out = _INF
    for i in range(n):
        goal = i * n + (n - 1) if player == 0 else (n - 1) * n + i
        if dist[goal] < out:
            out = dist[goal]
    return out


@njit(**_JIT)
def _best_move(cells, n, player):
    best_cost = _INF + 1
    best_block = -1
    best_cell = -1
    for cell in range(n * n):
        if cells[cell] != -1:
            continue
        cells[cell] = player
        cost = _path_cost(cells, n, player)
        block = _path_cost(cells, n, 1 - player)
        cells[cell] = -1
        if cost < best_cost or (cost == best_cost and block > best_block):
            best_cost = cost
            best_block = block
            best_cell = cell
    return best_cell


def hex_winner(board: HexBoard) -> int | None:
    w = int(_winner(board.cells, board.n))
    return None if w < 0 else w


def path_cost(board: HexBoard, player: int) -> int:
    return int(_path_cost(board.cells, board.n, player))


def shortest_path_move(board: HexBoard, player: int) -> int:
    """Empty cell minimizing the player's path cost.

    Ties go to the cell that most lengthens the opponent's path (then
    lowest index), so the racer also blocks when it costs nothing.
    """
    cell = int(_best_move(board.cells, board.n, player))
    if cell < 0:
        raise BoardFullError("no empty cell")
    return cell


class HexGame(GameAdapter):
    players = 2

    def __init__(self, n: int):
        self.n = n
        self.num_actions = n * n

    def initial_state(self, seed: int = 0) -> HexBoard:
        return HexBoard.empty(self.n)

    def clone(self, state: HexBoard) -> HexBoard:
        return state.copy()

    def current(self, state: HexBoard) -> int:
        return state.to_move

    def legal_actions(self, state: HexBoard) -> np.ndarray:
        return np.flatnonzero(state.cells == -1)

    def apply(self, state: HexBoard, action: int) -> None:
        state.place(int(action))

    def terminal(self, state: HexBoard) -> bool:
        return _winner(state.cells, state.n) >= 0 or not (state.cells == -1).any()

    def outcomes(self, state: HexBoard) -> np.ndarray:
        w = _winner(state.cells, state.n)
        out = np.zeros(2)
        if w >= 0:
            out[w] = 1.0
        return out

    def random_playout(self, state: HexBoard, seed: int):
        actions = np.empty(self.n * self.n, dtype=np.int64)
        players = np.empty(self.n * self.n, dtype=np.int64)
        m = _playout(state.cells, state.n, state.to_move, np.uint64(seed),
                     actions, players)
        return self.outcomes(state), actions[:m], players[:m]


@dataclass(frozen=True)
class SweepRow:
    size: int
    games: int
    wins: float
    win_rate: float


def hex_sweep(sizes: list[int], matches_per_size: int,
              mcts_config: SearchConfig,
              rng: np.random.Generator) -> list[SweepRow]:
    """Fixed-budget MCTS vs the shortest-path heuristic, per board size."""
    rows = []
    for n in sizes:
        game = HexGame(n)
        wins = 0.0
        for g in range(matches_per_size):
            searcher = MCTS(game, mcts_config, np.random.default_rng(
                int(rng.integers(2**62))))
            board = HexBoard.empty(n)
            mcts_seat = g % 2
            while not game.terminal(board):
                if board.to_move == mcts_seat:
                    board.place(searcher.search(board))
                else:
                    board.place(shortest_path_move(board, board.to_move))
            wins += float(game.outcomes(board)[mcts_seat])
        rows.append(SweepRow(n, matches_per_size, wins, wins / matches_per_size))
    return rows


def sweep_table(rows: list[SweepRow]) -> str:
    lines = ["size\tgames\twins\twinRate"]
    for r in rows:
        lines.append(f"{r.size}\t{r.games}\t{r.wins:g}\t{r.win_rate:.3f}")
    return "\n".join(lines) + "\n"
