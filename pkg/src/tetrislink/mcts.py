"""Monte Carlo tree search over a small game-adapter interface.

Variants: plain UCT, RAVE (all-moves-as-first statistics with a linear
beta schedule) and PoolRAVE (playouts occasionally substitute a move
from the pool of best-RAVE root actions).  Playouts are uniformly random
or heuristic; tree-parallel search shares one tree between worker
threads using per-node locks and virtual loss.

The adapter keeps the search game-agnostic: anything exposing clone /
legal_actions / apply / terminal / outcomes can be searched (Tetris Link
here, Hex in :mod:`tetrislink.hexgame`).
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels as K
from .agents import Agent
from .engine import GameState, Move, outcome_vector, replay_log
from .heuristic import USER_WEIGHTS, HeuristicWeights
from .shapes import NUM_ACTIONS


class NoLegalMovesError(Exception):
    pass


class GameAdapter:
    """Minimal interface the search needs; states are adapter-owned values."""

    num_actions: int
    players: int

    def initial_state(self, seed: int = 0):
        raise NotImplementedError

    def clone(self, state):
        raise NotImplementedError

    def current(self, state) -> int:
        raise NotImplementedError

    def legal_actions(self, state) -> np.ndarray:
        raise NotImplementedError

    def apply(self, state, action: int) -> None:
        raise NotImplementedError

    def terminal(self, state) -> bool:
        raise NotImplementedError

    def outcomes(self, state) -> np.ndarray:
        """Per-player result in [0, 1]: win 1, shared win 0.5, loss 0."""
        raise NotImplementedError

    def random_playout(self, state, seed: int):
        """Mutates state to terminal; returns (outcomes, actions, players).

        Default implementation loops legal_actions/apply; adapters
        override with a compiled fast path.
        """
        rng = np.random.default_rng(seed)
        actions, players = [], []
        while not self.terminal(state):
            legal = self.legal_actions(state)
            a = int(legal[rng.integers(len(legal))])
            players.append(self.current(state))
            actions.append(a)
            self.apply(state, a)
        return self.outcomes(state), np.array(actions, dtype=np.int64), np.array(
            players, dtype=np.int64
        )

    def heuristic_playout(self, state, weights: HeuristicWeights, seed: int):
        raise NotImplementedError("no heuristic playout for this game")


class TetrisLinkGame(GameAdapter):
    """Tetris Link behind the search adapter.

    ``shaping`` > 0 replaces the hard win/loss outcome with a logistic
    of the score margin (still in [0, 1], ordered the same way); sparse
    all-losses playout results give the tree no gradient at small
    budgets, while margins always do.
    """

    num_actions = NUM_ACTIONS

    def __init__(self, players: int = 2, shaping: float = 0.0):
        self.players = players
        self.shaping = shaping

    def initial_state(self, seed: int = 0) -> GameState:
        return GameState(players=self.players, seed=seed)

    def clone(self, state: GameState) -> GameState:
        return state.copy()

    def current(self, state: GameState) -> int:
        return state.current

    def legal_actions(self, state: GameState) -> np.ndarray:
        return state.legal_actions()

    def apply(self, state: GameState, action: int) -> None:
        state.apply(action)

    def terminal(self, state: GameState) -> bool:
        return state.finished

    def outcomes(self, state: GameState) -> np.ndarray:
        if self.shaping > 0.0:
            return _totals_to_outcome(state.totals(), self.shaping)
        return outcome_vector(state)

    def random_playout(self, state: GameState, seed: int):
        actions = np.empty(120, dtype=np.int16)
        players = np.empty(120, dtype=np.int8)
        totals = np.empty(state.players, dtype=np.int64)
        n = K.playout_random(
            state.grid, state.piece_grid, state.heights, state.col_occ,
            state.inventory, state.penalties, state.uf_parent, state.comp_size,
            state.group_points, state.group_size, state.misc,
            state.current, state.players, np.uint64(seed),
            actions, players, totals,
        )
        state.finished = True
        return _totals_to_outcome(totals, self.shaping), actions[:n], players[:n]

    def heuristic_playout(self, state: GameState, weights: HeuristicWeights,
                          seed: int):
        actions = np.empty(120, dtype=np.int16)
        players = np.empty(120, dtype=np.int8)
        totals = np.empty(state.players, dtype=np.int64)
        n = K.playout_heuristic(
            state.grid, state.piece_grid, state.heights, state.col_occ,
            state.inventory, state.penalties, state.uf_parent, state.comp_size,
            state.group_points, state.group_size, state.misc,
            state.current, state.players, weights.as_array(), np.uint64(seed),
            actions, players, totals,
        )
        state.finished = True
        return _totals_to_outcome(totals, self.shaping), actions[:n], players[:n]


def _totals_to_outcome(totals: np.ndarray, shaping: float = 0.0) -> np.ndarray:
    if shaping > 0.0:
        totals = np.asarray(totals, dtype=np.float64)
        margins = np.empty(len(totals))
        for i in range(len(totals)):
            others = np.delete(totals, i)
            margins[i] = totals[i] - others.max()
        return 1.0 / (1.0 + np.exp(-shaping * margins))
    best = totals.max()
    winners = totals == best
    out = np.zeros(len(totals))
    out[winners] = 1.0 if winners.sum() == 1 else 0.5
    return out


@dataclass(frozen=True)
class SearchConfig:
    variant: str = "uct"  # uct | rave | poolrave
    cp: float = math.sqrt(2)
    beta: float = 250.0
    pool_size: int = 5
    pool_prob: float = 0.3
    playout: str = "random"  # random | heuristic
    weights: HeuristicWeights = USER_WEIGHTS
    think_time: float | None = None  # seconds per move
    iterations: int | None = 1000  # used when think_time is None
    playouts_per_step: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.variant not in ("uct", "rave", "poolrave"):
            raise ValueError(f"unknown variant {self.variant}")
        if self.think_time is None and self.iterations is None:
            raise ValueError("need think_time or iterations")
        if not 0.0 <= self.pool_prob <= 1.0:
            raise ValueError("pool_prob in [0,1]")

    @property
    def uses_rave(self) -> bool:
        return self.variant in ("rave", "poolrave")


class SearchNode:
    """One tree node: per-child visit/value/RAVE/virtual-loss counters."""

    __slots__ = ("player", "actions", "index_of", "counts", "values", "vloss",
                 "rave_counts", "rave_values", "children", "lock")

    def __init__(self, player: int, actions: np.ndarray):
        n = len(actions)
        self.player = player
        self.actions = np.asarray(actions, dtype=np.int64)
        self.index_of = {int(a): i for i, a in enumerate(actions)}
        self.counts = np.zeros(n, dtype=np.float64)
        self.values = np.zeros(n, dtype=np.float64)
        self.vloss = np.zeros(n, dtype=np.float64)
        self.rave_counts = np.zeros(n, dtype=np.float64)
        self.rave_values = np.zeros(n, dtype=np.float64)
        self.children: dict[int, SearchNode] = {}
        self.lock = threading.Lock()

    @property
    def visits(self) -> int:
        return int(self.counts.sum())


def uct_score(node: SearchNode, child: int, cp: float) -> float:
    """Mean value plus exploration bonus; unvisited children score +inf."""
    n = node.counts[child]
    if n == 0:
        return math.inf
    total = max(node.counts.sum(), 2.0)
    return node.values[child] / n + cp * math.sqrt(math.log(total) / n)


def rave_score(node: SearchNode, child: int, cp: float, beta: float) -> float:
    """RAVE-mixed value: (1-a)*Q + a*Q_rave, exploration scaled by a.

    a = max(0, (beta - raveVisits)/beta): fresh actions lean fully on
    the shared RAVE estimate; once RAVE visits reach beta the score
    collapses to the plain mean with no exploration bonus.
    """
    n = node.counts[child]
    rn = node.rave_counts[child]
    alpha = max(0.0, (beta - rn) / beta)
    q = node.values[child] / n if n > 0 else 0.0
    q_rave = node.rave_values[child] / rn if rn > 0 else 0.5
    mixed = (1.0 - alpha) * q + alpha * q_rave
    if n == 0:
        return math.inf
    total = max(node.counts.sum(), 2.0)
    return mixed + cp * math.sqrt(math.log(total) / n) * alpha


@dataclass
class SearchStats:
    iterations: int = 0
    elapsed: float = 0.0
    pool_decisions: int = 0
    pool_substitutions: int = 0
    root_actions: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64))
    root_counts: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def per_second(self) -> float:
        return self.iterations / self.elapsed if self.elapsed > 0 else 0.0

    def report(self) -> str:
        lines = [
            f"iterations\t{self.iterations}",
            f"seconds\t{self.elapsed:.3f}",
            f"simulations_per_second\t{self.per_second:.0f}",
        ]
        order = np.argsort(-self.root_counts)
        for i in order[:10]:
            lines.append(f"root_action\t{self.root_actions[i]}\t{int(self.root_counts[i])}")
        return "\n".join(lines) + "\n"


class MCTS:
    """A reusable searcher: one tree per move, stats kept per search."""

    def __init__(self, game: GameAdapter, config: SearchConfig,
                 rng: np.random.Generator | None = None):
        self.game = game
        self.config = config
        self.rng = rng or np.random.default_rng(0)
        self.last_stats = SearchStats()

    # -- public API -------------------------------------------------------

    def search(self, state, root: SearchNode | None = None) -> int:
        """Search from the state; ``root`` reuses an existing (sub)tree."""
        if root is None:
            root = self.make_root(state)
        if len(root.actions) == 0:
            raise NoLegalMovesError("no legal actions at search root")
        if self.config.threads > 1:
            self._run_parallel(root, state)
        else:
            self._run(root, state, self.rng, locked=False)
        return self._pick(root)

    def make_root(self, state) -> SearchNode:
        actions = self.game.legal_actions(state)
        if len(actions) == 0:
            raise NoLegalMovesError("no legal actions at search root")
        return SearchNode(self.game.current(state), actions)

    # -- internals --------------------------------------------------------

    def _deadline(self) -> tuple[float | None, int]:
        cfg = self.config
        if cfg.think_time is not None:
            return time.monotonic() + cfg.think_time, 2**62
        return None, cfg.iterations

    def _run(self, root: SearchNode, root_state, rng: np.random.Generator,
             locked: bool, shared: SearchStats | None = None) -> None:
        deadline, budget = self._deadline()
        stats = shared if shared is not None else SearchStats()
        start = time.monotonic()
        it = 0
        while it < budget:
            if deadline is not None and time.monotonic() >= deadline:
                break
            self._simulate(root, root_state, rng, locked, stats)
            it += 1
        if shared is None:
            stats.iterations = it
            stats.elapsed = time.monotonic() - start
            stats.root_actions = root.actions.copy()
            stats.root_counts = root.counts.copy()
            self.last_stats = stats

    def _run_parallel(self, root: SearchNode, root_state) -> None:
        start = time.monotonic()
        stats = SearchStats()
        counts = []
        def worker(seed: int):
            rng = np.random.default_rng(seed)
            deadline, budget = self._deadline()
            it = 0
            while it < budget:
                if deadline is not None and time.monotonic() >= deadline:
                    break
                self._simulate(root, root_state, rng, locked=True, stats=stats)
                it += 1
            counts.append(it)
        threads = [
            threading.Thread(target=worker, args=(int(self.rng.integers(2**62)),))
            for _ in range(self.config.threads)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        stats.iterations = sum(counts)
        stats.elapsed = time.monotonic() - start
        stats.root_actions = root.actions.copy()
        stats.root_counts = root.counts.copy()
        self.last_stats = stats

    def _select(self, node: SearchNode, locked: bool) -> int:
        cfg = self.config
        beta = cfg.beta if cfg.uses_rave else 0.0
        total = node.counts.sum() + node.vloss.sum()
        idx = K.uct_select(
            node.counts, node.values, node.vloss,
            node.rave_counts, node.rave_values,
            max(total, 1.0), cfg.cp, beta,
        )
        if locked:
            node.vloss[idx] += 1.0
        return int(idx)

    def _simulate(self, root: SearchNode, root_state,
                  rng: np.random.Generator, locked: bool,
                  stats: SearchStats) -> None:
        game = self.game
        cfg = self.config
        state = game.clone(root_state)
        path: list[tuple[SearchNode, int]] = []
        moves: list[tuple[int, int]] = []  # (player, action) along the sim
        node = root
        outcome = None
        while True:
            if locked:
                with node.lock:
                    idx = self._select(node, locked)
                    fresh = node.counts[idx] == 0
            else:
                idx = self._select(node, locked)
                fresh = node.counts[idx] == 0
            path.append((node, idx))
            action = int(node.actions[idx])
            moves.append((node.player, action))
            game.apply(state, action)
            if game.terminal(state):
                outcome = game.outcomes(state)
                break
            if fresh:
                break
            nxt = node.children.get(idx)
            if nxt is None:
                child = SearchNode(game.current(state), game.legal_actions(state))
                if locked:
                    with node.lock:
                        nxt = node.children.setdefault(idx, child)
                else:
                    nxt = node.children.setdefault(idx, child)
            node = nxt
        if outcome is None:
            outcome = self._playout(root, state, rng, moves, stats)
        self._backpropagate(path, moves, outcome, locked)

    def _playout(self, root: SearchNode, state, rng: np.random.Generator,
                 moves: list[tuple[int, int]], stats: SearchStats) -> np.ndarray:
        game = self.game
        cfg = self.config
        if cfg.variant == "poolrave":
            return self._pool_playout(root, state, rng, moves, stats)
        acc = None
        base = game.clone(state) if cfg.playouts_per_step > 1 else state
        for k in range(cfg.playouts_per_step):
            s = game.clone(base) if cfg.playouts_per_step > 1 else state
            seed = int(rng.integers(2**62))
            if cfg.playout == "heuristic":
                out, actions, players = game.heuristic_playout(s, cfg.weights, seed)
            else:
                out, actions, players = game.random_playout(s, seed)
            acc = out if acc is None else acc + out
            if k == 0:
                moves.extend(zip(players.tolist(), actions.tolist()))
        return acc / cfg.playouts_per_step

    def _pool_playout(self, root: SearchNode, state, rng: np.random.Generator,
                      moves: list[tuple[int, int]],
                      stats: SearchStats) -> np.ndarray:
        """Random playout where moves come from the best-RAVE pool sometimes."""
        game = self.game
        cfg = self.config
        with np.errstate(invalid="ignore"):
            rave_mean = np.where(
                root.rave_counts > 0, root.rave_values / np.maximum(root.rave_counts, 1), -1.0
            )
        pool = [int(root.actions[i]) for i in np.argsort(-rave_mean)[: cfg.pool_size]]
        while not game.terminal(state):
            legal = game.legal_actions(state)
            stats.pool_decisions += 1
            a = None
            if rng.random() < cfg.pool_prob:
                stats.pool_substitutions += 1
                legal_set = set(int(x) for x in legal)
                for cand in pool:
                    if cand in legal_set:
                        a = cand
                        break
            if a is None:
                a = int(legal[rng.integers(len(legal))])
            moves.append((game.current(state), a))
            game.apply(state, a)
        return game.outcomes(state)

    def _backpropagate(self, path: list[tuple[SearchNode, int]],
                       moves: list[tuple[int, int]], outcome: np.ndarray,
                       locked: bool) -> None:
        use_rave = self.config.uses_rave
        for depth, (node, idx) in enumerate(path):
            reward = float(outcome[node.player])
            if locked:
                node.lock.acquire()
            node.counts[idx] += 1.0
            node.values[idx] += reward
            if locked:
                node.vloss[idx] -= 1.0
            if use_rave:
                index_of = node.index_of
                for player, action in moves[depth:]:
                    if player != node.player:
                        continue
                    i = index_of.get(action)
                    if i is not None:
                        node.rave_counts[i] += 1.0
                        node.rave_values[i] += reward
            if locked:
                node.lock.release()

    def _pick(self, root: SearchNode) -> int:
        best = root.counts.max()
        ties = root.actions[root.counts == best]
        return int(ties.min())


def search(game: GameAdapter, state, config: SearchConfig,
           rng: np.random.Generator) -> int:
    """One-off search; returns the action with most root visits."""
    return MCTS(game, config, rng).search(state)


def parallel_search(game: GameAdapter, state, config: SearchConfig,
                    rng: np.random.Generator) -> int:
    """Tree-parallel search over config.threads workers (shared tree)."""
    if config.threads < 1:
        raise ValueError("threads >= 1")
    return MCTS(game, config, rng).search(state)


def playout(game: GameAdapter, state, policy: str,
            rng: np.random.Generator,
            weights: HeuristicWeights = USER_WEIGHTS) -> np.ndarray:
    """Play the state to terminal under the policy; returns the outcome."""
    if game.terminal(state):
        return game.outcomes(state)
    s = game.clone(state)
    seed = int(rng.integers(2**62))
    if policy == "heuristic":
        out, _, _ = game.heuristic_playout(s, weights, seed)
    else:
        out, _, _ = game.random_playout(s, seed)
    return out


@dataclass(frozen=True)
class PreparedLog:
    """One validated game log, reduced to what RAVE seeding needs."""

    moves: tuple[tuple[int, int], ...]  # (player, action), skips dropped
    outcome: tuple[float, ...]

    def seat_actions(self, seat: int) -> list[int]:
        return [a for p, a in self.moves if p == seat]


def prepare_logs(game_logs: list[dict | str]) -> list[PreparedLog]:
    """Replay-validate logs once; raises CorruptLogError on bad input."""
    prepared = []
    for log in game_logs:
        if isinstance(log, PreparedLog):
            prepared.append(log)
            continue
        final = replay_log(log)
        outcome = outcome_vector(final)
        moves = tuple((p, a) for p, a in final.history if a is not None)
        prepared.append(PreparedLog(moves, tuple(float(o) for o in outcome)))
    return prepared


def prefill_rave(root: SearchNode,
                 game_logs: list[dict | str] | list[PreparedLog],
                 game: GameAdapter | None = None) -> SearchNode:
    """Seed a tree's RAVE tables from finished game logs.

    Each log is replayed from the initial position; along the realized
    path, every node receives all-moves-as-first updates (all later
    actions of the node's player) valued with that seat's final outcome.
    Nodes missing along the path are created, so the returned tree
    already spans the logged lines of play.  ``root`` must describe the
    initial position; pass ``game`` to build the path nodes (without it
    only the root's tables are seeded).

    Example: with 100 self-play logs, the root's RAVE visit total equals
    the number of logged actions by the root player across all logs.
    """
    if game_logs and not isinstance(game_logs[0], PreparedLog):
        game_logs = prepare_logs(game_logs)
    for log in game_logs:
        _seed_path(root, log, game)
    return root


def _seed_path(root: SearchNode, log: PreparedLog,
               game: GameAdapter | None) -> None:
    moves = log.moves
    node: SearchNode | None = root
    state = None
    if game is not None:
        state = game.initial_state()
    for depth in range(len(moves)):
        if node is None:
            break
        if node.player < len(log.outcome):
            reward = log.outcome[node.player]
            for player, action in moves[depth:]:
                if player != node.player:
                    continue
                i = node.index_of.get(action)
                if i is not None:
                    node.rave_counts[i] += 1.0
                    node.rave_values[i] += reward
        if state is None:
            break  # no adapter: root tables only
        player, action = moves[depth]
        idx = node.index_of.get(action)
        if idx is None:
            break  # log deviates from this tree's position
        game.apply(state, action)
        if game.terminal(state):
            break
        child = node.children.get(idx)
        if child is None:
            child = SearchNode(game.current(state), game.legal_actions(state))
            node.children[idx] = child
        node = child


class MCTSAgent(Agent):
    """Playing agent around :class:`MCTS`, with log prefill and tree reuse.

    When prefill logs are given (RAVE variants only), the agent builds a
    tree seeded along the logged lines of play once per game, then keeps
    reusing the subtree reached by the actual moves, so the seeded
    statistics keep guiding the search as the game progresses.
    """

    def __init__(self, config: SearchConfig, name: str = "mcts",
                 game: GameAdapter | None = None,
                 prefill_logs: list[dict] | None = None):
        super().__init__()
        self.config = config
        self.name = name
        self.game = game or TetrisLinkGame()
        self.prefill_logs = prefill_logs
        self._searcher = MCTS(self.game, config, self._rng)
        self._prepared: list[PreparedLog] | None = None
        self._tree: SearchNode | None = None
        self._tree_actions: list[int] = []

    def seed(self, n: int) -> None:
        super().seed(n)
        self._searcher.rng = self._rng
        self._tree = None
        self._tree_actions = []

    @property
    def last_stats(self) -> SearchStats:
        return self._searcher.last_stats

    def _reuse_root(self, state: GameState) -> SearchNode | None:
        """Prefilled tree node for the state, advancing along played moves."""
        if self.prefill_logs is None or not self.config.uses_rave:
            return None
        played = [a for _, a in state.history if a is not None]
        n_known = len(self._tree_actions)
        if (self._tree is None or n_known > len(played)
                or played[:n_known] != self._tree_actions):
            if self._prepared is None:
                self._prepared = prepare_logs(self.prefill_logs)
            initial = self.game.initial_state(getattr(state, "seed", 0))
            root = SearchNode(self.game.current(initial),
                              self.game.legal_actions(initial))
            prefill_rave(root, self._prepared, self.game)
            self._tree, self._tree_actions, n_known = root, [], 0
        node = self._tree
        for action in played[n_known:]:
            idx = node.index_of.get(action)
            child = node.children.get(idx) if idx is not None else None
            if child is None:
                node = None
                break
            node = child
        if node is None or node.player != self.game.current(state):
            node = SearchNode(self.game.current(state),
                              self.game.legal_actions(state))
        self._tree = node
        self._tree_actions = list(played)
        return node

    def move(self, state: GameState) -> Move:
        return Move.from_action(
            self._searcher.search(state, root=self._reuse_root(state))
        )


def make_mcts_agent(name: str, arg: str) -> MCTSAgent:
    """Parse ``mcts[-rave|-poolrave]:key=value,...`` agent specs.

    Keys: think (ms), iters, cp, beta, pool, prob, threads,
    policy (random|heuristic).
    """
    variant = {"mcts": "uct", "mcts-rave": "rave", "mcts-poolrave": "poolrave"}.get(name)
    if variant is None:
        raise ValueError(f"unknown MCTS agent {name!r}")
    cfg = SearchConfig(variant=variant)
    opts = {}
    if arg:
        for item in arg.split(","):
            k, _, v = item.partition("=")
            opts[k.strip()] = v.strip()
    if "think" in opts:
        cfg = replace(cfg, think_time=float(opts["think"]) / 1000.0, iterations=None)
    if "iters" in opts:
        cfg = replace(cfg, iterations=int(opts["iters"]), think_time=None)
    if "cp" in opts:
        cfg = replace(cfg, cp=float(opts["cp"]))
    if "beta" in opts:
        cfg = replace(cfg, beta=float(opts["beta"]))
    if "pool" in opts:
        cfg = replace(cfg, pool_size=int(opts["pool"]))
    if "prob" in opts:
        cfg = replace(cfg, pool_prob=float(opts["prob"]))
    if "threads" in opts:
        cfg = replace(cfg, threads=int(opts["threads"]))
    if "policy" in opts:
        cfg = replace(cfg, playout=opts["policy"])
    game = None
    if "shaping" in opts:
        game = TetrisLinkGame(shaping=float(opts["shaping"]))
    return MCTSAgent(cfg, name=f"{name}:{arg}" if arg else name, game=game)
