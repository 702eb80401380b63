"""Tetris Link game engine and agent laboratory.

Engine, heuristic agents, generic MCTS (UCT / RAVE / PoolRAVE), an RL
environment with a trainer wire protocol, Bayesian Bradley-Terry rated
tournaments, game-theoretic measurements, and a minimal Hex game for
branching-factor experiments.
"""

from .agents import (
    Agent,
    HeuristicAgent,
    RandomAgent,
    make_agent,
    play_game,
    play_match,
)
from .engine import (
    GameState,
    Move,
    MoveOutcome,
    Outcome,
    ScoreBreakdown,
    capacity_check,
    count_holes,
    drop_row,
    log_to_json,
    outcome_vector,
    replay_log,
    score,
    tracked_score,
    winner,
)
from .heuristic import (
    TUNED_WEIGHTS,
    USER_WEIGHTS,
    HeuristicWeights,
    evaluate,
    evaluate_moves,
    features,
    load_weights,
    save_weights,
    tune_weights,
)
from .mcts import (
    MCTS,
    GameAdapter,
    MCTSAgent,
    SearchConfig,
    TetrisLinkGame,
    parallel_search,
    prefill_rave,
    prepare_logs,
    search,
)
from .rating import BBTConfig, Rating, bbt_update, expected_result, run_tournament
from .shapes import BOARD_HEIGHT, BOARD_WIDTH, NUM_ACTIONS, PieceTemplate, templates

__version__ = "0.1.0"

__all__ = [
    "Agent", "HeuristicAgent", "RandomAgent", "make_agent", "play_game",
    "play_match",
    "GameState", "Move", "MoveOutcome", "Outcome", "ScoreBreakdown",
    "capacity_check", "count_holes", "drop_row", "log_to_json",
    "outcome_vector", "replay_log", "score", "tracked_score", "winner",
    "TUNED_WEIGHTS", "USER_WEIGHTS", "HeuristicWeights", "evaluate",
    "evaluate_moves", "features", "load_weights", "save_weights",
    "tune_weights",
    "MCTS", "GameAdapter", "MCTSAgent", "SearchConfig", "TetrisLinkGame",
    "parallel_search", "prefill_rave", "prepare_logs", "search",
    "BBTConfig", "Rating", "bbt_update", "expected_result", "run_tournament",
    "BOARD_HEIGHT", "BOARD_WIDTH", "NUM_ACTIONS", "PieceTemplate", "templates",
    "__version__",
]
