"""Measurement experiments: branching factor, first-move advantage, state space.

These reproduce the classic "how big is this game" measurements:
per-turn legal-move counts over large self-play batches, the first
player's win-rate edge together with opening-uniqueness counting, and
the back-of-envelope state-space size from mean game length and mean
branching factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .agents import Agent, play_game
from .engine import GameState, outcome_vector


@dataclass(frozen=True)
class BranchingProfile:
    """Per-turn branching statistics over a batch of self-play games.

    ``mean``/``stddev``/``samples`` are indexed by turn; turns where the
    mover was skipped contribute nothing (their branching factor is 0 by
    definition but there was no decision to profile).
    """

    mean: np.ndarray
    stddev: np.ndarray
    samples: np.ndarray
    mean_length: float
    n_games: int

    def rows(self) -> list[tuple[int, float, float, int]]:
        return [
            (t + 1, float(self.mean[t]), float(self.stddev[t]), int(self.samples[t]))
            for t in range(len(self.mean))
            if self.samples[t] > 0
        ]


def branching_profile(agent: Agent, n_games: int,
                      rng: np.random.Generator) -> BranchingProfile:
    """Self-play with one agent; records |legal_moves| at every decision."""
    max_turns = 120
    total = np.zeros(max_turns)
    total_sq = np.zeros(max_turns)
    count = np.zeros(max_turns, dtype=np.int64)
    lengths = []
    for g in range(n_games):
        agent.seed(int(rng.integers(2**62)))
        state = GameState(players=2, seed=g)
        while not state.finished:
            turn = len(state.history)
            k = len(state.legal_actions())
            total[turn] += k
            total_sq[turn] += k * k
            count[turn] += 1
            state.apply(agent.move(state))
        lengths.append(state.length)
    with np.errstate(invalid="ignore"):
        mean = np.where(count > 0, total / np.maximum(count, 1), 0.0)
        var = np.maximum(total_sq / np.maximum(count, 1) - mean**2, 0.0)
    return BranchingProfile(mean, np.sqrt(var), count,
                            float(np.mean(lengths)), n_games)


@dataclass(frozen=True)
class FirstMoveReport:
    first_player_win_rate: float
    unique_prefix_count: int
    n_games: int
    prefix_len: int | None


def first_move_advantage(agent_factory: Callable[[], Agent], n_games: int,
                         prefix_len: int | None,
                         rng: np.random.Generator) -> FirstMoveReport:
    """Self-play win rate of the first mover, plus opening uniqueness.

    Draws count as half a win.  Uniqueness compares the exact sequence
    of action indices up to ``prefix_len`` moves (``None`` = whole game).
    """
    points = 0.0
    prefixes: set[tuple[int, ...]] = set()
    for g in range(n_games):
        agents = [agent_factory(), agent_factory()]
        for agent in agents:
            agent.seed(int(rng.integers(2**62)))
        state = play_game(agents, seed=g)
        points += float(outcome_vector(state)[0])
        actions = tuple(a for _, a in state.history if a is not None)
        prefixes.add(actions if prefix_len is None else actions[:prefix_len])
    return FirstMoveReport(points / n_games, len(prefixes), n_games, prefix_len)


@dataclass(frozen=True)
class StateSpaceEstimate:
    """meanActions^meanTurns, with the transposed ordering for comparison."""

    value: float
    actions_pow_turns: float
    turns_pow_actions: float


def state_space_estimate(mean_turns: float, mean_actions: float) -> StateSpaceEstimate:
    if mean_turns <= 0 or mean_actions <= 0:
        raise ValueError("mean turns and actions must be positive")
    apt = float(mean_actions) ** float(mean_turns)
    tpa = float(mean_turns) ** float(mean_actions)
    return StateSpaceEstimate(apt, apt, tpa)
