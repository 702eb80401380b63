"""Agent registry and match runner.

An agent is anything with ``move(state) -> Move`` and ``seed(n)``;
construction is centralized in :func:`make_agent` so the CLI, server and
tournament runner share one naming scheme:

* ``random``            uniform over legal moves
* ``first``             lowest-index legal move (throughput baseline)
* ``user``              heuristic with the shipped user profile
* ``tuned``             heuristic with the shipped tuned profile
* ``heuristic``         heuristic with custom weights
* ``random-heuristic``  heuristic with fresh random weights every turn
* ``mcts`` / ``mcts-rave`` / ``mcts-poolrave``  tree search (see mcts.py)
"""

from __future__ import annotations

import numpy as np

from .engine import GameState, Move
from .heuristic import (
    TUNED_WEIGHTS,
    USER_WEIGHTS,
    HeuristicWeights,
    choose_move,
    load_weights,
    random_weights,
)


class Agent:
    name = "agent"

    def __init__(self):
        self._rng = np.random.default_rng(0)

    def seed(self, n: int) -> None:
        self._rng = np.random.default_rng(n)

    def move(self, state: GameState) -> Move:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class RandomAgent(Agent):
    name = "random"

    def move(self, state: GameState) -> Move:
        actions = state.legal_actions()
        return Move.from_action(int(actions[self._rng.integers(len(actions))]))


class FirstMoveAgent(Agent):
    name = "first"

    def move(self, state: GameState) -> Move:
        return Move.from_action(int(state.legal_actions()[0]))


class HeuristicAgent(Agent):
    def __init__(self, weights: HeuristicWeights, name: str = "heuristic"):
        super().__init__()
        self.weights = weights
        self.name = name

    def move(self, state: GameState) -> Move:
        return choose_move(state, self.weights, self._rng)


class RandomHeuristicAgent(Agent):
    """Heuristic play with four fresh uniform weights drawn every turn."""

    name = "random-heuristic"

    def move(self, state: GameState) -> Move:
        return choose_move(state, random_weights(self._rng), self._rng)


def make_agent(spec: str, rng: np.random.Generator | None = None) -> Agent:
    """Build an agent from a CLI-style spec like ``user`` or ``heuristic:w.json``.

    MCTS specs accept options after the colon, e.g. ``mcts:think=100``;
    see :func:`tetrislink.mcts.make_mcts_agent`.
    """
    name, _, arg = spec.partition(":")
    if name == "random":
        agent = RandomAgent()
    elif name == "first":
        agent = FirstMoveAgent()
    elif name == "user":
        agent = HeuristicAgent(USER_WEIGHTS, "user")
    elif name == "tuned":
        agent = HeuristicAgent(TUNED_WEIGHTS, "tuned")
    elif name == "heuristic":
        if not arg:
            raise ValueError("heuristic agent needs a weights file: heuristic:FILE")
        agent = HeuristicAgent(load_weights(arg), f"heuristic:{arg}")
    elif name == "random-heuristic":
        agent = RandomHeuristicAgent()
    elif name.startswith("mcts"):
        from .mcts import make_mcts_agent

        agent = make_mcts_agent(name, arg)
    else:
        raise ValueError(f"unknown agent {spec!r}")
    if rng is not None:
        agent.seed(int(rng.integers(2**62)))
    return agent


def play_game(agents: list[Agent], seed: int = 0,
              state: GameState | None = None) -> GameState:
    """Run a match to completion; agents[i] plays seat i."""
    if state is None:
        state = GameState(players=len(agents), seed=seed)
    while not state.finished:
        state.apply(agents[state.current].move(state))
    return state


def play_match(agent_a: Agent, agent_b: Agent, seed: int,
               a_first: bool = True) -> float:
    """Two-player match; returns A's result: win 1, draw 0.5, loss 0."""
    seats = [agent_a, agent_b] if a_first else [agent_b, agent_a]
    for i, agent in enumerate(seats):
        agent.seed(seed * 2 + i)
    state = play_game(seats, seed=seed)
    totals = state.totals()
    a_slot = 0 if a_first else 1
    ta, tb = int(totals[a_slot]), int(totals[1 - a_slot])
    return 1.0 if ta > tb else 0.0 if ta < tb else 0.5
