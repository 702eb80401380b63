"""Two-player RL environment with a masked 190-slot action space.

Observation layout (602 floats): 200 board indicators for the current
player then 200 for the opponent (bottom row first), 5+5 inventory
counts scaled by /5, both scores scaled by /100, then the 190-bit legal
mask.  The opponent is part of the environment: stepping applies the
agent move, then the opponent reply, and returns the next observation.

Rewards (per step):

* Guided: (delta score + delta group size)/100, minus 0.1 scolding on an
  illegal attempt (the board does not change, the episode continues)
* Score:  delta score / 100
* Simple: 0 until terminal, then +1 win / -1 loss / 0 draw

``serve`` speaks a line-delimited JSON protocol for external trainers.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass

import numpy as np

from .agents import Agent, make_agent
from .engine import GameState, winner
from .heuristic import USER_WEIGHTS, HeuristicWeights
from .shapes import BOARD_HEIGHT, BOARD_WIDTH, NUM_ACTIONS

OBS_LENGTH = 2 * 200 + 2 * 5 + 2 + NUM_ACTIONS  # 602
SCOLDING = 0.1
REWARD_KINDS = ("guided", "score", "simple")


class EpisodeFinishedError(Exception):
    pass


@dataclass(frozen=True)
class StepResult:
    observation: np.ndarray
    reward: float
    done: bool
    illegal_attempt: bool
    score: int
    group_size: int


def observe(state: GameState, player: int) -> np.ndarray:
    """600-float observation of the state from one player's seat."""
    opponent = 1 - player
    obs = np.zeros(OBS_LENGTH)
    obs[0:200] = (state.grid == player).reshape(-1)
    obs[200:400] = (state.grid == opponent).reshape(-1)
    obs[400:405] = state.inventory[player] / 5.0
    obs[405:410] = state.inventory[opponent] / 5.0
    totals = state.totals()
    obs[410] = totals[player] / 100.0
    obs[411] = totals[opponent] / 100.0
    if not state.finished and state.current == player:
        obs[412:] = state.legal_action_mask()
    return obs


class TetrisLinkEnv:
    """Gym-style reset/step against a built-in opponent agent."""

    def __init__(self, opponent: Agent | str = "user",
                 reward: str = "guided", agent_first: bool = True,
                 delta_rewards: bool = True):
        if reward not in REWARD_KINDS:
            raise ValueError(f"reward must be one of {REWARD_KINDS}")
        self.opponent = make_agent(opponent) if isinstance(opponent, str) else opponent
        self.reward_kind = reward
        self.agent_first = agent_first
        self.delta_rewards = delta_rewards
        self.state: GameState | None = None
        self.player = 0

    def reset(self, seed: int = 0) -> np.ndarray:
        self.state = GameState(players=2, seed=seed)
        self.opponent.seed(seed + 1)
        self.player = 0 if self.agent_first else 1
        if not self.agent_first:
            self.state.apply(self.opponent.move(self.state))
        return observe(self.state, self.player)

    def _totals(self) -> tuple[int, int]:
        t = self.state.totals()
        return int(t[self.player]), int(t[1 - self.player])

    def _group_size(self) -> int:
        return int(self.state.group_size[self.player])

    def step(self, action: int) -> StepResult:
        if self.state is None or self.state.finished:
            raise EpisodeFinishedError("call reset first")
        if not 0 <= action < NUM_ACTIONS:
            raise ValueError(f"action {action} out of range")
        state = self.state
        if not state.legal_action_mask()[action]:
            reward = -SCOLDING if self.reward_kind == "guided" else 0.0
            return StepResult(observe(state, self.player), reward, False,
                              True, self._totals()[0], self._group_size())
        own0, opp0 = self._totals()
        group0 = self._group_size()
        state.apply(int(action))
        while not state.finished and state.current != self.player:
            state.apply(self.opponent.move(state))
        own1, opp1 = self._totals()
        group1 = self._group_size()
        done = state.finished
        if self.delta_rewards:
            d_score, d_group = own1 - own0, group1 - group0
        else:
            d_score, d_group = own1, group1
        if self.reward_kind == "guided":
            reward = (d_score + d_group) / 100.0
        elif self.reward_kind == "score":
            reward = d_score / 100.0
        else:
            reward = 0.0
            if done:
                out = winner(state)
                if len(out.winners) == 1:
                    reward = 1.0 if self.player in out.winners else -1.0
        return StepResult(observe(state, self.player), reward, done,
                          False, own1, group1)


def heuristic_env_reward(own_delta: int, opponent_delta: int,
                         group_delta: int) -> float:
    """Per-step reward for the weight-emitting agent variant:
    ((own - opponent score change) + group size change) / 100."""
    return ((own_delta - opponent_delta) + group_delta) / 100.0


class HeuristicActionEnv(TetrisLinkEnv):
    """Variant whose action is four numbers mapped to heuristic weights.

    The move actually played is the heuristic argmax under those
    weights; the reward is the score-difference form above.
    """

    def __init__(self, opponent: Agent | str = "user", agent_first: bool = True):
        super().__init__(opponent, "score", agent_first)
        self._rng = np.random.default_rng(0)

    def reset(self, seed: int = 0) -> np.ndarray:
        self._rng = np.random.default_rng(seed)
        return super().reset(seed)

    def step_weights(self, raw: np.ndarray) -> StepResult:
        from .heuristic import choose_move

        weights = HeuristicWeights.from_array(np.clip(raw, 0.0, 15.0))
        own0, opp0 = self._totals()
        group0 = self._group_size()
        move = choose_move(self.state, weights, self._rng)
        result = super().step(move.action)
        own1, opp1 = self._totals()
        reward = heuristic_env_reward(own1 - own0, opp1 - opp0,
                                      self._group_size() - group0)
        return StepResult(result.observation, reward, result.done,
                          False, result.score, result.group_size)


# -- wire protocol --------------------------------------------------------
#
# Line-delimited JSON.  Requests:
#   {"cmd":"reset","seed":0,"opponent":"user","reward":"guided","agentFirst":true}
#   {"cmd":"step","action":42}
#   {"cmd":"close"}
# Replies: {"ok":true,"obs":[...],"reward":r,"done":d,"info":{...}} or
# {"ok":false,"error":"..."}.  Malformed requests get an error reply and
# the connection stays up.


def _reply_for(env_box: list, line: str) -> tuple[str, bool]:
    try:
        req = json.loads(line)
        cmd = req["cmd"]
        if cmd == "close":
            return json.dumps({"ok": True}), True
        if cmd == "reset":
            env_box[0] = TetrisLinkEnv(
                opponent=req.get("opponent", "user"),
                reward=req.get("reward", "guided"),
                agent_first=bool(req.get("agentFirst", True)),
            )
            obs = env_box[0].reset(int(req.get("seed", 0)))
            return json.dumps({"ok": True, "obs": obs.tolist(),
                               "reward": 0.0, "done": False, "info": {}}), False
        if cmd == "step":
            if env_box[0] is None:
                return json.dumps({"ok": False, "error": "reset first"}), False
            action = int(req["action"])
            if not 0 <= action < NUM_ACTIONS:
                return json.dumps({"ok": False, "error": "action out of range"}), False
            r = env_box[0].step(action)
            return json.dumps({
                "ok": True, "obs": r.observation.tolist(), "reward": r.reward,
                "done": r.done,
                "info": {"illegalAttempt": r.illegal_attempt,
                         "score": r.score, "groupSize": r.group_size},
            }), False
        return json.dumps({"ok": False, "error": f"unknown cmd {cmd!r}"}), False
    except EpisodeFinishedError:
        return json.dumps({"ok": False, "error": "episode finished"}), False
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
        return json.dumps({"ok": False, "error": f"bad request: {e}"}), False


def serve(infile=None, outfile=None) -> None:
    """Serve one environment over line-JSON until close/EOF."""
    infile = infile or sys.stdin
    outfile = outfile or sys.stdout
    env_box: list = [None]
    for line in infile:
        line = line.strip()
        if not line:
            continue
        reply, should_close = _reply_for(env_box, line)
        outfile.write(reply + "\n")
        outfile.flush()
        if should_close:
            break
