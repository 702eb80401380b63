"""Bayesian Bradley-Terry skill ratings and a round-robin tournament runner.

Ratings live on an Elo-like scale: prior mean 1500, prior deviation 500,
performance deviation 250, so any realistic tournament lands inside
(0, 3000).  The update is the two-player Bradley-Terry rule over
Gaussian skill beliefs: means move proportionally to (result - expected)
and deviations shrink with the information gained, floored by kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .agents import Agent, play_match


@dataclass(frozen=True)
class BBTConfig:
    mu0: float = 1500.0
    sigma0: float = 500.0
    beta: float = 250.0
    kappa: float = 0.0001


@dataclass(frozen=True)
class Rating:
    mu: float
    sigma: float


def initial_rating(cfg: BBTConfig = BBTConfig()) -> Rating:
    return Rating(cfg.mu0, cfg.sigma0)


def expected_result(a: Rating, b: Rating, cfg: BBTConfig = BBTConfig()) -> float:
    """P(A beats B) under the pairwise logistic model."""
    c = math.sqrt(a.sigma**2 + b.sigma**2 + 2 * cfg.beta**2)
    ea = math.exp(a.mu / c)
    eb = math.exp(b.mu / c)
    return ea / (ea + eb)


def bbt_update(a: Rating, b: Rating, result_a: float,
               cfg: BBTConfig = BBTConfig()) -> tuple[Rating, Rating]:
    """One match update; result_a is A's score: win 1, draw 0.5, loss 0."""
    if result_a not in (0.0, 0.5, 1.0):
        raise ValueError("result must be 0, 0.5 or 1")
    c = math.sqrt(a.sigma**2 + b.sigma**2 + 2 * cfg.beta**2)
    pa = expected_result(a, b, cfg)
    pb = 1.0 - pa
    mu_a = a.mu + (a.sigma**2 / c) * (result_a - pa)
    mu_b = b.mu + (b.sigma**2 / c) * ((1.0 - result_a) - pb)
    shrink_a = max(1.0 - (a.sigma**2 / c**2) * pa * pb, cfg.kappa)
    shrink_b = max(1.0 - (b.sigma**2 / c**2) * pa * pb, cfg.kappa)
    return (
        Rating(mu_a, math.sqrt(a.sigma**2 * shrink_a)),
        Rating(mu_b, math.sqrt(b.sigma**2 * shrink_b)),
    )


@dataclass
class PairRecord:
    agent_a: str
    agent_b: str
    wins_a: int = 0
    draws: int = 0
    wins_b: int = 0

    @property
    def games(self) -> int:
        return self.wins_a + self.draws + self.wins_b


@dataclass
class TournamentReport:
    ratings: dict[str, Rating]
    pairs: list[PairRecord]
    scores: dict[str, list[int]] = field(default_factory=dict)

    @property
    def total_games(self) -> int:
        return sum(p.games for p in self.pairs)

    def score_summary(self) -> dict[str, tuple[int, float, int]]:
        return {
            name: (min(s), float(np.mean(s)), max(s))
            for name, s in self.scores.items() if s
        }

    def table(self) -> str:
        lines = ["agentA\tagentB\twinsA\tdraws\twinsB"]
        for p in self.pairs:
            lines.append(f"{p.agent_a}\t{p.agent_b}\t{p.wins_a}\t{p.draws}\t{p.wins_b}")
        lines.append("")
        lines.append("agent\tmu\tsigma\tminScore\tmeanScore\tmaxScore")
        summary = self.score_summary()
        for name, r in sorted(self.ratings.items(), key=lambda kv: -kv[1].mu):
            lo, mean, hi = summary.get(name, (0, 0.0, 0))
            lines.append(f"{name}\t{r.mu:.1f}\t{r.sigma:.1f}\t{lo}\t{mean:.2f}\t{hi}")
        return "\n".join(lines) + "\n"


def run_tournament(agents: list[Agent], games_per_pair: int,
                   cfg: BBTConfig = BBTConfig(),
                   rng: np.random.Generator | None = None) -> TournamentReport:
    """Round robin: every pair plays games_per_pair matches, first mover
    alternating; ratings update after each match in schedule order."""
    if len(agents) < 2:
        raise ValueError("need at least two agents")
    rng = rng or np.random.default_rng(0)
    names = [a.name for a in agents]
    if len(set(names)) != len(names):
        raise ValueError("agent names must be unique")
    ratings = {n: initial_rating(cfg) for n in names}
    scores: dict[str, list[int]] = {n: [] for n in names}
    pairs = []
    for i in range(len(agents)):
        for j in range(i + 1, len(agents)):
            rec = PairRecord(names[i], names[j])
            for g in range(games_per_pair):
                seed = int(rng.integers(2**31))
                a_first = g % 2 == 0
                result, totals = _match_with_scores(
                    agents[i], agents[j], seed, a_first
                )
                if result == 1.0:
                    rec.wins_a += 1
                elif result == 0.0:
                    rec.wins_b += 1
                else:
                    rec.draws += 1
                scores[names[i]].append(totals[0])
                scores[names[j]].append(totals[1])
                ratings[names[i]], ratings[names[j]] = bbt_update(
                    ratings[names[i]], ratings[names[j]], result, cfg
                )
            pairs.append(rec)
    return TournamentReport(ratings, pairs, scores)


def _match_with_scores(agent_a: Agent, agent_b: Agent, seed: int,
                       a_first: bool) -> tuple[float, tuple[int, int]]:
    from .agents import play_game

    seats = [agent_a, agent_b] if a_first else [agent_b, agent_a]
    for i, agent in enumerate(seats):
        agent.seed(seed * 2 + i)
    state = play_game(seats, seed=seed)
    totals = state.totals()
    a_slot = 0 if a_first else 1
    ta, tb = int(totals[a_slot]), int(totals[1 - a_slot])
    result = 1.0 if ta > tb else 0.0 if ta < tb else 0.5
    return result, (ta, tb)
