"""Seed a tree search with statistics from logged games.

100 user-heuristic self-play games are replayed into the search tree:
every position along a logged line of play gets all-moves-as-first
statistics valued by that seat's final result.  The agent builds this
tree once per game and keeps reusing the subtree the match actually
reaches.  Compare a plain search and a seeded one against the user
heuristic at the same 100 ms budget.

Run:  python demos/search_with_memories.py [matches_per_arm]
"""

import sys

from tetrislink.agents import HeuristicAgent, play_game
from tetrislink.engine import to_log_dict
from tetrislink.heuristic import USER_WEIGHTS
from tetrislink.mcts import MCTSAgent, SearchConfig, TetrisLinkGame, prepare_logs


def selfplay_logs(n):
    logs = []
    for g in range(n):
        a = HeuristicAgent(USER_WEIGHTS, "a")
        b = HeuristicAgent(USER_WEIGHTS, "b")
        a.seed(g * 2), b.seed(g * 2 + 1)
        logs.append(to_log_dict(play_game([a, b], seed=g)))
    return logs


def arm(factory, n, base_seed):
    wins = 0.0
    for g in range(n):
        searcher, user = factory(), HeuristicAgent(USER_WEIGHTS, "user")
        seats = [searcher, user] if g % 2 == 0 else [user, searcher]
        for i, agent in enumerate(seats):
            agent.seed(base_seed + g * 2 + i)
        state = play_game(seats, seed=base_seed + g)
        totals = state.totals()
        mine = 0 if g % 2 == 0 else 1
        wins += (1.0 if totals[mine] > totals[1 - mine]
                 else 0.5 if totals[mine] == totals[1 - mine] else 0.0)
    return wins / n


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 10
    print("collecting 100 user-heuristic self-play logs...")
    prepared = prepare_logs(selfplay_logs(100))
    game = TetrisLinkGame(shaping=1.0)

    plain = arm(lambda: MCTSAgent(
        SearchConfig(variant="uct", cp=0.1, think_time=0.1, iterations=None),
        "plain", game=game), n, 500)
    print(f"plain search vs user heuristic:  {plain:.2f}")

    seeded = arm(lambda: MCTSAgent(
        SearchConfig(variant="rave", cp=0.1, beta=250.0, think_time=0.1,
                     iterations=None),
        "seeded", game=game, prefill_logs=prepared), n, 500)
    print(f"seeded search vs user heuristic: {seeded:.2f}")


if __name__ == "__main__":
    main()
