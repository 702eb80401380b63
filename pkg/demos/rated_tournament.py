"""Round-robin tournament with online Bayesian skill ratings.

Every pair plays alternating-first matches; ratings update after each
match, so the final table reflects both who beat whom and how certain
the model is (sigma shrinks with every game played).

Run:  python demos/rated_tournament.py
"""

import numpy as np

from tetrislink.agents import make_agent
from tetrislink.mcts import MCTSAgent, SearchConfig
from tetrislink.rating import run_tournament


def main():
    roster = [
        make_agent("tuned"),
        make_agent("user"),
        make_agent("random-heuristic"),
        MCTSAgent(SearchConfig(variant="uct", think_time=0.05,
                               iterations=None), name="mcts-50ms"),
        make_agent("random"),
    ]
    report = run_tournament(roster, games_per_pair=6,
                            rng=np.random.default_rng(4))
    print(report.table())


if __name__ == "__main__":
    main()
