"""Find heuristic weights that beat the stock user profile.

Random search with successive halving: sample candidates, give each a
few matches against the user profile, keep the better half with twice
the matches, repeat.  The winner is then validated on fresh matches.

Run:  python demos/tune_weights.py [budget]
"""

import sys

import numpy as np

from tetrislink.agents import HeuristicAgent, play_match
from tetrislink.heuristic import USER_WEIGHTS, tune_weights


def main():
    budget = int(sys.argv[1]) if len(sys.argv) > 1 else 120
    rng = np.random.default_rng(3)

    print(f"tuning against the user profile, budget {budget} evaluations...")
    weights = tune_weights(USER_WEIGHTS, budget, games_per_eval=8, rng=rng)
    print("best candidate:", weights.as_dict())

    results = [
        play_match(HeuristicAgent(weights, "cand"),
                   HeuristicAgent(USER_WEIGHTS, "user"),
                   seed=9000 + g, a_first=g % 2 == 0)
        for g in range(60)
    ]
    print(f"holdout win rate over {len(results)} fresh matches: "
          f"{np.mean(results):.3f}")


if __name__ == "__main__":
    main()
