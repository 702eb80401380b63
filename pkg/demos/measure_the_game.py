"""How big is this game?  Branching factor, game length and state space.

Every one of the first six turns offers all 162 placements; after that
the board fills and the count decays.  Mean length times mean branching
gives the usual back-of-envelope state-space estimate.

Run:  python demos/measure_the_game.py
"""

import numpy as np

from tetrislink.agents import RandomAgent, make_agent
from tetrislink.analysis import branching_profile, state_space_estimate

N_GAMES = 200


def main():
    rng = np.random.default_rng(0)

    print(f"random self-play, {N_GAMES} games:")
    profile = branching_profile(RandomAgent(), N_GAMES, rng)
    print("turn  mean moves  stddev")
    for turn, mean, std, _ in profile.rows()[:12]:
        print(f"{turn:4d}  {mean:10.1f}  {std:6.1f}")
    print(f"...   mean game length {profile.mean_length:.1f} turns")

    user = branching_profile(make_agent("user"), 50, rng)
    print(f"\nuser-heuristic self-play: mean length {user.mean_length:.1f} "
          "turns (careful players keep the board open longer)")

    est = state_space_estimate(37, 74)
    print(f"\nstate space ~ 74^37 = {est.value:.2e} "
          f"(vs 37^74 = {est.turns_pow_actions:.2e})")


if __name__ == "__main__":
    main()
