"""Fixed-budget tree search hits a branching-factor cliff on Hex.

The same 1,000-iteration search that crushes a shortest-path opponent
on tiny boards stops winning as the board (and with it the branching
factor) grows — the budget per candidate move collapses.  Tetris Link's
162-wide action space lives on the wrong side of that cliff.

Run:  python demos/hex_branching_cliff.py
"""

import numpy as np

from tetrislink.hexgame import hex_sweep, sweep_table
from tetrislink.mcts import SearchConfig


def main():
    cfg = SearchConfig(variant="uct", iterations=1000)
    rows = hex_sweep([2, 3, 5, 7, 11], matches_per_size=10,
                     mcts_config=cfg, rng=np.random.default_rng(5))
    print(sweep_table(rows))
    print("win rate falls as the board grows: more legal moves, "
          "same simulation budget.")


if __name__ == "__main__":
    main()
