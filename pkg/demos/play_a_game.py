"""Play one match between the tuned and the user heuristic and print it.

Run:  python demos/play_a_game.py [seed]
"""

import sys

from tetrislink import GameState, make_agent, winner

SYMBOLS = {-1: ".", 0: "A", 1: "B", 2: "C", 3: "D"}


def render(state: GameState) -> str:
    rows = []
    for r in range(19, -1, -1):  # top of the board first
        rows.append("".join(SYMBOLS[int(v)] for v in state.grid[r]))
    rows.append("-" * 10)
    return "\n".join(rows)


def main():
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    agents = [make_agent("tuned"), make_agent("user")]
    for i, agent in enumerate(agents):
        agent.seed(seed * 2 + i)

    state = GameState(players=2, seed=seed)
    while not state.finished:
        move = agents[state.current].move(state)
        print(f"turn {state.length + 1}: {agents[state.current].name} "
              f"plays template {move.template} in column {move.column}")
        state.apply(move)

    print()
    print(render(state))
    out = winner(state)
    print(f"\nfinal scores: {list(out.totals)}  (A = tuned, B = user)")
    print("draw" if out.draw else f"winner: {agents[out.winners[0]].name}")


if __name__ == "__main__":
    main()
