"""One guided-reward episode in the masked-action RL environment.

The agent here is just "first legal action", enough to show the moving
parts: the 602-float observation, the 190-bit legal mask, per-step
guided rewards that telescope to (score + group size)/100, and the
scolding a masked-out action earns.

Run:  python demos/rl_episode.py
"""

import numpy as np

from tetrislink.rl_env import TetrisLinkEnv


def main():
    env = TetrisLinkEnv(opponent="user", reward="guided")
    obs = env.reset(seed=11)
    print(f"observation length {len(obs)}, "
          f"legal actions {int(obs[412:].sum())}")

    total = 0.0
    step = 0
    while True:
        mask = obs[412:]
        action = int(np.flatnonzero(mask)[0])
        result = env.step(action)
        total += result.reward
        step += 1
        print(f"step {step:2d}: action {action:3d}  reward {result.reward:+.3f}"
              f"  score {result.score:3d}  group {result.group_size:2d}")
        if result.done:
            break
        obs = result.observation

    print(f"\nepisode reward {total:+.3f} "
          f"= (score {result.score} + group {result.group_size}) / 100")

    # a masked-out action costs a scolding and changes nothing
    obs = env.reset(seed=12)
    illegal = int(np.flatnonzero(obs[412:] == 0)[0])
    print(f"\nattempting masked action {illegal}: "
          f"reward {env.step(illegal).reward:+.2f} (board unchanged)")


if __name__ == "__main__":
    main()
