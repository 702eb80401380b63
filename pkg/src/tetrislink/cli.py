"""Command-line entry points for simulations, experiments and servers."""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import engine
from .agents import make_agent, play_game
from .analysis import branching_profile, first_move_advantage, state_space_estimate
from .engine import GameState
from .heuristic import USER_WEIGHTS, load_weights, save_weights, tune_weights


def _write_out(out: str | None, text: str) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@click.group()
def main():
    """Tetris Link engine, agents and experiment harness."""


@main.command()
@click.option("--agent", default="random", help="agent spec, e.g. user or mcts:think=100")
@click.option("--games", default=10, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--players", default=2, type=int)
@click.option("--out", default=None, help="output file (one JSON log per line)")
def simulate(agent, games, seed, players, out):
    """Self-play batches; emits replayable game logs."""
    rng = np.random.default_rng(seed)
    lines = []
    for g in range(games):
        agents = [make_agent(agent, rng) for _ in range(players)]
        state = play_game(agents, seed=seed + g)
        lines.append(engine.log_to_json(state))
    _write_out(out, "\n".join(lines) + "\n")


@main.command()
@click.option("--agent", default="random")
@click.option("--games", default=1000, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None)
def branching(agent, games, seed, out):
    """Per-turn branching-factor profile over self-play games."""
    rng = np.random.default_rng(seed)
    profile = branching_profile(make_agent(agent, rng), games, rng)
    lines = ["turn\tmeanMoves\tstddev\tsamples"]
    for turn, mean, std, samples in profile.rows():
        lines.append(f"{turn}\t{mean:.2f}\t{std:.2f}\t{samples}")
    lines.append(f"# mean game length: {profile.mean_length:.2f}")
    _write_out(out, "\n".join(lines) + "\n")


@main.command("first-move")
@click.option("--agent", default="random-heuristic")
@click.option("--games", default=1000, type=int)
@click.option("--prefix", default=0, type=int, help="prefix length, 0 = whole game")
@click.option("--seed", default=0, type=int)
def first_move(agent, games, prefix, seed):
    """First-player win rate and opening uniqueness."""
    rng = np.random.default_rng(seed)
    report = first_move_advantage(
        lambda: make_agent(agent), games, prefix or None, rng
    )
    click.echo(f"games\t{report.n_games}")
    click.echo(f"firstPlayerWinRate\t{report.first_player_win_rate:.4f}")
    click.echo(f"uniquePrefixes\t{report.unique_prefix_count}")
    est = state_space_estimate(37, 74)
    click.echo(f"stateSpace(74^37)\t{est.actions_pow_turns:.3e}")


@main.command()
@click.option("--budget", default=240, type=int, help="candidate evaluations")
@click.option("--games-per-eval", default=8, type=int)
@click.option("--opponent", default=None, help="weights file; default user profile")
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None, help="weights file to write")
def tune(budget, games_per_eval, opponent, seed, out):
    """Random-search weight tuning against a fixed opponent profile."""
    opp = load_weights(opponent) if opponent else USER_WEIGHTS
    weights = tune_weights(opp, budget, games_per_eval, np.random.default_rng(seed))
    if out:
        save_weights(out, weights, name="tuned")
    click.echo(json.dumps(weights.as_dict()))


@main.command()
@click.option("--agent", "agents_", multiple=True,
              help="repeatable; default: user, tuned, random")
@click.option("--games-per-pair", default=10, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None)
def tournament(agents_, games_per_pair, seed, out):
    """Round-robin tournament with BBT skill ratings."""
    from .rating import run_tournament

    specs = list(agents_) or ["user", "tuned", "random"]
    rng = np.random.default_rng(seed)
    agents = [make_agent(s, rng) for s in specs]
    report = run_tournament(agents, games_per_pair, rng=rng)
    _write_out(out, report.table())


@main.command("hex-sweep")
@click.option("--sizes", default="2,3,4,5,7,9,11")
@click.option("--games", default=20, type=int)
@click.option("--iters", default=1000, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--out", default=None)
def hex_sweep_cmd(sizes, games, iters, seed, out):
    """MCTS vs shortest-path heuristic across Hex board sizes."""
    from .hexgame import hex_sweep, sweep_table
    from .mcts import SearchConfig

    size_list = [int(s) for s in sizes.split(",")]
    cfg = SearchConfig(variant="uct", iterations=iters)
    rows = hex_sweep(size_list, games, cfg, np.random.default_rng(seed))
    _write_out(out, sweep_table(rows))


@main.command("env-serve")
def env_serve():
    """RL environment over line-JSON on stdin/stdout."""
    from .rl_env import serve

    serve()


@main.command()
@click.option("--port", default=None, type=int, help="overrides PORT env var")
@click.option("--log-dir", default=None, help="overrides LOG_DIR env var")
def serve(port, log_dir):
    """Game server for live matches (HTTP + websocket)."""
    from .server import run_server

    run_server(port=port, log_dir=log_dir)


@main.command()
@click.option("--engine", "engine_only", is_flag=True, help="engine benchmark only")
@click.option("--think-ms", default=100, type=int)
@click.option("--threads", default=1, type=int)
@click.option("--variant", default="uct", type=click.Choice(["uct", "rave", "poolrave"]))
@click.option("--beta", default=250.0, type=float)
@click.option("--seed", default=0, type=int)
def bench(engine_only, think_ms, threads, variant, beta, seed):
    """Engine and search throughput measurements."""
    # engine: full games of the lowest-index legal move
    n_games = 200
    # warm the compiled kernels before timing
    _first_legal_game(0)
    t0 = time.perf_counter()
    for g in range(n_games):
        _first_legal_game(seed + g)
    per_game = (time.perf_counter() - t0) / n_games
    click.echo(f"engine\tfirst-legal game\t{per_game * 1e6:.0f} us/game")
    if engine_only:
        if per_game >= 0.005:
            sys.exit(1)
        return
    from .mcts import MCTS, SearchConfig, TetrisLinkGame

    cfg = SearchConfig(variant=variant, beta=beta, threads=threads,
                       think_time=think_ms / 1000.0, iterations=None)
    searcher = MCTS(TetrisLinkGame(), cfg, np.random.default_rng(seed))
    searcher.search(GameState(players=2, seed=seed))
    stats = searcher.last_stats
    click.echo(f"mcts\t{variant} x{threads} threads\t{stats.per_second:.0f} sims/s")
    click.echo(stats.report(), nl=False)


def _first_legal_game(seed: int) -> GameState:
    state = GameState(players=2, seed=seed)
    while not state.finished:
        state.apply(int(state.legal_actions()[0]))
    return state


if __name__ == "__main__":
    main()
