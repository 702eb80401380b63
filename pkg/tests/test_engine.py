"""Rules engine: templates, move generation, scoring, logs."""

import json

import numpy as np
import pytest

from tetrislink.engine import (
    CorruptLogError,
    GameState,
    IllegalMoveError,
    Move,
    NoRoomError,
    NotFinishedError,
    OutOfBoundsError,
    capacity_check,
    count_holes,
    drop_row,
    log_to_json,
    outcome_vector,
    piece_component_sizes,
    replay_log,
    score,
    to_log_dict,
    tracked_score,
    winner,
)
from tetrislink.shapes import (
    BOARD_HEIGHT,
    BOARD_WIDTH,
    NUM_ACTIONS,
    SHAPE_NAMES,
    TEMPLATES,
    templates,
)

from conftest import (
    oracle_legal_moves,
    oracle_rest_row,
    play_random_game,
    random_reachable_state,
    scripted_state,
    template_by_shape,
)

I_H = template_by_shape("I", 0)   # horizontal bar
I_V = template_by_shape("I", 1)   # vertical bar
O_SQ = template_by_shape("O", 0)
S_0 = template_by_shape("S", 0)


class TestTemplates:
    def test_nineteen_templates(self):
        assert len(templates()) == 19

    def test_orientation_counts_per_shape(self):
        counts = {name: 0 for name in SHAPE_NAMES}
        for t in TEMPLATES:
            counts[t.shape_name] += 1
        assert counts == {"I": 2, "O": 1, "T": 4, "S": 4, "L": 8}

    def test_templates_distinct_and_four_cells(self):
        cell_sets = {t.cells for t in TEMPLATES}
        assert len(cell_sets) == 19
        for t in TEMPLATES:
            assert len(t.cells) == 4
            assert min(c for c, _ in t.cells) == 0
            assert min(r for _, r in t.cells) == 0
            assert t.width == max(c for c, _ in t.cells) + 1

    def test_ids_are_stable_positions(self):
        for i, t in enumerate(TEMPLATES):
            assert t.id == i


class TestMoveGeneration:
    def test_empty_board_has_162_moves(self):
        state = GameState()
        assert len(state.legal_actions()) == 162

    def test_empty_board_matches_width_sum(self):
        # 190 slots minus the out-of-bounds columns of each template
        expected = sum(BOARD_WIDTH - t.width + 1 for t in TEMPLATES)
        assert expected == 162
        assert len(GameState().legal_actions()) == expected

    def test_oracle_equivalence_on_random_states(self, rng):
        for _ in range(150):
            state = random_reachable_state(rng)
            if state.finished:
                continue
            engine_moves = set(state.legal_moves())
            assert engine_moves == oracle_legal_moves(state)

    def test_mask_and_list_agree(self, rng):
        for _ in range(50):
            state = random_reachable_state(rng)
            if state.finished:
                continue
            mask = state.legal_action_mask()
            assert sorted(np.flatnonzero(mask)) == sorted(state.legal_actions())

    def test_inventory_limits_moves(self):
        state = GameState()
        state.inventory[0, :] = 0
        state.inventory[0, 1] = 1  # only O pieces left
        moves = state.legal_moves()
        assert all(TEMPLATES[m.template].shape_name == "O" for m in moves)
        assert len(moves) == BOARD_WIDTH - 2 + 1

    def test_drop_row_matches_oracle(self, rng):
        for _ in range(40):
            state = random_reachable_state(rng)
            for t in TEMPLATES:
                for c in range(BOARD_WIDTH - t.width + 1):
                    expected = oracle_rest_row(state.grid, t.id, c)
                    if expected is None:
                        with pytest.raises(NoRoomError):
                            drop_row(state, t.id, c)
                    else:
                        assert drop_row(state, t.id, c) == expected

    def test_drop_row_out_of_bounds(self):
        state = GameState()
        with pytest.raises(OutOfBoundsError):
            drop_row(state, I_H, 7)  # width-4 piece at column 7
        with pytest.raises(OutOfBoundsError):
            drop_row(state, O_SQ, -1)

    def test_illegal_apply_raises_and_leaves_state(self):
        state = GameState()
        before = state.grid.copy()
        state.inventory[0, :] = 0
        with pytest.raises(IllegalMoveError):
            state.apply(Move(0, 0))
        assert (state.grid == before).all()


class TestApply:
    def test_pieces_land_and_inventory_decrements(self):
        state = GameState()
        out = state.apply(Move(O_SQ, 3))
        assert out.rest_row == 0
        assert (state.grid == 0).sum() == 4
        assert state.inventory[0, TEMPLATES[O_SQ].shape] == 4
        assert state.current == 1

    def test_piece_ids_distinct(self):
        state = scripted_state([(0, O_SQ, 0), (1, O_SQ, 2), (0, O_SQ, 4)])
        ids = set(state.piece_grid[state.piece_grid >= 0].tolist())
        assert len(ids) == 3

    def test_cell_conservation(self, rng):
        state = play_random_game(99)
        placed = sum(1 for _, a in state.history if a is not None)
        assert (state.grid >= 0).sum() == 4 * placed

    def test_turn_order_round_robin(self):
        for players in (2, 3, 4):
            state = GameState(players=players)
            for i in range(players * 2):
                assert state.current == i % players
                state.apply(state.legal_moves()[0])


class TestHoles:
    def test_no_holes_on_flat_drop(self):
        state = GameState()
        out = state.apply(Move(I_H, 0))
        assert out.new_holes == 0 and out.penalty == 0
        assert count_holes(state.grid) == 0

    def test_single_covered_cell_costs_one(self):
        state = GameState()
        out = state.apply(Move(S_0, 0))  # S leaves one cell under its overhang
        assert out.new_holes == 1 and out.penalty == 1
        assert count_holes(state.grid) == 1
        assert int(state.totals()[0]) == -1

    def test_many_covered_cells_capped_at_two(self):
        state = scripted_state([(0, I_V, 0), (1, I_V, 9)])
        out = state.apply(Move(I_H, 0))  # bridges over three empty columns
        assert out.new_holes == 12
        assert out.penalty == 2
        assert int(state.penalties[0]) == 2

    def test_outcome_matches_scratch_hole_count(self, rng):
        state = GameState(seed=5)
        game_rng = np.random.default_rng(5)
        while not state.finished:
            before = count_holes(state.grid)
            actions = state.legal_actions()
            out = state.apply(int(actions[game_rng.integers(len(actions))]))
            assert count_holes(state.grid) - before == out.new_holes


class TestScoring:
    def test_three_piece_chain_scores_three(self):
        state = scripted_state([
            (0, O_SQ, 0), (1, O_SQ, 6),
            (0, O_SQ, 2), (1, O_SQ, 8),
            (0, O_SQ, 4),
        ])
        assert score(state, 0).total == 3
        assert score(state, 1).total == 0  # two touching pieces stay below 3

    def test_piece_touching_only_opponent_scores_zero(self):
        state = scripted_state([
            (0, O_SQ, 0), (1, O_SQ, 0),  # player 1 lands on player 0's piece
        ])
        assert score(state, 1).total == 0
        assert piece_component_sizes(state, 1) == [1]

    def test_group_value_counts_pieces_not_cells(self):
        # three pieces = 3 points even though they cover 12 cells
        state = scripted_state([
            (0, I_H, 0), (1, O_SQ, 6),
            (0, I_H, 0), (1, O_SQ, 8),
            (0, I_H, 0),
        ])
        assert score(state, 0).group_points == 3

    def test_scratch_and_tracked_scores_agree(self, rng):
        for seed in range(8):
            state = GameState(seed=seed)
            game_rng = np.random.default_rng(seed)
            while not state.finished:
                actions = state.legal_actions()
                state.apply(int(actions[game_rng.integers(len(actions))]))
                for p in range(state.players):
                    assert score(state, p) == tracked_score(state, p)

    def test_totals_are_group_minus_penalty(self, rng):
        state = random_reachable_state(rng)
        for p in range(state.players):
            b = tracked_score(state, p)
            assert int(state.totals()[p]) == b.group_points - b.minus_points


class TestGameEnd:
    def test_finished_game_has_no_legal_moves(self):
        state = play_random_game(3)
        assert state.finished
        for p in range(state.players):
            assert not state.has_legal(p)

    def test_final_pass_round_recorded(self):
        state = play_random_game(11)
        tail = state.history[-state.players:]
        assert all(a is None for _, a in tail)
        assert state.length == len(state.history)

    def test_skips_preserve_seat_rotation(self):
        state = play_random_game(17, players=3)
        seats = [p for p, _ in state.history]
        assert seats == [i % 3 for i in range(len(seats))]

    def test_winner_and_outcome_vector(self):
        state = play_random_game(7)
        out = winner(state)
        totals = state.totals()
        assert set(out.winners) == set(np.flatnonzero(totals == totals.max()))
        vec = outcome_vector(state)
        assert vec.sum() == pytest.approx(1.0 if not out.draw else
                                          0.5 * len(out.winners))

    def test_winner_requires_finished(self):
        with pytest.raises(NotFinishedError):
            winner(GameState())

    def test_capacity_never_fills_board_for_two(self):
        assert capacity_check(2) == 200  # exactly the board size
        assert capacity_check(4) == 400

    def test_apply_after_finish_raises(self):
        state = play_random_game(3)
        with pytest.raises(IllegalMoveError):
            state.apply(Move(0, 0))


class TestCopy:
    def test_copy_is_independent(self):
        state = GameState()
        clone = state.copy()
        clone.apply(Move(O_SQ, 0))
        assert (state.grid == -1).all()
        assert state.current == 0 and clone.current == 1


class TestLogs:
    def test_round_trip_reproduces_board_and_scores(self):
        for seed in range(20):
            state = play_random_game(seed)
            replayed = replay_log(log_to_json(state))
            assert (replayed.grid == state.grid).all()
            assert (replayed.totals() == state.totals()).all()
            assert replayed.history == state.history

    def test_serialization_is_canonical(self):
        state = play_random_game(1)
        text = log_to_json(state)
        assert log_to_json(replay_log(text)) == text

    def test_log_shape(self):
        state = play_random_game(2)
        log = to_log_dict(state)
        assert set(log) == {"version", "playerCount", "seed", "moves",
                            "finalScores"}
        assert len(log["moves"]) == state.length

    def test_corrupt_wrong_player_rejected(self):
        log = to_log_dict(play_random_game(4))
        log["moves"][1]["player"] = log["moves"][0]["player"]
        with pytest.raises(CorruptLogError):
            replay_log(log)

    def test_corrupt_scores_rejected(self):
        log = to_log_dict(play_random_game(4))
        log["finalScores"][0] += 1
        with pytest.raises(CorruptLogError):
            replay_log(log)

    def test_corrupt_illegal_move_rejected(self):
        log = to_log_dict(play_random_game(4))
        log["moves"][0]["column"] = 9
        log["moves"][0]["templateId"] = I_H  # width 4 cannot sit at column 9
        with pytest.raises(CorruptLogError):
            replay_log(log)

    def test_garbage_json_rejected(self):
        with pytest.raises(CorruptLogError):
            replay_log("{not json")
        with pytest.raises(CorruptLogError):
            replay_log(json.dumps({"playerCount": 2}))
