"""Per-game rules checks against hand-computed positions and small oracles."""
import random
from functools import reduce
from operator import xor

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boardlab.core import IllegalAction, zeros
from boardlab.games import (
    LOSING,
    Winning,
    available_games,
    connect4_winner,
    get_game,
    hex_winner,
    nim_optimal_action,
    shift_merge_2048,
)
from boardlab.games.nim import BoutonAgent


def state_with(game, cells, to_move=0, move_count=None):
    from boardlab.core import GameState

    if move_count is None:
        move_count = sum(1 for v in cells if v != 0)
    return GameState(game, tuple(cells), to_move, move_count, zeros(game.players))


def test_registry_rejects_unknown():
    with pytest.raises(ValueError):
        get_game("chess")
    assert isinstance(available_games(), list)


# ------------------------------------------------------------- tictactoe


def test_ttt_row_win():
    game = get_game("tictactoe")
    s = state_with(game, [1, 1, 1, 2, 2, 0, 0, 0, 0], to_move=1)
    st_ = game.status(s)
    assert st_.terminal and st_.scores == (1.0, -1.0)


def test_ttt_draw():
    game = get_game("tictactoe")
    s = state_with(game, [1, 2, 1, 1, 2, 2, 2, 1, 1], to_move=1)
    st_ = game.status(s)
    assert st_.terminal and st_.scores == (0.0, 0.0)


def test_ttt_full_playout_alternation():
    game = get_game("tictactoe")
    rng = random.Random(0)
    s = game.initial_state()
    while not game.status(s).terminal:
        mover = s.to_move
        s = game.apply_action(s, rng.choice(game.legal_actions(s)))
        assert s.to_move == 1 - mover


def test_ttt_has_eight_symmetries():
    assert len(get_game("tictactoe").symmetries()) == 8


# ------------------------------------------------------------------ nim


def test_nim_bouton_oracle_matches_brute_force():
    """XOR theory vs exhaustive game-tree search on all positions <= [5,5,5]."""
    game = get_game("nim-5,5,5")

    def mover_wins(heaps):
        if all(h == 0 for h in heaps):
            return False  # previous player took the last object and won
        for i, h in enumerate(heaps):
            for take in range(1, h + 1):
                nxt = list(heaps)
                nxt[i] -= take
                if not mover_wins(tuple(nxt)):
                    return True
        return False

    from functools import lru_cache

    mover_wins = lru_cache(maxsize=None)(mover_wins)
    for a in range(6):
        for b in range(6):
            for c in range(6):
                heaps = (a, b, c)
                if heaps == (0, 0, 0):
                    continue
                s = state_with(game, heaps)
                oracle = nim_optimal_action(s)
                assert (oracle is not LOSING) == mover_wins(heaps), heaps
                assert mover_wins(heaps) == (reduce(xor, heaps) != 0)


def test_nim_winning_move_restores_zero_xor():
    game = get_game("nim-3,4,5")
    s = game.initial_state()
    result = nim_optimal_action(s)
    assert isinstance(result, Winning)
    nxt = game.apply_action(s, result.action)
    assert reduce(xor, nxt.cells) == 0


def test_nim_last_take_wins():
    game = get_game("nim-1,1,2")
    s = state_with(game, (0, 0, 2), to_move=1)
    a = game.encode_action(2, 2)
    nxt = game.apply_action(s, a)
    st_ = game.status(nxt)
    assert st_.terminal and st_.scores == (-1.0, 1.0)


def test_bouton_agent_is_perfect_from_winning_position():
    game = get_game("nim-3,4,5")
    agent = BoutonAgent()
    rng = random.Random(1)
    for _ in range(20):
        s = game.initial_state()
        mover = 0
        while not game.status(s).terminal:
            if s.to_move == 0:
                a, _ = agent.choose_action(s, rng)
            else:
                a = rng.choice(game.legal_actions(s))
            s = game.apply_action(s, a)
        assert game.status(s).scores[0] == 1.0  # XOR != 0 at start: seat 0 wins


# ------------------------------------------------------------------ hex


def test_hex_no_draw_on_full_board():
    game = get_game("hex-5")
    rng = random.Random(2)
    for _ in range(30):
        s = game.initial_state()
        while not game.status(s).terminal:
            s = game.apply_action(s, rng.choice(game.legal_actions(s)))
        scores = game.status(s).scores
        assert scores in ((1.0, -1.0), (-1.0, 1.0))


def test_hex_vertical_chain_wins_for_black():
    game = get_game("hex-3")
    # black stones down column 0: cells 0, 3, 6
    cells = [0] * 9
    for i in (0, 3, 6):
        cells[i] = 1
    assert hex_winner(cells, 3) == 0


def test_hex_bent_chain_uses_diagonal_adjacency():
    game = get_game("hex-3")
    # (r,c): (0,1) -> (1,1) -> (2,0); (1,1) and (2,0) touch via the SW offset
    cells = [0] * 9
    for i in (1, 4, 6):
        cells[i] = 1
    assert hex_winner(cells, 3) == 0


def test_hex_white_connects_left_right():
    cells = [0] * 9
    for i in (3, 4, 5):
        cells[i] = 2
    assert hex_winner(cells, 3) == 1


def test_hex_winner_none_when_open():
    assert hex_winner([0] * 9, 3) is None


def test_hex_size_bounds():
    with pytest.raises(ValueError):
        get_game("hex-1")
    with pytest.raises(ValueError):
        get_game("hex-12")


# ------------------------------------------------------------- connect4


def test_c4_vertical_win():
    game = get_game("connect4")
    s = game.initial_state()
    for col in (3, 4, 3, 4, 3, 4):
        s = game.apply_action(s, col)
    s = game.apply_action(s, 3)  # player 0 completes the column
    st_ = game.status(s)
    assert st_.terminal and st_.scores == (1.0, -1.0)


def test_c4_diagonal_win_oracle():
    # stacked staircase: player 0 gets (0,0),(1,1),(2,2),(3,3)
    game = get_game("connect4")
    s = game.initial_state()
    for col in (0, 1, 1, 2, 2, 3, 2, 3, 3, 6, 3):
        s = game.apply_action(s, col)
    st_ = game.status(s)
    assert st_.terminal and st_.scores == (1.0, -1.0)


def test_c4_column_full_illegal():
    game = get_game("connect4")
    s = game.initial_state()
    for _ in range(6):
        s = game.apply_action(s, 0)
    assert 0 not in game.legal_actions(s)
    with pytest.raises(IllegalAction):
        game.apply_action(s, 0)


def test_c4_reachability_marker():
    game = get_game("connect4")
    s = game.initial_state()
    # bottom row is reachable-empty (1), everything above unreachable (0)
    assert all(s.cells[c] == 1 for c in range(7))
    assert all(s.cells[7 * r + c] == 0 for r in range(1, 6) for c in range(7))
    s = game.apply_action(s, 3)
    assert s.cells[3] == 2          # player 0 piece
    assert s.cells[7 + 3] == 1      # next slot in the column became reachable


def test_c4_l3_encoding_matches_winner_oracle():
    game = get_game("connect4-l3")
    rng = random.Random(3)
    s = game.initial_state()
    while not game.status(s).terminal:
        s = game.apply_action(s, rng.choice(game.legal_actions(s)))
    w = connect4_winner(s.cells, piece_base=1)
    scores = game.status(s).scores
    if w is None:
        assert scores == (0.0, 0.0)
    else:
        assert scores[w] == 1.0


# ----------------------------------------------------------------- 2048


def test_2048_merge_semantics():
    # exponents: [1,1,1,1] left -> [2,2,0,0], reward 4+4
    cells = [1, 1, 1, 1] + [0] * 12
    out, reward = shift_merge_2048(tuple(cells), 0)
    assert out[:4] == (2, 2, 0, 0)
    assert reward == 8


def test_2048_no_double_merge():
    # [2,1,1,0] left -> [2,2,0,0] (the freshly merged 2 must not remerge)
    cells = [2, 1, 1, 0] + [0] * 12
    out, reward = shift_merge_2048(tuple(cells), 0)
    assert out[:4] == (2, 2, 0, 0)
    assert reward == 4


def test_2048_move_legality_requires_change():
    game = get_game("2048")
    cells = [1, 2, 3, 4] + [0] * 12
    s = state_with(game, cells, to_move=0)
    # the full distinct row cannot slide horizontally or up; only down moves
    assert game.legal_actions(s) == [3]


def test_2048_afterstate_then_chance():
    game = get_game("2048")
    rng = random.Random(4)
    s = game.initial_state(rng)
    assert sum(1 for v in s.cells if v) == 2
    a = game.legal_actions(s)[0]
    after = game.apply_action(s, a)
    assert after.is_afterstate
    nxt = game.sample_chance(after, rng)
    assert not nxt.is_afterstate
    assert sum(1 for v in nxt.cells if v) == sum(1 for v in after.cells if v) + 1


def test_2048_chance_distribution_weights():
    game = get_game("2048")
    rng = random.Random(5)
    s = game.initial_state(rng)
    after = game.apply_action(s, game.legal_actions(s)[0])
    outcomes = game.chance_outcomes(after)
    empties = sum(1 for v in after.cells if v == 0)
    assert len(outcomes) == 2 * empties
    p2 = sum(o.probability for o in outcomes if max(o.state.cells) == max(after.cells) or 1 in
             [o.state.cells[i] for i in range(16) if after.cells[i] == 0])
    twos = [o for o in outcomes if any(o.state.cells[i] == 1 and after.cells[i] == 0 for i in range(16))]
    fours = [o for o in outcomes if any(o.state.cells[i] == 2 and after.cells[i] == 0 for i in range(16))]
    assert abs(sum(o.probability for o in twos) - 0.9) < 1e-12
    assert abs(sum(o.probability for o in fours) - 0.1) < 1e-12


def test_2048_cumulative_reward_tracks_merges():
    game = get_game("2048")
    rng = random.Random(6)
    s = game.initial_state(rng)
    total = 0.0
    for _ in range(30):
        if game.status(s).terminal:
            break
        best = max(
            game.legal_actions(s),
            key=lambda a: game.apply_action(s, a).cumulative_reward[0],
        )
        nxt = game.apply_action(s, best)
        total += nxt.cumulative_reward[0] - s.cumulative_reward[0]
        s = game.sample_chance(nxt, rng) if not game.status(nxt).terminal else nxt
    assert s.cumulative_reward[0] == total


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=16, max_size=16), st.integers(0, 3))
def test_2048_shift_merge_conserves_tile_mass(cells, direction):
    """Total tile value (sum of 2^exp) is conserved by slides and merges."""
    out, reward = shift_merge_2048(tuple(cells), direction)
    mass = lambda cs: sum(2 ** v for v in cs if v)  # noqa: E731
    assert mass(out) == mass(cells)
    assert reward >= 0
