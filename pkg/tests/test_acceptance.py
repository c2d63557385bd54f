"""Acceptance suite: one test per release criterion, at stated tolerance.

The default run covers the exact fixtures, the oracle-backed learning
checks, the throughput floors, and the fast property suite.  Medium-cost
empirical checks are marked ``desk`` and the multi-hour training runs are
marked ``long``; select them with ``-m desk`` / ``-m long``.
"""
import itertools
import math
import random
from functools import reduce
from operator import xor

import numpy as np
import pytest

from boardlab.agents import (
    MCAgent,
    MaxNAgent,
    MctsAgent,
    MctseAgent,
    RandomAgent,
    SearchConfig,
    expectimaxn,
    maxn,
    wrap,
)
from boardlab.agents.maxn import _maxn_value, _zero_leaf
from boardlab.arena import (
    evaluate_win_rate,
    mean_episode_score,
    play_episode,
    replay_episode,
)
from boardlab.cli import run_bench
from boardlab.core import GameState, apply_symmetry, zeros
from boardlab.games import get_game
from boardlab.games.nim import LOSING, nim_optimal_action
from boardlab.ntuple import (
    NTupleAgent,
    NTupleNetwork,
    TrainConfig,
    generate_random_walk_ntuples,
    ntuple_index,
    tc_multiplier,
    trace_horizon,
    train_selfplay,
)
from boardlab.ratings import elo_update
from boardlab.starts import winnable_starts
from boardlab.store import load_agent, save_agent

from test_search import CHANCE_NODES, LEAVES, MAX_NODES, TreeGame

THIRD = 1.0 / 3.0


# ---------------------------------------------------------------------------
# 1. Expectimax-N fixture tree: every node value exact.
# ---------------------------------------------------------------------------


def test_expectimax_fixture_tree_values_exact():
    game = TreeGame()
    root = game.initial_state()
    best, value = expectimaxn(root, None)
    # root: action 1 wins, value (1, 6) — exact
    assert best == 1
    assert value == (THIRD * 0.0 + THIRD * 1.0 + THIRD * 2.0, THIRD * 6.0 + THIRD * 5.0 + THIRD * 7.0)
    assert value[1] == 6.0
    # expectation node under action 0: (0, 3.33) — exact same-order arithmetic
    from boardlab.agents import ExpectimaxNAgent

    _, estimates = ExpectimaxNAgent(depth=None).choose_action(root, random.Random(0))
    exp0 = estimates[0]
    assert exp0 == (THIRD * -3.0 + THIRD * 1.0 + THIRD * 2.0, THIRD * 4.0 + THIRD * 1.0 + THIRD * 5.0)
    assert abs(exp0[0] - 0.0) < 1e-15
    assert abs(exp0[1] - 10.0 / 3.0) < 1e-15
    # max-layer picks under the first chance node: (-3,4), (1,1), (2,5)
    for chance_child, expected in ((3, (-3.0, 4.0)), (4, (1.0, 1.0)), (5, (2.0, 5.0))):
        s = game._state(chance_child, 2)
        _, v = expectimaxn(s, None)
        assert v == expected


# ---------------------------------------------------------------------------
# 2. Nim: Max-N vs the closed-form oracle, and a tabular TD net.
# ---------------------------------------------------------------------------


def test_nim_maxn_agrees_with_oracle_on_all_small_positions():
    game = get_game("nim-5,5,5")
    tt: dict = {}
    for heaps in itertools.product(range(6), repeat=3):
        if heaps == (0, 0, 0):
            continue
        s = GameState(game, heaps, 0, 0, zeros(2))
        value = _maxn_value(s, None, _zero_leaf, tt)
        mover_wins_search = value[0] > 0
        mover_wins_oracle = nim_optimal_action(s) is not LOSING
        assert mover_wins_search == mover_wins_oracle, heaps
        assert mover_wins_oracle == (reduce(xor, heaps) != 0)


def test_nim_tabular_td_matches_oracle_classification():
    game = get_game("nim-1,1,2")
    cfg = TrainConfig(
        training_games=50000, alpha=0.5, lam=0.5, eps_init=0.3, eps_final=0.02,
        tc_enabled=True, seed=0, eval_points=1, eval_episodes=1,
        use_fast_kernel=False,
    )
    agent, _ = train_selfplay(game, cfg, tuples=[(0, 1, 2)])
    for heaps in itertools.product(range(2), range(2), range(3)):
        if not any(heaps):
            continue
        v = agent.net.value_of_cells(heaps)
        assert (v > 0) == (reduce(xor, heaps) != 0), (heaps, v)


# ---------------------------------------------------------------------------
# 3. Tic-tac-toe: exact game value, and a TD net that never loses.
# ---------------------------------------------------------------------------


def test_ttt_maxn_depth9_values_empty_board_as_draw():
    game = get_game("tictactoe")
    _, value = maxn(game.initial_state(), 9, tt={})
    assert value == (0.0, 0.0)


def test_ttt_td_never_loses_against_full_depth_maxn():
    game = get_game("tictactoe")
    tuples = [(0, 1, 3, 4), (1, 2, 4, 5), (3, 4, 6, 7), (4, 5, 7, 8),
              (0, 1, 2), (0, 3, 6), (0, 4, 8)]
    cfg = TrainConfig(
        training_games=50000, alpha=0.5, lam=0.5, eps_init=0.3, eps_final=0.02,
        tc_enabled=True, seed=0, eval_points=1, eval_episodes=1,
    )
    agent, _ = train_selfplay(game, cfg, tuples=tuples)
    opponent = MaxNAgent(depth=9, use_tt=True)
    losses = 0
    for i in range(200):
        seats = (agent, opponent) if i % 2 == 0 else (opponent, agent)
        seat = 0 if i % 2 == 0 else 1
        rec = play_episode(game, seats, seed=i)
        if rec.final_scores[seat] < 0:
            losses += 1
    assert losses == 0, f"{losses} losses in 200 episodes"


# ---------------------------------------------------------------------------
# 4. 2048 search-agent ordering at desk scale (50 evaluation games).
# ---------------------------------------------------------------------------


@pytest.mark.desk
def test_2048_mctse_beats_mcts_at_matched_budget():
    game = get_game("2048")
    mctse = MctseAgent(SearchConfig(iterations=1000))
    mcts = MctsAgent(SearchConfig(iterations=1000))
    score_e = mean_episode_score(mctse, game, episodes=50, seed=100)
    score_p = mean_episode_score(mcts, game, episodes=50, seed=100)
    assert score_e >= 1.3 * score_p, f"mctse {score_e:.0f} vs mcts {score_p:.0f}"


@pytest.mark.desk
def test_2048_mc_agent_reaches_25k():
    game = get_game("2048")
    mc = MCAgent(SearchConfig(rollouts_per_action=50))
    score = mean_episode_score(mc, game, episodes=50, seed=200)
    assert score >= 25000, f"mc-50 mean score {score:.0f}"


# ---------------------------------------------------------------------------
# 5. 2048 TD full budget (long): 200k games, then 2-ply wrapping gains.
# ---------------------------------------------------------------------------


@pytest.mark.long
def test_2048_td_full_budget_and_wrapping_gain():
    game = get_game("2048")
    rng = random.Random((3, "tuples").__hash__())
    tuples = generate_random_walk_ntuples(game.adjacency(), 4, 6, rng)
    cfg = TrainConfig(
        training_games=200000, alpha=1.0, lam=0.0, eps_init=0.0, eps_final=0.0,
        tc_enabled=True, seed=3, eval_points=20, eval_episodes=10,
    )
    agent, _ = train_selfplay(game, cfg, tuples=tuples)
    score0 = mean_episode_score(agent, game, episodes=50, seed=300)
    assert score0 >= 110000, f"0-ply mean score {score0:.0f}"
    score2 = mean_episode_score(wrap(agent, 2), game, episodes=50, seed=300)
    assert score2 >= score0 + 20000, f"2-ply {score2:.0f} vs 0-ply {score0:.0f}"


# ---------------------------------------------------------------------------
# 6. Hex 5x5 (long): TD + 2-ply wrapper vs MCTS on the winnable starts.
# ---------------------------------------------------------------------------


@pytest.mark.long
def test_hex5_td_2ply_beats_mcts_on_winnable_starts():
    game = get_game("hex-5")
    rates = []
    for run in range(20):
        rng = random.Random((run, "tuples").__hash__())
        tuples = generate_random_walk_ntuples(game.adjacency(), 25, 6, rng)
        cfg = TrainConfig(
            training_games=100000, alpha=5.0, lam=0.5, eps_init=0.1, eps_final=0.0,
            tc_enabled=True, beta=2.7, seed=run, eval_points=1, eval_episodes=1,
        )
        agent, _ = train_selfplay(game, cfg, tuples=tuples)
        mcts = MctsAgent(SearchConfig(iterations=10000, k_uct=1.414, max_tree_depth=10))
        pairs = winnable_starts(game)
        rate = evaluate_win_rate(
            wrap(agent, 2), mcts, game,
            starts=[s for s, _ in pairs],
            agent_seats=[seat for _, seat in pairs],
            episodes_per_start=1, seed=run * 1000,
        )
        rates.append(rate)
    mean_rate = sum(rates) / len(rates)
    assert mean_rate >= 0.85 - 0.05, f"mean win rate {mean_rate:.3f} over 20 runs"


# ---------------------------------------------------------------------------
# 7. Connect-4 (long): TD after 500k games beats MCTS(10k iters).
# ---------------------------------------------------------------------------


@pytest.mark.long
def test_connect4_td_beats_mcts_10k():
    game = get_game("connect4")
    rng = random.Random((7, "tuples").__hash__())
    tuples = generate_random_walk_ntuples(game.adjacency(), 70, 8, rng)
    cfg = TrainConfig(
        training_games=500000, alpha=5.0, lam=0.25, eps_init=0.1, eps_final=0.0,
        tc_enabled=True, beta=2.7, seed=7, eval_points=10, eval_episodes=10,
    )
    agent, _ = train_selfplay(game, cfg, tuples=tuples)
    mcts = MctsAgent(SearchConfig(iterations=10000, k_uct=1.414, max_tree_depth=10))
    rate = evaluate_win_rate(agent, mcts, game, episodes_per_start=50, seed=700)
    assert rate >= 0.9, f"win rate {rate:.3f} over 100 episodes"


# ---------------------------------------------------------------------------
# 8. Throughput floors (single core, measured by the bench entry point).
# ---------------------------------------------------------------------------


def test_throughput_floors():
    r2048 = run_bench("2048", seconds=2.0, seed=0)
    rc4 = run_bench("connect4", seconds=2.0, seed=0)
    detail = (
        f"2048 train {r2048['train']:,.0f}/s play {r2048['play']:,.0f}/s; "
        f"connect4 train {rc4['train']:,.0f}/s play {rc4['play']:,.0f}/s"
    )
    assert r2048["train"] >= 66000, detail
    assert r2048["play"] >= 94000, detail
    assert rc4["train"] >= 7900, detail
    assert rc4["play"] >= 40400, detail


# ---------------------------------------------------------------------------
# 9. Fast property suite (every run).
# ---------------------------------------------------------------------------


def test_property_chance_probabilities_normalize():
    game = get_game("2048")
    rng = random.Random(1)
    s = game.initial_state(rng)
    after = game.apply_action(s, game.legal_actions(s)[0])
    total = sum(o.probability for o in game.chance_outcomes(after))
    assert abs(total - 1.0) < 1e-12


def test_property_symmetry_closure_and_score_invariance():
    for spec in ("tictactoe", "hex-5", "connect4"):
        game = get_game(spec)
        syms = game.symmetries()
        maps = {t.cell_map for t in syms}
        for t1 in syms:
            for t2 in syms:
                assert tuple(t1.cell_map[i] for i in t2.cell_map) in maps
        rng = random.Random(2)
        s = game.initial_state()
        while not game.status(s).terminal:
            s = game.apply_action(s, rng.choice(game.legal_actions(s)))
        base = game.status(s).scores
        for t in syms:
            scores = game.status(apply_symmetry(s, t)).scores
            assert max(abs(a - b) for a, b in zip(base, scores)) < 1e-12


def test_property_index_bijective_exhaustive():
    seen = {ntuple_index(v, 3) for v in itertools.product(range(3), repeat=3)}
    assert seen == set(range(27))


def test_property_trace_horizon_and_tc_boundaries():
    assert trace_horizon(0.5, 0.01) == 7
    assert tc_multiplier(0.0, 0.0, 2.7) == 1.0
    assert tc_multiplier(-2.0, 2.0, 2.7) == 1.0
    assert tc_multiplier(0.0, 3.0, 2.7) == pytest.approx(math.exp(-2.7), abs=1e-15)


def test_property_elo_conservation():
    rng = random.Random(3)
    pool = [1500.0] * 6
    for _ in range(1000):
        i, j = rng.sample(range(6), 2)
        pool[i], pool[j] = elo_update(pool[i], pool[j], rng.choice((0.0, 0.5, 1.0)))
    assert sum(pool) == pytest.approx(9000.0, abs=1e-6)


def test_property_replay_bit_fidelity():
    for spec in ("tictactoe", "connect4", "2048"):
        game = get_game(spec)
        seats = (RandomAgent(),) * game.players
        for seed in range(3):
            rec = play_episode(game, seats, seed=seed)
            assert replay_episode(game, rec) == rec.final_scores


def test_property_agent_file_round_trip(tmp_path):
    game = get_game("tictactoe")
    net = NTupleNetwork(game, [(0, 1, 2), (0, 4, 8)])
    net.w[:] = np.random.default_rng(4).normal(0, 0.3, net.num_weights).astype(np.float32)
    net.enable_tc()
    net.tc[:] = np.abs(np.random.default_rng(5).normal(0, 1, net.tc.shape)).astype(np.float32)
    path = str(tmp_path / "agent.gbga")
    save_agent(NTupleAgent(net), game, path)
    loaded, _ = load_agent(path, game)
    assert (loaded.net.w == net.w).all()
    assert (loaded.net.tc == net.tc).all()
