"""Decision-time search agents: exact fixture values, oracles, invariants."""
import math
import random
from functools import reduce
from operator import xor

import pytest

from boardlab.agents import (
    ExpectimaxNAgent,
    MCAgent,
    MaxNAgent,
    MctsAgent,
    MctseAgent,
    RandomAgent,
    SearchConfig,
    expectimaxn,
    maxn,
    uct_score,
    wrap,
)
from boardlab.agents.mcts import _UctSearch
from boardlab.core import ContractViolation, Game, GameState, ChanceOutcome, Status, zeros
from boardlab.games import get_game
from boardlab.games.nim import BoutonAgent, nim_optimal_action, LOSING


# --------------------------------------------------------- fixture tree
#
# A tiny 2-player stochastic game given as an explicit tree.  The root is
# a max node for player 0 with two actions; each action leads to a chance
# node with three equiprobable children, which are max nodes for player 1
# over two terminal leaves each.
#
#   root ── a0 ── chance ── max1 picks (-3,4)   over (-3,4) (0,2)
#   │                    ── max1 picks (1,1)    over (1,1) (-1,0)
#   │                    ── max1 picks (2,5)    over (2,5) (3,3)
#   └──── a1 ── chance ── max1 picks (0,6)     over (0,6) (5,1)
#                      ── max1 picks (1,5)     over (1,5) (2,4)
#                      ── max1 picks (2,7)     over (2,7) (7,0)
#
# Expectations: a0 -> (0, 10/3); a1 -> (1, 6).  Root (player 0) picks a1.

LEAVES = {
    9: (-3.0, 4.0), 10: (0.0, 2.0),
    11: (1.0, 1.0), 12: (-1.0, 0.0),
    13: (2.0, 5.0), 14: (3.0, 3.0),
    15: (0.0, 6.0), 16: (5.0, 1.0),
    17: (1.0, 5.0), 18: (2.0, 4.0),
    19: (2.0, 7.0), 20: (7.0, 0.0),
}
MAX_NODES = {
    0: (0, [1, 2]),       # player, chance-node children
    3: (1, [9, 10]),
    4: (1, [11, 12]),
    5: (1, [13, 14]),
    6: (1, [15, 16]),
    7: (1, [17, 18]),
    8: (1, [19, 20]),
}
CHANCE_NODES = {1: [3, 4, 5], 2: [6, 7, 8]}


class TreeGame(Game):
    spec = "fixture-tree"
    players = 2
    num_cells = 1
    num_actions = 2
    L = 21
    stochastic = True

    def _state(self, node, move_count):
        if node in CHANCE_NODES:
            return GameState(self, (node,), 0, move_count, zeros(2), is_afterstate=True)
        player = MAX_NODES[node][0] if node in MAX_NODES else 0
        return GameState(self, (node,), player, move_count, zeros(2))

    def initial_state(self, rng=None):
        return self._state(0, 0)

    def legal_actions(self, state):
        node = state.cells[0]
        if node in LEAVES:
            return []
        return list(range(len(MAX_NODES[node][1])))

    def apply_action(self, state, action):
        node = state.cells[0]
        child = MAX_NODES[node][1][action]
        return self._state(child, state.move_count + 1)

    def status(self, state):
        node = state.cells[0]
        if node in LEAVES:
            return Status(True, LEAVES[node])
        return Status(False)

    def chance_outcomes(self, afterstate):
        children = CHANCE_NODES[afterstate.cells[0]]
        p = 1.0 / len(children)
        return [
            ChanceOutcome(self._state(c, afterstate.move_count + 1), p)
            for c in children
        ]

    def symmetries(self):
        from boardlab.core import SymmetryTransform

        return [SymmetryTransform(0, (0,), (0, 1))]

    def adjacency(self):
        return [[]]

    def action_name(self, action):
        return f"a{action}"

    def render(self, state):
        return str(state.cells[0])


TREE = TreeGame()
THIRD = 1.0 / 3.0


def test_expectimax_fixture_root():
    best, value = expectimaxn(TREE.initial_state(), None)
    assert best == 1
    assert value == (THIRD * 0.0 + THIRD * 1.0 + THIRD * 2.0,
                     THIRD * 6.0 + THIRD * 5.0 + THIRD * 7.0)
    assert value[1] == 6.0


def test_expectimax_fixture_expectation_node():
    from boardlab.agents.maxn import _expectimax_value

    left = TREE._state(1, 1)
    value = _expectimax_value(left, None, lambda s: zeros(2))
    assert value == (THIRD * -3.0 + THIRD * 1.0 + THIRD * 2.0,
                     THIRD * 4.0 + THIRD * 1.0 + THIRD * 5.0)
    assert abs(value[0]) < 1e-15
    assert abs(value[1] - 10.0 / 3.0) < 1e-15


def test_expectimax_fixture_max_layer_picks():
    expected = {3: (-3.0, 4.0), 4: (1.0, 1.0), 5: (2.0, 5.0)}
    for node, want in expected.items():
        _, value = expectimaxn(TREE._state(node, 1), None)
        assert value == want


def test_maxn_rejects_stochastic_game():
    with pytest.raises(ContractViolation):
        maxn(TREE.initial_state(), None)


# ---------------------------------------------------------------- max-n


def test_maxn_ttt_empty_board_is_draw():
    game = get_game("tictactoe")
    _, value = maxn(game.initial_state(), 9, tt={})
    assert value == (0.0, 0.0)


def test_maxn_completes_two_in_a_row():
    game = get_game("tictactoe")
    s = game.initial_state()
    for a in (0, 3, 1, 4):   # X at 0,1; O at 3,4; X to move
        s = game.apply_action(s, a)
    best, value = maxn(s, None, tt={})
    assert best == 2
    assert value == (1.0, -1.0)


def test_maxn_equals_negamax_on_ttt():
    game = get_game("tictactoe")

    def negamax(s):
        st_ = game.status(s)
        if st_.terminal:
            return st_.scores[s.to_move]
        return max(-negamax(game.apply_action(s, a)) for a in game.legal_actions(s))

    rng = random.Random(11)
    for _ in range(5):
        s = game.initial_state()
        for _ in range(3):
            s = game.apply_action(s, rng.choice(game.legal_actions(s)))
        if game.status(s).terminal:
            continue
        _, value = maxn(s, None, tt={})
        assert value[s.to_move] == negamax(s)
        assert value[0] == -value[1]


def test_maxn_single_action():
    game = get_game("nim-1")
    s = game.initial_state()
    best, value = maxn(s, None)
    assert best == game.legal_actions(s)[0]
    assert value == (1.0, -1.0)


def test_wrap_zero_is_identity():
    game = get_game("tictactoe")
    agent = RandomAgent()
    assert wrap(agent, 0) is agent


def test_wrap_argmax_identity_on_fuzzed_states():
    game = get_game("nim-2,3")
    inner = BoutonAgent()
    wrapped = wrap(inner, 0)
    rng1, rng2 = random.Random(5), random.Random(5)
    s = game.initial_state()
    while not game.status(s).terminal:
        a1, _ = inner.choose_action(s, rng1)
        a2, _ = wrapped.choose_action(s, rng2)
        assert a1 == a2
        s = game.apply_action(s, a1)


def test_wrap_perfect_leaf_stays_perfect_on_nim():
    """2-ply wrapping of the perfect oracle still matches XOR theory."""
    from boardlab.core import GameState

    game = get_game("nim-5,5,5")
    agent = wrap(BoutonAgent(), 2)
    rng = random.Random(7)
    for a in range(5):
        for b in range(5):
            heaps = (a + 1, b + 1, 3)
            s = GameState(game, heaps, 0, 0, zeros(2))
            action, _ = agent.choose_action(s, rng)
            if reduce(xor, heaps) != 0:
                nxt = game.apply_action(s, action)
                assert reduce(xor, nxt.cells) == 0, heaps


def test_wrap_depth_monotonic_on_nim_vs_oracle():
    """Deeper look-ahead never loses a position a shallower one wins."""
    from boardlab.core import GameState

    game = get_game("nim-4,4,4")
    oracle = BoutonAgent()

    def wins(agent, heaps, seed):
        s = GameState(game, heaps, 0, 0, zeros(2))
        rng = random.Random(seed)
        while not game.status(s).terminal:
            mover = oracle if s.to_move == 1 else agent
            a, _ = mover.choose_action(s, rng)
            s = game.apply_action(s, a)
        return game.status(s).scores[0] > 0

    positions = [
        (a, b, c)
        for a in range(5) for b in range(5) for c in range(5)
        if (a, b, c) != (0, 0, 0)
    ]
    won = {}
    for d in (1, 3):
        agent = wrap(RandomAgent(), d)
        won[d] = {h for h in positions if wins(agent, h, seed=13)}
    assert won[1] <= won[3]


# ------------------------------------------------------------------- mc


def test_mc_picks_immediate_win():
    game = get_game("tictactoe")
    s = game.initial_state()
    for a in (0, 3, 1, 4):
        s = game.apply_action(s, a)
    agent = MCAgent(SearchConfig(rollouts_per_action=20))
    best, estimates = agent.choose_action(s, random.Random(3))
    assert best == 2
    assert estimates[2] == (1.0, -1.0)
    assert set(estimates) == set(game.legal_actions(s))


def test_mc_estimates_match_rollout_expectation_on_tiny_nim():
    """Nim [1,1]: both actions lead to a forced loss for the mover; every
    rollout therefore scores -1 for the player to move."""
    game = get_game("nim-1,1")
    s = game.initial_state()
    agent = MCAgent(SearchConfig(rollouts_per_action=30))
    _, estimates = agent.choose_action(s, random.Random(9))
    for a, est in estimates.items():
        assert est == (-1.0, 1.0)


# ----------------------------------------------------------------- mcts


def test_uct_score_arithmetic():
    assert abs(uct_score(0.5, 100, 10, 1.414) - 1.4596) < 5e-4
    assert uct_score(0.0, 10, 0, 1.414) == math.inf


def test_mcts_visit_conservation():
    game = get_game("tictactoe")
    search = _UctSearch(SearchConfig(iterations=500, max_tree_depth=10), False)
    root = search.run(game.initial_state(), random.Random(1))
    assert root.n == 500

    def check(node):
        if not getattr(node, "children", None):
            return
        child_sum = sum(c.n for c in node.children.values())
        assert child_sum <= node.n
        for c in node.children.values():
            check(c)

    check(root)


def test_mcts_beats_random_at_ttt():
    game = get_game("tictactoe")
    agent = MctsAgent(SearchConfig(iterations=300, max_tree_depth=10))
    opponent = RandomAgent()
    rng = random.Random(17)
    losses = 0
    for ep in range(20):
        s = game.initial_state()
        mcts_seat = ep % 2
        while not game.status(s).terminal:
            mover = agent if s.to_move == mcts_seat else opponent
            a, _ = mover.choose_action(s, rng)
            s = game.apply_action(s, a)
        if game.status(s).scores[mcts_seat] < 0:
            losses += 1
    assert losses <= 1


def test_mctse_expectation_children_sampled_by_probability():
    """Chance children of the fixture tree's expectation nodes are visited
    in proportion to their (uniform) probabilities."""
    search = _UctSearch(SearchConfig(iterations=3000, max_tree_depth=10), True)
    root = search.run(TREE.initial_state(), random.Random(23))
    for a, exp_node in root.children.items():
        total = sum(c.n for c in exp_node.children.values())
        assert len(exp_node.children) == 3
        for c in exp_node.children.values():
            assert abs(c.n / total - THIRD) < 0.06


def test_mctse_reduces_to_mcts_on_deterministic_game():
    game = get_game("tictactoe")
    cfg = SearchConfig(iterations=200, max_tree_depth=10)
    a1, e1 = MctsAgent(cfg).choose_action(game.initial_state(), random.Random(4))
    a2, e2 = MctseAgent(cfg).choose_action(game.initial_state(), random.Random(4))
    assert a1 == a2
    assert e1 == e2


# --------------------------------------------------------------- random


def test_random_agent_uniform_and_deterministic():
    game = get_game("tictactoe")
    s = game.initial_state()
    agent = RandomAgent()
    counts = {a: 0 for a in range(9)}
    rng = random.Random(42)
    n = 9000
    for _ in range(n):
        a, _ = agent.choose_action(s, rng)
        counts[a] += 1
    for a, c in counts.items():
        assert abs(c - n / 9) < 150  # ~4.7 sigma
    seq1 = [agent.choose_action(s, random.Random(1))[0] for _ in range(20)]
    seq2 = [agent.choose_action(s, random.Random(1))[0] for _ in range(20)]
    assert seq1 == seq2


# ------------------------------------------------------------- legality


@pytest.mark.parametrize("make_agent", [
    lambda: RandomAgent(),
    lambda: MaxNAgent(depth=2),
    lambda: MCAgent(SearchConfig(rollouts_per_action=2)),
    lambda: MctsAgent(SearchConfig(iterations=20, max_tree_depth=5)),
])
def test_agents_play_only_legal_moves(make_agent):
    rng = random.Random(31)
    for spec in ("tictactoe", "nim-3,4", "connect4", "hex-4"):
        game = get_game(spec)
        agent = make_agent()
        for _ in range(3):
            s = game.initial_state()
            while not game.status(s).terminal:
                a, estimates = agent.choose_action(s, rng)
                legal = game.legal_actions(s)
                assert a in legal
                assert set(estimates) == set(legal)
                s = game.apply_action(s, a)


def test_stochastic_agents_play_only_legal_moves():
    game = get_game("2048")
    rng = random.Random(37)
    for agent in (ExpectimaxNAgent(depth=1), MctseAgent(SearchConfig(iterations=20, max_tree_depth=5))):
        s = game.initial_state(rng)
        for _ in range(15):
            if game.status(s).terminal:
                break
            a, estimates = agent.choose_action(s, rng)
            legal = game.legal_actions(s)
            assert a in legal
            assert set(estimates) == set(legal)
            s = game.apply_action(s, a)
            if not game.status(s).terminal:
                s = game.sample_chance(s, rng)
