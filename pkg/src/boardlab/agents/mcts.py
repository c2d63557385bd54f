"""Monte Carlo Tree Search (UCT) and its expectimax variant.

MCTSE keeps an explicit expectation layer per action edge so that
different chance completions of the same move land in different subtrees;
plain MCTS fixes one sampled completion per node, which is exactly the
weakness MCTSE removes on nondeterministic games.  On deterministic games
the two behave identically.

Rollout score tuples are divided by a running maximum before entering the
UCT exploitation term so that K_uct keeps its meaning on games with
unbounded scores (2048).
"""
from __future__ import annotations

import math
import random
from typing import Optional

from ..core import GameState, zeros
from .base import Agent, SearchConfig


class _Node:
    __slots__ = ("state", "untried", "children", "n", "w", "final")

    def __init__(self, state: GameState):
        self.state = state
        st = state.game.status(state)
        self.final = st.scores if st.terminal else None
        self.untried = [] if st.terminal else list(state.game.legal_actions(state))
        self.children: dict = {}
        self.n = 0
        self.w = [0.0] * state.game.players


class _ExpNode:
    """Expectation layer under one action edge; children keyed by the
    sampled chance completion's cells."""

    __slots__ = ("afterstate", "children", "n", "w")

    def __init__(self, afterstate: GameState):
        self.afterstate = afterstate
        self.children: dict = {}
        self.n = 0
        self.w = [0.0] * afterstate.game.players


class _UctSearch:
    def __init__(self, cfg: SearchConfig, expectimax: bool):
        self.cfg = cfg
        self.expectimax = expectimax
        self._scale = 1.0

    def run(self, state: GameState, rng: random.Random) -> _Node:
        root = _Node(state)
        scale = 1.0
        for _ in range(self.cfg.iterations):
            path, leaf_state = self._descend(root, rng)
            if leaf_state is None:
                scores = path[-1].final
            else:
                scores = state.game.rollout(leaf_state, rng)
            for v in scores:
                scale = max(scale, abs(v))
            self._scale = scale
            for node in path:
                node.n += 1
                for i, v in enumerate(scores):
                    node.w[i] += v
        return root

    # one selection + expansion pass; returns (path, state to roll out from)
    # where the state is None when the path ended on a terminal node
    def _descend(self, root: _Node, rng: random.Random):
        path = [root]
        node = root
        depth = 0
        while True:
            if node.final is not None:
                return path, None
            if node.untried:
                if depth >= self.cfg.max_tree_depth:
                    return path, node.state
                a = node.untried.pop(0)  # lowest id first
                child = self._make_child(node.state, a, rng)
                node.children[a] = child
                if isinstance(child, _ExpNode):
                    path.append(child)
                    leaf = _Node(child.afterstate.game.sample_chance(child.afterstate, rng))
                    child.children[leaf.state.cells] = leaf
                    path.append(leaf)
                    return path, (None if leaf.final is not None else leaf.state)
                path.append(child)
                return path, (None if child.final is not None else child.state)
            if depth >= self.cfg.max_tree_depth or not node.children:
                return path, node.state
            child = self._select(node)
            if isinstance(child, _ExpNode):
                path.append(child)
                sampled = child.afterstate.game.sample_chance(child.afterstate, rng)
                leaf = child.children.get(sampled.cells)
                if leaf is None:
                    leaf = _Node(sampled)
                    child.children[sampled.cells] = leaf
                    path.append(leaf)
                    return path, (None if leaf.final is not None else leaf.state)
                child = leaf
            path.append(child)
            node = child
            depth += 1

    def _make_child(self, state: GameState, action: int, rng: random.Random):
        nxt = state.game.apply_action(state, action)
        if not nxt.is_afterstate:
            return _Node(nxt)
        if self.expectimax:
            return _ExpNode(nxt)
        # plain MCTS: one sampled completion subsumes all chance outcomes
        return _Node(state.game.sample_chance(nxt, rng))

    def _select(self, node: _Node):
        mover = node.state.to_move
        k = self.cfg.k_uct
        log_n = math.log(node.n)
        best, best_score = None, None
        # children were inserted in ascending action order, so iteration
        # order plus strict > gives lowest-id tie-breaking
        for a, child in node.children.items():
            q = child.w[mover] / child.n / self._scale
            score = q + k * math.sqrt(log_n / child.n)
            if best_score is None or score > best_score:
                best, best_score = child, score
        return best


def uct_score(q: float, n_parent: int, n_child: int, k: float) -> float:
    """The UCT selection value Q + K * sqrt(ln N / n); infinite for an
    unvisited child."""
    if n_child == 0:
        return math.inf
    return q + k * math.sqrt(math.log(n_parent) / n_child)


class MctsAgent(Agent):
    """Plain UCT MCTS; the final move is the most-visited root child."""

    name = "mcts"
    _expectimax = False

    def __init__(self, cfg: Optional[SearchConfig] = None):
        self.cfg = cfg if cfg is not None else SearchConfig()

    def choose_action(self, state: GameState, rng: random.Random):
        search = _UctSearch(self.cfg, self._expectimax)
        root = search.run(state, rng)
        estimates = {}
        visits = {}
        for a in state.game.legal_actions(state):
            child = root.children.get(a)
            if child is None or child.n == 0:
                estimates[a] = zeros(state.game.players)
                visits[a] = 0
            else:
                estimates[a] = tuple(v / child.n for v in child.w)
                visits[a] = child.n
        best = min(visits, key=lambda a: (-visits[a], a))
        return best, estimates


class MctseAgent(MctsAgent):
    """MCTS with expectation layers on the action edges of
    nondeterministic games."""

    name = "mctse"
    _expectimax = True
