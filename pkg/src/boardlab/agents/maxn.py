"""Max-N and Expectimax-N tree search, plus the d-ply look-ahead wrapper.

Max-N generalizes minimax to N players: every layer maximizes the tuple
entry of the player to move.  Expectimax-N inserts expectation layers that
average score tuples over chance outcomes.  Both become generic d-ply
wrappers when the leaf evaluation is another agent's value prediction.
"""
from __future__ import annotations

import random
from typing import Callable, Optional

from ..core import ContractViolation, GameState, ScoreTuple, zeros
from .base import Agent

LeafEval = Callable[[GameState], ScoreTuple]


def _zero_leaf(state: GameState) -> ScoreTuple:
    return zeros(state.game.players)


def _maxn_value(state, depth, leaf_eval, tt) -> ScoreTuple:
    st = state.game.status(state)
    if st.terminal:
        return st.scores
    if depth is not None and depth <= 0:
        return leaf_eval(state)
    if tt is not None:
        cached = tt.get((state.key(), depth))
        if cached is not None:
            return cached
    mover = state.to_move
    best = None
    child_depth = None if depth is None else depth - 1
    for a in state.game.legal_actions(state):
        v = _maxn_value(state.game.apply_action(state, a), child_depth, leaf_eval, tt)
        if best is None or v[mover] > best[mover]:
            best = v
    if tt is not None:
        tt[(state.key(), depth)] = best
    return best


def maxn(
    state: GameState,
    depth: Optional[int],
    leaf_eval: LeafEval = _zero_leaf,
    tt: Optional[dict] = None,
):
    """Full Max-N from ``state``.  Returns (best action, ScoreTuple value);
    ties break toward the lowest action id.  ``depth=None`` searches to the
    end of the game.

    ``tt`` is an optional transposition cache; only sound for games whose
    terminal scores depend on the board alone (true for all built-in
    deterministic games), so the caller opts in explicitly.
    """
    game = state.game
    if game.stochastic:
        raise ContractViolation("maxn on a nondeterministic game; use expectimaxn")
    if game.status(state).terminal:
        raise ContractViolation("maxn needs a non-terminal state")
    mover = state.to_move
    child_depth = None if depth is None else depth - 1
    best_a, best_v = None, None
    for a in game.legal_actions(state):
        v = _maxn_value(game.apply_action(state, a), child_depth, leaf_eval, tt)
        if best_v is None or v[mover] > best_v[mover]:
            best_a, best_v = a, v
    return best_a, best_v


def _expectimax_value(state, depth, leaf_eval) -> ScoreTuple:
    if state.is_afterstate:
        total = None
        for out in state.game.chance_outcomes(state):
            v = _expectimax_value(out.state, depth, leaf_eval)
            if total is None:
                total = [out.probability * x for x in v]
            else:
                for i, x in enumerate(v):
                    total[i] += out.probability * x
        return tuple(total)
    st = state.game.status(state)
    if st.terminal:
        return st.scores
    if depth is not None and depth <= 0:
        return leaf_eval(state)
    mover = state.to_move
    child_depth = None if depth is None else depth - 1
    best = None
    for a in state.game.legal_actions(state):
        v = _expectimax_value(state.game.apply_action(state, a), child_depth, leaf_eval)
        if best is None or v[mover] > best[mover]:
            best = v
    return best


def expectimaxn(state: GameState, depth: Optional[int], leaf_eval: LeafEval = _zero_leaf):
    """Expectimax-N: max layers maximize the mover's tuple entry, chance
    layers average over outcomes.  Depth counts max layers."""
    game = state.game
    if game.status(state).terminal:
        raise ContractViolation("expectimaxn needs a non-terminal state")
    mover = state.to_move
    child_depth = None if depth is None else depth - 1
    best_a, best_v = None, None
    for a in game.legal_actions(state):
        v = _expectimax_value(game.apply_action(state, a), child_depth, leaf_eval)
        if best_v is None or v[mover] > best_v[mover]:
            best_a, best_v = a, v
    return best_a, best_v


class MaxNAgent(Agent):
    """Plain depth-limited Max-N with a zero (or supplied) leaf evaluation."""

    def __init__(self, depth: Optional[int], leaf_eval: LeafEval = _zero_leaf, use_tt: bool = False):
        self.depth = depth
        self.leaf_eval = leaf_eval
        self.tt: Optional[dict] = {} if use_tt else None
        self.name = f"maxn-{'full' if depth is None else depth}"

    def choose_action(self, state: GameState, rng: random.Random):
        game = state.game
        mover = state.to_move
        child_depth = None if self.depth is None else self.depth - 1
        estimates = {}
        for a in game.legal_actions(state):
            estimates[a] = _maxn_value(
                game.apply_action(state, a), child_depth, self.leaf_eval, self.tt
            )
        best = min(estimates, key=lambda a: (-estimates[a][mover], a))
        return best, estimates

    def predict_value(self, state: GameState) -> ScoreTuple:
        return _maxn_value(state, self.depth, self.leaf_eval, self.tt)


class ExpectimaxNAgent(Agent):
    """Plain depth-limited Expectimax-N with a zero (or supplied) leaf eval."""

    def __init__(self, depth: Optional[int], leaf_eval: LeafEval = _zero_leaf):
        self.depth = depth
        self.leaf_eval = leaf_eval
        self.name = f"expectimaxn-{'full' if depth is None else depth}"

    def choose_action(self, state: GameState, rng: random.Random):
        game = state.game
        mover = state.to_move
        child_depth = None if self.depth is None else self.depth - 1
        estimates = {}
        for a in game.legal_actions(state):
            estimates[a] = _expectimax_value(
                game.apply_action(state, a), child_depth, self.leaf_eval
            )
        best = min(estimates, key=lambda a: (-estimates[a][mover], a))
        return best, estimates

    def predict_value(self, state: GameState) -> ScoreTuple:
        return _expectimax_value(state, self.depth, self.leaf_eval)


def wrap(inner: Agent, d: int) -> Agent:
    """d-ply look-ahead around ``inner``: Max-N for deterministic games,
    Expectimax-N for nondeterministic ones, with ``inner.predict_value`` at
    the leaves.  ``d = 0`` returns ``inner`` unchanged."""
    if d == 0:
        return inner
    return _WrappedAgent(inner, d)


class _WrappedAgent(Agent):
    def __init__(self, inner: Agent, d: int):
        self.inner = inner
        self.d = d
        self.name = f"{inner.name}[{d}-ply]"

    def choose_action(self, state: GameState, rng: random.Random):
        game = state.game
        mover = state.to_move
        child_depth = self.d - 1
        value = _expectimax_value if game.stochastic else (
            lambda s, dep, leaf: _maxn_value(s, dep, leaf, None)
        )
        estimates = {}
        for a in game.legal_actions(state):
            estimates[a] = value(
                game.apply_action(state, a), child_depth, self.inner.predict_value
            )
        best = min(estimates, key=lambda a: (-estimates[a][mover], a))
        return best, estimates

    def predict_value(self, state: GameState) -> ScoreTuple:
        if state.game.stochastic:
            return _expectimax_value(state, self.d, self.inner.predict_value)
        return _maxn_value(state, self.d, self.inner.predict_value, None)
