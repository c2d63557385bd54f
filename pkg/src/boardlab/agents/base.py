"""Agent interface and the trivial agents."""
from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass

from ..core import GameState, ScoreTuple, zeros


@dataclass
class SearchConfig:
    """Knobs shared by the decision-time search agents."""

    iterations: int = 10000       # MCTS / MCTSE
    k_uct: float = 1.414
    max_tree_depth: int = 10
    rollouts_per_action: int = 50  # MC
    depth: int = 2                 # Max-N / Expectimax-N and d-ply wrappers

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.k_uct <= 0:
            raise ValueError("K_uct must be > 0")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")


class Agent(ABC):
    """Chooses actions and predicts game values.

    ``choose_action`` returns the chosen action together with per-action
    ScoreTuple estimates covering every legal action.
    """

    name: str = "agent"
    is_trainable: bool = False

    @abstractmethod
    def choose_action(self, state: GameState, rng: random.Random):
        ...

    def predict_value(self, state: GameState) -> ScoreTuple:
        """Value estimate used when this agent sits at a search leaf."""
        return zeros(state.game.players)


class RandomAgent(Agent):
    """Uniform over legal actions; value prediction is all zeros."""

    name = "random"

    def choose_action(self, state: GameState, rng: random.Random):
        actions = state.game.legal_actions(state)
        estimates = {a: zeros(state.game.players) for a in actions}
        return actions[rng.randrange(len(actions))], estimates


class HumanAgent(Agent):
    """Moves are supplied externally (terminal prompt or the web UI)."""

    name = "human"

    def __init__(self, ask=None):
        self._ask = ask

    def choose_action(self, state: GameState, rng: random.Random):
        if self._ask is None:
            raise RuntimeError("HumanAgent has no input source attached")
        actions = state.game.legal_actions(state)
        a = self._ask(state, actions)
        estimates = {x: zeros(state.game.players) for x in actions}
        return a, estimates
