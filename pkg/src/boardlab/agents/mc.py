"""Monte Carlo agent: repeated uniform-random rollouts for each action."""
from __future__ import annotations

import random

from ..core import GameState
from .base import Agent, SearchConfig


class MCAgent(Agent):
    name = "mc"

    def __init__(self, cfg: SearchConfig = None):
        self.cfg = cfg if cfg is not None else SearchConfig()
        if self.cfg.rollouts_per_action < 1:
            raise ValueError("rollouts_per_action must be >= 1")

    def choose_action(self, state: GameState, rng: random.Random):
        game = state.game
        mover = state.to_move
        n = self.cfg.rollouts_per_action
        estimates = {}
        for a in game.legal_actions(state):
            child = game.apply_action(state, a)
            totals = [0.0] * game.players
            for _ in range(n):
                scores = game.rollout(child, rng)
                for i, v in enumerate(scores):
                    totals[i] += v
            estimates[a] = tuple(t / n for t in totals)
        best = min(estimates, key=lambda a: (-estimates[a][mover], a))
        return best, estimates
